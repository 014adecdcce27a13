#pragma once

#include <cstdint>
#include <random>

namespace pgl {

// All randomness in the toolkit flows through this generator so instances
// are reproducible from a single 64-bit seed. The integer stream is the
// standard-specified mt19937_64; uniforms take the top 53 bits; normals use
// the Marsaglia polar transform. No std::*_distribution is used anywhere
// (their streams are implementation-defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    // Uniform on [-1, 1).
    double uniform_symmetric() { return 2.0 * uniform() - 1.0; }

    // Standard normal via the polar method; the rejection loop keeps the
    // stream deterministic given the seed.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform_symmetric();
            v = uniform_symmetric();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pgl
