#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "pgl/errors.hpp"
#include "pgl/symmetric_matrix.hpp"

namespace pgl {

enum class PenaltyKind { L1, WeightedL1, ElasticNet };

// Separable penalty on the entries of the precision matrix:
//   L1           lambda * sum_ij |theta_ij|
//   WeightedL1   lambda * sum_ij weights_ij |theta_ij|
//   ElasticNet   lambda * sum_ij (alpha |theta_ij| + (1-alpha) theta_ij^2)
// The sum runs over all entries including the diagonal (the diagonal term is
// what shifts s_pp to s_pp + lambda in the column updates). Setting
// penalize_diagonal = false drops the diagonal terms; equivalently, a
// WeightedL1 with zero diagonal weights. Not the default.
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::L1;
    double lambda = 0.0;
    double alpha = 1.0;                       // ElasticNet only, in [0,1]
    std::optional<SymmetricMatrix> weights;   // WeightedL1 only, symmetric >= 0
    bool penalize_diagonal = true;

    static PenaltySpec l1(double lambda) { return {PenaltyKind::L1, lambda, 1.0, std::nullopt, true}; }
    static PenaltySpec weighted_l1(double lambda, SymmetricMatrix w) {
        return {PenaltyKind::WeightedL1, lambda, 1.0, std::move(w), true};
    }
    static PenaltySpec elastic_net(double lambda, double alpha) {
        return {PenaltyKind::ElasticNet, lambda, alpha, std::nullopt, true};
    }

    void validate(int dim) const {
        if (!(lambda > 0.0))
            throw std::invalid_argument("penalty: lambda must be > 0");
        if (kind == PenaltyKind::ElasticNet && !(alpha >= 0.0 && alpha <= 1.0))
            throw std::invalid_argument("penalty: alpha must lie in [0,1]");
        if (kind == PenaltyKind::WeightedL1) {
            if (!weights) throw std::invalid_argument("penalty: weighted-l1 needs a weight matrix");
            if (weights->dim() != dim)
                throw std::invalid_argument("penalty: weight matrix dimension mismatch");
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j <= i; ++j)
                    if (!((*weights)(i, j) >= 0.0))
                        throw std::invalid_argument("penalty: weights must be nonnegative");
        }
    }

    // phi_ij(x): the per-entry penalty term.
    double entry_value(double x, int i, int j) const {
        if (i == j && !penalize_diagonal) return 0.0;
        switch (kind) {
            case PenaltyKind::L1: return lambda * std::abs(x);
            case PenaltyKind::WeightedL1: return lambda * (*weights)(i, j) * std::abs(x);
            case PenaltyKind::ElasticNet:
                return lambda * (alpha * std::abs(x) + (1.0 - alpha) * x * x);
        }
        return 0.0;
    }

    // |.|-coefficient of phi_ij, i.e. the box radius of its subdifferential
    // at zero. infinity marks an unconstrained dual entry (unpenalized).
    double l1_coefficient(int i, int j) const {
        if (i == j && !penalize_diagonal) return 0.0;
        switch (kind) {
            case PenaltyKind::L1: return lambda;
            case PenaltyKind::WeightedL1: return lambda * (*weights)(i, j);
            case PenaltyKind::ElasticNet: return lambda * alpha;
        }
        return 0.0;
    }

    // Quadratic coefficient of phi_ij (elastic net's ridge part).
    double quad_coefficient(int i, int j) const {
        if (kind != PenaltyKind::ElasticNet) return 0.0;
        if (i == j && !penalize_diagonal) return 0.0;
        return lambda * (1.0 - alpha);
    }
};

// sgn(a) * (|a| - gamma)_+, the prox of gamma|.|.
inline double soft_threshold(double a, double gamma) {
    if (a > gamma) return a - gamma;
    if (a < -gamma) return a + gamma;
    return 0.0;
}

// Exact minimizer over x of (b/2) x^2 - a x + phi_ij(x) for the given
// penalty; this is the one-dimensional subproblem of the inner coordinate
// sweep (the caller passes the negated residual as a).
inline double coordinate_prox(double a, double b, const PenaltySpec& pen, int i, int j) {
    if (!(b > 0.0))
        throw corrupted_state("coordinate_prox: nonpositive curvature, convexity violated");
    const double gamma = pen.l1_coefficient(i, j);
    const double ridge = 2.0 * pen.quad_coefficient(i, j);
    return soft_threshold(a, gamma) / (b + ridge);
}

// Full penalty over all entries (diagonal counted once, off-diagonal pairs
// twice, matching the sum over all i,j).
inline double penalty_value(const SymmetricMatrix& theta, const PenaltySpec& pen) {
    const int p = theta.dim();
    double s = 0.0;
    for (int i = 0; i < p; ++i) {
        s += pen.entry_value(theta(i, i), i, i);
        for (int j = 0; j < i; ++j) s += 2.0 * pen.entry_value(theta(i, j), i, j);
    }
    return s;
}

}  // namespace pgl
