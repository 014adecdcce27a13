#pragma once

#include <stdexcept>
#include <string>

namespace pgl {

// Thrown when a numerical invariant that the update rules guarantee
// (positive Schur complements, positive pivots of tracked inverses)
// is violated. Reaching this state means the (theta, w) pair is no
// longer a consistent inverse pair and results downstream would be
// meaningless.
class corrupted_state : public std::runtime_error {
public:
    explicit corrupted_state(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace pgl
