#pragma once

// Umbrella header for the primal graphical lasso toolkit.

#include "pgl/data.hpp"
#include "pgl/errors.hpp"
#include "pgl/linalg.hpp"
#include "pgl/matrix_io.hpp"
#include "pgl/oracle.hpp"
#include "pgl/path.hpp"
#include "pgl/penalty.hpp"
#include "pgl/rng.hpp"
#include "pgl/solver.hpp"
#include "pgl/symmetric_matrix.hpp"
