#pragma once

#include <cmath>
#include <stdexcept>

#include "pgl/linalg.hpp"
#include "pgl/symmetric_matrix.hpp"

namespace pgl {

// Reference solver for correctness testing. Works on the dual
//   maximize  log det(s + v) + p   over  |v_ij| <= lambda
// whose optimum equals the primal optimum, with the primal-dual link
// theta^{-1} = s + v. Projected gradient ascent with backtracking and direct
// matrix inversion throughout; deliberately shares no code path with the
// block-coordinate solver.
struct OracleResult {
    SymmetricMatrix w_star;      // s + v at the dual optimum
    SymmetricMatrix theta_star;  // direct inverse of w_star
    double dual_objective = 0.0;
    int iterations = 0;
};

inline OracleResult dual_projected_gradient(const SymmetricMatrix& s, double lambda,
                                            double tol = 1e-8, int max_iterations = 200000) {
    const int p = s.dim();
    if (p > 100)
        throw std::invalid_argument("oracle: desk-scale reference solver, p <= 100 required");
    if (!(lambda > 0.0)) throw std::invalid_argument("oracle: lambda must be > 0");

    // v = lambda I is always feasible and keeps s + v positive definite for
    // positive semidefinite s.
    SymmetricMatrix v(p);
    for (int i = 0; i < p; ++i) v.set(i, i, lambda);

    auto eval = [&](const SymmetricMatrix& vv, double& logdet) {
        SymmetricMatrix b(p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j <= i; ++j) b.set(i, j, s(i, j) + vv(i, j));
        const auto ch = cholesky_check(b);
        if (!ch.is_pd) return false;
        logdet = ch.logdet;
        return true;
    };

    double logdet = 0.0;
    if (!eval(v, logdet))
        throw std::invalid_argument("oracle: s + lambda I is not positive definite");
    double dual = logdet + double(p);

    double step = 1.0;
    int it = 0;
    for (; it < max_iterations; ++it) {
        SymmetricMatrix b(p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j <= i; ++j) b.set(i, j, s(i, j) + v(i, j));
        auto f = CholeskyFactor::compute(b);
        if (!f) throw std::runtime_error("oracle: iterate left the positive definite cone");
        SymmetricMatrix grad = f->inverse();  // gradient of log det(s + v)

        // Backtrack (halving) until the projected step keeps s+v positive
        // definite and achieves sufficient ascent.
        bool accepted = false;
        SymmetricMatrix v_new(p);
        double logdet_new = 0.0, dual_new = 0.0, gain = 0.0;
        for (int bt = 0; bt < 80; ++bt) {
            gain = 0.0;
            for (int i = 0; i < p; ++i)
                for (int j = 0; j <= i; ++j) {
                    double x = v(i, j) + step * grad(i, j);
                    x = std::clamp(x, -lambda, lambda);
                    v_new.set(i, j, x);
                    gain += (i == j ? 1.0 : 2.0) * grad(i, j) * (x - v(i, j));
                }
            if (eval(v_new, logdet_new)) {
                dual_new = logdet_new + double(p);
                if (dual_new >= dual + 1e-4 * gain) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) throw std::runtime_error("oracle: backtracking failed to make progress");

        // Projected gradient norm at the accepted step.
        double pg = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j <= i; ++j)
                pg = std::max(pg, std::abs(v_new(i, j) - v(i, j)) / step);
        v = v_new;
        dual = dual_new;
        if (pg < tol) break;
        step = std::min(step * 1.5, 1e4);
    }
    if (it >= max_iterations)
        throw std::runtime_error("oracle: projected gradient did not converge within the cap");

    OracleResult out;
    out.w_star = SymmetricMatrix(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j) out.w_star.set(i, j, s(i, j) + v(i, j));
    auto inv = spd_inverse(out.w_star);
    if (!inv) throw std::runtime_error("oracle: w_star is not positive definite");
    out.theta_star = *inv;
    out.dual_objective = dual;
    out.iterations = it + 1;
    return out;
}

// Direct KKT solution at p = 2. Below the threshold the solution is
// diagonal; above it, w12 = s12 - lambda sgn(s12) with w_ii = s_ii + lambda,
// and theta is the explicit 2x2 inverse.
inline SymmetricMatrix closed_form_2x2(const SymmetricMatrix& s, double lambda) {
    if (s.dim() != 2) throw std::invalid_argument("closed_form_2x2: p must be 2");
    if (!(lambda > 0.0)) throw std::invalid_argument("closed_form_2x2: lambda must be > 0");
    SymmetricMatrix theta(2);
    const double s12 = s(0, 1);
    if (std::abs(s12) <= lambda) {
        theta.set(0, 0, 1.0 / (s(0, 0) + lambda));
        theta.set(1, 1, 1.0 / (s(1, 1) + lambda));
        return theta;
    }
    const double w11 = s(0, 0) + lambda;
    const double w22 = s(1, 1) + lambda;
    const double w12 = s12 - lambda * (s12 > 0.0 ? 1.0 : -1.0);
    const double det = w11 * w22 - w12 * w12;
    theta.set(0, 0, w22 / det);
    theta.set(1, 1, w11 / det);
    theta.set(0, 1, -w12 / det);
    return theta;
}

}  // namespace pgl
