#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pgl/oracle.hpp"
#include "pgl/penalty.hpp"
#include "pgl/solver.hpp"
#include "test_helpers.hpp"

using namespace pgl;
using namespace testutil;

TEST_CASE("oracle solves diagonal instances by inspection") {
    SymmetricMatrix s(4);
    for (int i = 0; i < 4; ++i) s.set(i, i, 0.5 + 0.5 * i);
    const double lambda = 0.3;
    auto r = dual_projected_gradient(s, lambda, 1e-10);
    for (int i = 0; i < 4; ++i) {
        CHECK(r.w_star(i, i) == Catch::Approx(s(i, i) + lambda).margin(1e-8));
        CHECK(r.theta_star(i, i) == Catch::Approx(1.0 / (s(i, i) + lambda)).margin(1e-8));
        for (int j = 0; j < i; ++j) CHECK(std::abs(r.w_star(i, j)) < 1e-8);
    }
}

TEST_CASE("oracle satisfies its own feasibility and consistency invariants") {
    for (int p : {5, 10, 25}) {
        auto s = random_correlation_like(p, 3000 + p);
        const double lambda = 0.4 * s.max_abs_off_diagonal();
        auto r = dual_projected_gradient(s, lambda, 1e-9);
        CHECK(max_abs_inverse_error(r.theta_star, r.w_star) < 1e-8);
        double worst = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j <= i; ++j)
                worst = std::max(worst, std::abs(r.w_star(i, j) - s(i, j)));
        CHECK(worst <= lambda + 1e-8);
    }
}

TEST_CASE("oracle matches the 2x2 closed form") {
    SymmetricMatrix s(2);
    s.set(0, 0, 1.0);
    s.set(1, 1, 1.0);
    s.set(0, 1, 0.8);
    auto r = dual_projected_gradient(s, 0.1, 1e-11);
    auto theta = closed_form_2x2(s, 0.1);
    CHECK(max_abs_diff(r.theta_star, theta) < 1e-7);
    CHECK(r.w_star(0, 1) == Catch::Approx(0.7).margin(1e-8));
}

TEST_CASE("oracle and solver cross-check at p = 10") {
    auto s = random_correlation_like(10, 3100);
    const double lambda = 0.45 * s.max_abs_off_diagonal();
    auto pen = PenaltySpec::l1(lambda);
    SolverConfig cfg;
    cfg.tol = 1e-10;
    cfg.max_sweeps = 300;
    auto solver = solve(s, pen, cfg);
    auto oracle = dual_projected_gradient(s, lambda, 1e-9);
    const double oracle_primal = objective(oracle.theta_star, s, pen);
    CHECK(std::abs(solver.state.objective - oracle_primal) <=
          1e-6 * std::abs(oracle_primal));
    // Strong duality: the dual objective equals the primal optimum.
    CHECK(std::abs(oracle.dual_objective - oracle_primal) <= 1e-6 * std::abs(oracle_primal));
}

TEST_CASE("closed_form_2x2 thresholded and sign-equivariant cases") {
    SymmetricMatrix s(2);
    s.set(0, 0, 2.0);
    s.set(1, 1, 3.0);
    s.set(0, 1, 0.4);
    auto theta = closed_form_2x2(s, 0.5);  // |s12| <= lambda
    CHECK(theta(0, 0) == Catch::Approx(1.0 / 2.5));
    CHECK(theta(1, 1) == Catch::Approx(1.0 / 3.5));
    CHECK(theta(0, 1) == 0.0);

    s.set(0, 1, 0.8);
    auto pos = closed_form_2x2(s, 0.1);
    s.set(0, 1, -0.8);
    auto neg = closed_form_2x2(s, 0.1);
    CHECK(pos(0, 0) == Catch::Approx(neg(0, 0)).epsilon(1e-14));
    CHECK(pos(1, 1) == Catch::Approx(neg(1, 1)).epsilon(1e-14));
    CHECK(pos(0, 1) == Catch::Approx(-neg(0, 1)).epsilon(1e-14));
}

TEST_CASE("oracle guards its preconditions") {
    CHECK_THROWS_AS(dual_projected_gradient(SymmetricMatrix::identity(101), 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(dual_projected_gradient(SymmetricMatrix::identity(3), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(closed_form_2x2(SymmetricMatrix::identity(3), 0.5), std::invalid_argument);
}
