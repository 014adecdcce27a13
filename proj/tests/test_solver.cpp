#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pgl/linalg.hpp"
#include "pgl/oracle.hpp"
#include "pgl/penalty.hpp"
#include "pgl/solver.hpp"
#include "test_helpers.hpp"

using namespace pgl;
using namespace testutil;

namespace {

SolverConfig tight_config(double tol = 1e-10) {
    SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_sweeps = 500;
    cfg.validate = true;
    return cfg;
}

// Independent re-implementation of one coordinate sweep plus the diagonal
// update on column i, driven by a directly inverted complement block.
ColumnSplit reference_column_sweep(const SymmetricMatrix& theta, const SymmetricMatrix& s,
                                   double lambda, int i, int sweeps) {
    const int p = theta.dim();
    const int d = p - 1;
    auto m = gauss_jordan_inverse(delete_row_col(theta, i));
    std::vector<double> x(d), s1p(d);
    for (int r = 0, j = 0; r < p; ++r) {
        if (r == i) continue;
        x[j] = theta(r, i);
        s1p[j] = s(r, i);
        ++j;
    }
    const double q = s(i, i) + lambda;
    for (int t = 0; t < sweeps; ++t) {
        for (int j = 0; j < d; ++j) {
            double off = 0.0;
            for (int k = 0; k < d; ++k)
                if (k != j) off += m(j, k) * x[k];
            const double a = s1p[j] + q * off;
            const double b = q * m(j, j);
            x[j] = soft_threshold(-a, lambda) / b;
        }
    }
    double quad = 0.0;
    for (int j = 0; j < d; ++j) {
        double mj = 0.0;
        for (int k = 0; k < d; ++k) mj += m(j, k) * x[k];
        quad += x[j] * mj;
    }
    ColumnSplit out;
    out.target = i;
    out.off_diagonal = x;
    out.diagonal = 1.0 / q + quad;
    return out;
}

void check_trace_monotone(const std::vector<SweepRecord>& trace) {
    for (size_t k = 1; k < trace.size(); ++k)
        CHECK(trace[k].objective <=
              trace[k - 1].objective + 1e-10 * std::abs(trace[k - 1].objective));
}

}  // namespace

TEST_CASE("column_update is a no-op at the decoupled fixed point") {
    SymmetricMatrix s(4);
    for (int i = 0; i < 4; ++i) s.set(i, i, 0.5 + 0.5 * i);
    auto pen = PenaltySpec::l1(0.7);
    auto st = init_state(s, pen);
    const double obj0 = st.objective;
    for (int i = 0; i < 4; ++i) {
        auto st2 = column_update(st, s, pen, i, SolverConfig{});
        CHECK(max_abs_diff(st2.theta, st.theta) == 0.0);
        CHECK(st2.objective == Catch::Approx(obj0).margin(1e-14));
    }
}

TEST_CASE("column_update stays diagonal when lambda dominates the off-diagonals") {
    auto s = random_correlation_like(6, 3);
    const double q = s.max_abs_off_diagonal();
    auto pen = PenaltySpec::l1(q);  // lambda == max |s_ij| still thresholds to zero
    auto st = init_state(s, pen);
    for (int i = 0; i < 6; ++i) {
        st = column_update(st, s, pen, i, SolverConfig{});
        CHECK(st.theta.nnz_off_diagonal() == 0);
    }
}

TEST_CASE("column_update matches an independent single-sweep implementation") {
    const int p = 6;
    auto s = random_correlation_like(p, 9);
    const double lambda = 0.4 * s.max_abs_off_diagonal();
    auto pen = PenaltySpec::l1(lambda);

    // A generic positive definite state with a consistent tracked inverse.
    auto theta = random_spd(p, 42, 1.0);
    auto st = state_from_pair(theta, gauss_jordan_inverse(theta), s, pen);

    SolverConfig cfg;
    cfg.inner_sweeps = 1;
    for (int i = 0; i < p; ++i) {
        auto expect = reference_column_sweep(st.theta, s, lambda, i, 1);
        auto st2 = column_update(st, s, pen, i, cfg);
        auto got = column_split(st2.theta, i);
        for (int j = 0; j < p - 1; ++j)
            CHECK(got.off_diagonal[j] == Catch::Approx(expect.off_diagonal[j]).margin(1e-12));
        CHECK(got.diagonal == Catch::Approx(expect.diagonal).margin(1e-12));
        st = st2;
    }
}

TEST_CASE("column_update matches the reference for T_o = 2") {
    const int p = 5;
    auto s = random_correlation_like(p, 29);
    const double lambda = 0.3 * s.max_abs_off_diagonal();
    auto pen = PenaltySpec::l1(lambda);
    auto theta = random_spd(p, 17, 1.0);
    auto st = state_from_pair(theta, gauss_jordan_inverse(theta), s, pen);
    SolverConfig cfg;
    cfg.inner_sweeps = 2;
    auto expect = reference_column_sweep(st.theta, s, lambda, 3, 2);
    auto st2 = column_update(st, s, pen, 3, cfg);
    auto got = column_split(st2.theta, 3);
    for (int j = 0; j < p - 1; ++j)
        CHECK(got.off_diagonal[j] == Catch::Approx(expect.off_diagonal[j]).margin(1e-12));
}

TEST_CASE("proximal column step does not move a dead column") {
    // s1p = 0 for column 2 and a diagonal state: gradient lands in the dead zone.
    SymmetricMatrix s = SymmetricMatrix::identity(4);
    s.set(0, 1, 0.3);  // other columns may couple; column 2/3 stay clean
    auto pen = PenaltySpec::l1(0.5);
    auto st = init_state(s, pen);
    auto st2 = column_update_proximal(st, s, pen, 2, SolverConfig{});
    CHECK(max_abs_diff(st2.theta, st.theta) == 0.0);
}

TEST_CASE("proximal column steps satisfy the sufficient decrease bound") {
    for (uint64_t seed = 1; seed <= 4; ++seed) {
        const int p = 7;
        auto s = random_correlation_like(p, 100 + seed);
        const double lambda = 0.3 * s.max_abs_off_diagonal();
        auto pen = PenaltySpec::l1(lambda);

        // Visit states of varying closeness to the optimum.
        SolverConfig warmup;
        warmup.max_sweeps = int(seed);
        warmup.tol = 1e-16;
        auto base = solve(s, pen, warmup);

        for (int i = 0; i < p; ++i) {
            auto before = base.state;
            auto after = column_update_proximal(before, s, pen, i, SolverConfig{});
            // Independent Lipschitz constant: 2 (s_ii + lambda) lambda_max of
            // the directly inverted complement block.
            auto m = gauss_jordan_inverse(delete_row_col(before.theta, i));
            const double lip = 2.0 * (s(i, i) + lambda) * jacobi_eigenvalues(m).back();
            double step_sq = 0.0;
            for (int r = 0; r < p; ++r) {
                if (r == i) continue;
                const double d = after.theta(r, i) - before.theta(r, i);
                step_sq += d * d;
            }
            const double drop = objective(before.theta, s, pen) - objective(after.theta, s, pen);
            CHECK(drop >= 0.5 * lip * step_sq - 1e-10);
        }
    }
}

TEST_CASE("repeated proximal steps on one column reach the exact column solution") {
    const int p = 6;
    auto s = random_correlation_like(p, 55);
    const double lambda = 0.25 * s.max_abs_off_diagonal();
    auto pen = PenaltySpec::l1(lambda);
    SolverConfig warmup;
    warmup.max_sweeps = 1;
    warmup.tol = 1e-16;
    auto st = solve(s, pen, warmup).state;

    const int i = 2;
    for (int k = 0; k < 20000; ++k) st = SolverState(column_update_proximal(st, s, pen, i, SolverConfig{}));

    // Exact column solution: coordinate descent iterated to a fixed point.
    auto expect = reference_column_sweep(st.theta, s, lambda, i, 400);
    auto got = column_split(st.theta, i);
    for (int j = 0; j < p - 1; ++j)
        CHECK(got.off_diagonal[j] == Catch::Approx(expect.off_diagonal[j]).margin(1e-6));
    CHECK(got.diagonal == Catch::Approx(expect.diagonal).margin(1e-6));
}

TEST_CASE("solve on a diagonal instance finishes in one sweep") {
    auto s = SymmetricMatrix::identity(3);
    auto pen = PenaltySpec::l1(1.0);
    auto r = solve(s, pen, tight_config(1e-8));
    CHECK(r.converged);
    CHECK(r.state.sweep_count == 1);
    for (int i = 0; i < 3; ++i) {
        CHECK(r.state.theta(i, i) == Catch::Approx(0.5).margin(1e-15));
        CHECK(r.state.w(i, i) == Catch::Approx(2.0).margin(1e-15));
    }
    CHECK(r.state.objective ==
          Catch::Approx(-3.0 * std::log(0.5) + 1.5 + 1.5).epsilon(1e-14));
    CHECK(r.validation.clean());
}

TEST_CASE("solve matches the 2x2 closed form") {
    SymmetricMatrix s(2);
    s.set(0, 0, 1.0);
    s.set(1, 1, 1.0);
    s.set(0, 1, 0.8);
    auto pen = PenaltySpec::l1(0.1);
    auto r = solve(s, pen, tight_config(1e-12));
    auto expect = closed_form_2x2(s, 0.1);
    CHECK(max_abs_diff(r.state.theta, expect) < 1e-6);
    // w12 = s12 - lambda sgn(theta12 solution path), diagonal s_ii + lambda
    CHECK(r.state.w(0, 1) == Catch::Approx(0.7).margin(1e-6));
    CHECK(r.state.w(0, 0) == Catch::Approx(1.1).margin(1e-6));
}

TEST_CASE("solve agrees with the dual oracle at small p") {
    for (int p : {5, 10}) {
        auto s = random_correlation_like(p, 200 + p);
        const double lambda = 0.5 * s.max_abs_off_diagonal();
        auto pen = PenaltySpec::l1(lambda);
        auto r = solve(s, pen, tight_config(1e-10));
        REQUIRE(r.converged);
        auto oracle = dual_projected_gradient(s, lambda, 1e-9);
        const double got = r.state.objective;
        const double expect = objective(oracle.theta_star, s, pen);
        CHECK(std::abs(got - expect) <= 1e-6 * std::abs(expect));
        CHECK(r.validation.clean());
    }
}

TEST_CASE("pex equals pine on a diagonal instance and does more inner work on dense ones") {
    SymmetricMatrix s(3);
    for (int i = 0; i < 3; ++i) s.set(i, i, 1.0 + i);
    auto pen = PenaltySpec::l1(0.5);
    auto pine = solve(s, pen, tight_config(1e-8));
    auto pex = solve_pex(s, pen, tight_config(1e-8));
    CHECK(pex.state.sweep_count == 1);
    CHECK(max_abs_diff(pex.state.theta, pine.state.theta) == 0.0);

    // Dense solution instance: inner loop must exceed one sweep per column
    // somewhere.
    auto dense_s = random_correlation_like(10, 77);
    auto dense_pen = PenaltySpec::l1(0.05 * dense_s.max_abs_off_diagonal());
    auto r = solve_pex(dense_s, dense_pen, tight_config(1e-8));
    CHECK(r.state.counters.inner_sweeps > r.state.counters.column_updates);
}

TEST_CASE("pex and pine reach the same objective") {
    auto s = random_correlation_like(10, 311);
    auto pen = PenaltySpec::l1(0.3 * s.max_abs_off_diagonal());
    auto pine = solve(s, pen, tight_config(1e-8));
    auto pex = solve_pex(s, pen, tight_config(1e-8));
    CHECK(std::abs(pine.state.objective - pex.state.objective) <=
          1e-6 * std::abs(pine.state.objective));
}

TEST_CASE("pgr solves a diagonal instance during the growth pass") {
    SymmetricMatrix s(5);
    for (int i = 0; i < 5; ++i) s.set(i, i, 1.0 + 0.25 * i);
    auto pen = PenaltySpec::l1(0.4);
    auto r = solve_pgr(s, pen, tight_config(1e-8));
    CHECK(r.converged);
    CHECK(r.state.sweep_count <= 1);
    CHECK(r.state.counters.coordinate_moves == 0);
    for (int i = 0; i < 5; ++i)
        CHECK(r.state.theta(i, i) == Catch::Approx(1.0 / (s(i, i) + 0.4)).margin(1e-14));
}

TEST_CASE("pgr reaches the pine minimizer") {
    auto s = random_correlation_like(10, 401);
    auto pen = PenaltySpec::l1(0.3 * s.max_abs_off_diagonal());
    auto pine = solve(s, pen, tight_config(1e-8));
    auto pgr = solve_pgr(s, pen, tight_config(1e-8));
    CHECK(std::abs(pine.state.objective - pgr.state.objective) <=
          1e-6 * std::abs(pine.state.objective));
    CHECK(pgr.validation.clean());
}

TEST_CASE("pgr growth pass costs about a third of one full sweep") {
    const int p = 100;
    auto s = random_correlation_like(p, 500);
    auto pen = PenaltySpec::l1(0.5 * s.max_abs_off_diagonal());
    SolverConfig cfg;
    cfg.tol = 1e-6;
    cfg.max_sweeps = 50;
    auto pgr = solve_pgr(s, pen, cfg);
    const double growth = double(pgr.state.growth_counters.flops);
    SolverConfig one;
    one.tol = 1e-16;
    one.max_sweeps = 1;
    auto pine = solve(s, pen, one);
    const double sweep = double(pine.state.counters.flops);
    const double ratio = growth / sweep;
    CHECK(ratio >= 0.25);
    CHECK(ratio <= 0.45);
}

TEST_CASE("objective closed forms and tracked consistency") {
    auto s2 = SymmetricMatrix::identity(2);
    auto pen = PenaltySpec::l1(1.0);
    CHECK(objective(SymmetricMatrix::identity(2), s2, pen) == Catch::Approx(4.0));
    SymmetricMatrix two = SymmetricMatrix::identity(2);
    two.set(0, 0, 2.0);
    two.set(1, 1, 2.0);
    CHECK(objective(two, s2, pen) == Catch::Approx(-2.0 * std::log(2.0) + 4.0 + 4.0));

    SymmetricMatrix bad(2);
    bad.set(0, 0, -1.0);
    bad.set(1, 1, 1.0);
    CHECK_THROWS_AS(objective(bad, s2, pen), std::domain_error);

    auto s = random_correlation_like(8, 600);
    auto pen8 = PenaltySpec::l1(0.2 * s.max_abs_off_diagonal());
    auto r = solve(s, pen8, tight_config(1e-8));
    const double scratch = objective(r.state.theta, s, pen8);
    CHECK(std::abs(r.state.objective - scratch) <= 1e-8 * std::abs(scratch));
}

TEST_CASE("kkt_residual pins the stationarity system") {
    SymmetricMatrix s(3);
    for (int i = 0; i < 3; ++i) s.set(i, i, 1.0 + i);
    auto pen = PenaltySpec::l1(0.5);
    auto st = init_state(s, pen);
    CHECK(kkt_residual(st.theta, st.w, s, pen) < 1e-12);

    auto rs = random_correlation_like(5, 700);
    auto rpen = PenaltySpec::l1(0.4 * rs.max_abs_off_diagonal());
    auto r = solve(rs, rpen, tight_config(1e-10));
    CHECK(kkt_residual(r.state.theta, r.state.w, rs, rpen) < 1e-6);

    auto perturbed = r.state.theta;
    perturbed.set(0, 1, perturbed(0, 1) + 0.1);
    auto w2 = gauss_jordan_inverse(perturbed);
    CHECK(kkt_residual(perturbed, w2, rs, rpen) > 0.01);
}

TEST_CASE("dual_gap certifies optimality") {
    SymmetricMatrix s(3);
    for (int i = 0; i < 3; ++i) s.set(i, i, 1.0 + 0.5 * i);
    auto pen = PenaltySpec::l1(0.5);
    auto st = init_state(s, pen);  // exact solution for diagonal s
    CHECK(std::abs(dual_gap(st.theta, st.w, s, pen)) < 1e-10);

    auto rs = random_correlation_like(5, 800);
    auto rpen = PenaltySpec::l1(0.4 * rs.max_abs_off_diagonal());
    auto r = solve(rs, rpen, tight_config(1e-10));
    const double gap = dual_gap(r.state.theta, r.state.w, rs, rpen);
    CHECK(gap >= -1e-12);
    CHECK(gap < 1e-5);

    auto st0 = init_state(rs, rpen);  // default init is suboptimal here
    CHECK(dual_gap(st0.theta, st0.w, rs, rpen) > 0.0);
}

TEST_CASE("screen finds thresholded connected components") {
    // Two decoupled blocks.
    SymmetricMatrix s(4);
    for (int i = 0; i < 4; ++i) s.set(i, i, 1.0);
    s.set(0, 1, 0.9);
    s.set(2, 3, 0.8);
    auto comps = screen(s, 0.5);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<int>{0, 1});
    CHECK(comps[1] == std::vector<int>{2, 3});

    auto singletons = screen(s, 0.95);
    CHECK(singletons.size() == 4);
}

TEST_CASE("screen matches a breadth-first-search oracle on random patterns") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        const int p = 50;
        Rng rng(9000 + seed);
        SymmetricMatrix s(p);
        for (int i = 0; i < p; ++i) {
            s.set(i, i, 1.0);
            for (int j = 0; j < i; ++j)
                s.set(i, j, rng.uniform() < 0.04 ? rng.uniform_symmetric() : 0.0);
        }
        const double lambda = 0.3;
        auto comps = screen(s, lambda);

        // BFS oracle
        std::vector<int> label(p, -1);
        int next = 0;
        for (int start = 0; start < p; ++start) {
            if (label[start] >= 0) continue;
            std::vector<int> stack{start};
            label[start] = next;
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (int u = 0; u < p; ++u)
                    if (u != v && label[u] < 0 && std::abs(s(u, v)) > lambda) {
                        label[u] = next;
                        stack.push_back(u);
                    }
            }
            ++next;
        }
        std::vector<std::vector<int>> expect(next);
        for (int v = 0; v < p; ++v) expect[label[v]].push_back(v);
        REQUIRE(comps.size() == expect.size());
        CHECK(comps == expect);
    }
}

TEST_CASE("screened solve matches the whole-matrix solve on separable instances") {
    SymmetricMatrix s(6);
    for (int i = 0; i < 6; ++i) s.set(i, i, 1.0);
    s.set(0, 1, 0.7);
    s.set(1, 2, 0.6);
    s.set(3, 4, 0.8);
    s.set(4, 5, 0.5);
    auto pen = PenaltySpec::l1(0.1);
    auto whole = solve(s, pen, tight_config(1e-12));
    auto split = solve_screened(s, pen, tight_config(1e-12));
    CHECK(std::abs(whole.state.objective - split.state.objective) <= 1e-8);
    CHECK(max_abs_diff(whole.state.theta, split.state.theta) < 1e-6);
}

TEST_CASE("variant mini-battery agrees at tight tolerance") {
    auto s = random_correlation_like(12, 1234);
    auto pen = PenaltySpec::l1(0.35 * s.max_abs_off_diagonal());
    std::vector<double> objectives;

    auto cfg = tight_config(1e-8);
    cfg.inner_sweeps = 1;
    objectives.push_back(solve(s, pen, cfg).state.objective);
    cfg.inner_sweeps = 2;
    objectives.push_back(solve(s, pen, cfg).state.objective);
    objectives.push_back(solve_pex(s, pen, tight_config(1e-8)).state.objective);
    objectives.push_back(solve_pgr(s, pen, tight_config(1e-8)).state.objective);
    auto prox_cfg = tight_config(1e-8);
    prox_cfg.inner_style = InnerStyle::Proximal;
    objectives.push_back(solve(s, pen, prox_cfg).state.objective);

    for (double o : objectives)
        CHECK(std::abs(o - objectives.front()) <= 1e-6 * std::abs(objectives.front()));
}

TEST_CASE("weighted and elastic net penalties reach their stationary systems") {
    auto s = random_correlation_like(8, 1500);

    SymmetricMatrix w(8);
    Rng rng(4);
    for (int i = 0; i < 8; ++i) {
        w.set(i, i, 0.5 + rng.uniform());
        for (int j = 0; j < i; ++j) w.set(i, j, rng.uniform());
    }
    auto wl1 = PenaltySpec::weighted_l1(0.3, w);
    auto rw = solve(s, wl1, tight_config(1e-12));
    CHECK(kkt_residual(rw.state.theta, rw.state.w, s, wl1) < 1e-7);
    CHECK(rw.validation.clean());
    CHECK(dual_gap(rw.state.theta, rw.state.w, s, wl1) < 1e-7);

    auto enet = PenaltySpec::elastic_net(0.3, 0.6);
    auto re = solve(s, enet, tight_config(1e-12));
    CHECK(kkt_residual(re.state.theta, re.state.w, s, enet) < 1e-7);
    CHECK(re.validation.monotonicity_violations == 0);
    CHECK(re.validation.pd_failures == 0);
    check_trace_monotone(re.trace);
}

TEST_CASE("zero diagonal weights reproduce the unpenalized-diagonal variant") {
    auto s = random_correlation_like(6, 1600);
    SymmetricMatrix w(6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < i; ++j) w.set(i, j, 1.0);
    auto wl1 = PenaltySpec::weighted_l1(0.2, w);  // zero diagonal weights

    auto flag = PenaltySpec::l1(0.2);
    flag.penalize_diagonal = false;

    auto a = solve(s, wl1, tight_config(1e-12));
    auto b = solve(s, flag, tight_config(1e-12));
    CHECK(max_abs_diff(a.state.theta, b.state.theta) < 1e-8);
}

TEST_CASE("inverse tracking stays tight over many sweeps without refresh") {
    const int p = 60;
    auto s = random_correlation_like(p, 1700);
    auto pen = PenaltySpec::l1(0.2 * s.max_abs_off_diagonal());
    SolverConfig cfg;
    cfg.tol = 1e-15;
    cfg.max_sweeps = 20;
    cfg.validate = true;
    auto r = solve(s, pen, cfg);
    CHECK(r.validation.max_drift <= 1e-7);
    CHECK(r.validation.pd_failures == 0);
    CHECK(r.validation.objective_inconsistencies == 0);
}

TEST_CASE("refresh policy rebuilds the inverse periodically") {
    auto s = random_correlation_like(12, 1800);
    auto pen = PenaltySpec::l1(0.2 * s.max_abs_off_diagonal());
    SolverConfig cfg = tight_config(1e-10);
    cfg.refresh_every = 2;
    auto r = solve(s, pen, cfg);
    CHECK(r.converged);
    CHECK(r.validation.clean());
}

TEST_CASE("column update cost scales quadratically with dimension") {
    auto measure = [](int p) {
        auto s = random_correlation_like(p, 2000 + p);
        auto pen = PenaltySpec::l1(0.5 * s.max_abs_off_diagonal());
        SolverConfig cfg;
        cfg.tol = 1e-16;
        cfg.max_sweeps = 2;
        auto warm = solve(s, pen, cfg);
        const auto before = warm.state.counters.flops;
        auto st = column_update(warm.state, s, pen, 0, SolverConfig{});
        return double(st.counters.flops - before);
    };
    const double ratio = measure(400) / measure(200);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 6.0);
}

TEST_CASE("solver rejects invalid inputs") {
    auto s = SymmetricMatrix::identity(3);
    CHECK_THROWS_AS(solve(s, PenaltySpec::l1(0.0), SolverConfig{}), std::invalid_argument);
    CHECK_THROWS_AS(solve(s, PenaltySpec::l1(-1.0), SolverConfig{}), std::invalid_argument);

    SymmetricMatrix bad = s;
    bad.set(0, 1, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(solve(bad, PenaltySpec::l1(1.0), SolverConfig{}), std::invalid_argument);

    SolverConfig prox;
    prox.inner_style = InnerStyle::Proximal;
    CHECK_THROWS_AS(solve(s, PenaltySpec::elastic_net(1.0, 0.5), prox), std::invalid_argument);

    SolverConfig pex = SolverConfig{};
    pex.variant = Variant::Pex;
    pex.inner_style = InnerStyle::Proximal;
    CHECK_THROWS_AS(solve(s, PenaltySpec::l1(1.0), pex), std::invalid_argument);

    SolverConfig pgr;
    pgr.variant = Variant::Pgr;
    auto init = std::make_pair(SymmetricMatrix::identity(3), SymmetricMatrix::identity(3));
    CHECK_THROWS_AS(solve(s, PenaltySpec::l1(1.0), pgr, init), std::invalid_argument);
}

TEST_CASE("max_sweeps stop reports non-convergence") {
    auto s = random_correlation_like(10, 2100);
    auto pen = PenaltySpec::l1(0.05 * s.max_abs_off_diagonal());
    SolverConfig cfg;
    cfg.tol = 1e-14;
    cfg.max_sweeps = 1;
    auto r = solve(s, pen, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.state.sweep_count == 1);
}

TEST_CASE("solve handles p = 1") {
    SymmetricMatrix s(1);
    s.set(0, 0, 2.0);
    auto r = solve(s, PenaltySpec::l1(0.5), tight_config(1e-10));
    CHECK(r.converged);
    CHECK(r.state.theta(0, 0) == Catch::Approx(0.4));
    CHECK(r.state.w(0, 0) == Catch::Approx(2.5));
}

TEST_CASE("traces are monotone across solves") {
    auto s = random_correlation_like(15, 2200);
    for (double frac : {0.1, 0.4, 0.8}) {
        auto pen = PenaltySpec::l1(frac * s.max_abs_off_diagonal());
        auto r = solve(s, pen, tight_config(1e-8));
        check_trace_monotone(r.trace);
        auto rg = solve_pgr(s, pen, tight_config(1e-8));
        check_trace_monotone(rg.trace);
    }
}
