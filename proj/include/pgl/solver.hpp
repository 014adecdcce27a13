#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgl/errors.hpp"
#include "pgl/linalg.hpp"
#include "pgl/penalty.hpp"
#include "pgl/symmetric_matrix.hpp"

namespace pgl {

enum class Variant { Pine, Pex, Pgr };
enum class InnerStyle { Coordinate, Proximal };

struct SolverConfig {
    Variant variant = Variant::Pine;
    InnerStyle inner_style = InnerStyle::Coordinate;
    int inner_sweeps = 1;        // T_o, fixed inner sweep count (pine/pgr)
    double inner_tol = -1.0;     // pex inner stop; < 0 means 1e-2 * tol
    int max_inner_sweeps = 1000; // pex safety cap
    double tol = 1e-5;           // relative objective change between sweeps
    int max_sweeps = 200;
    int refresh_every = 0;       // 0 = never rebuild w by direct inversion
    int pgr_initial_dim = 1;
    bool trace_kkt = true;

    // Test instrumentation. validate checks monotonicity, the Schur
    // identity, positive definiteness and tracked-value consistency as the
    // solve runs; validate_exact rechecks the Schur identity against a
    // directly inverted submatrix (small p only, O(p^3) per column).
    bool validate = false;
    bool validate_exact = false;

    // The solver draws no randomness anywhere; solves are a pure function
    // of (s, penalty, config, init).
    static constexpr bool deterministic = true;

    void check() const {
        if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be > 0");
        if (inner_sweeps < 1) throw std::invalid_argument("config: inner_sweeps must be >= 1");
        if (max_sweeps < 1) throw std::invalid_argument("config: max_sweeps must be >= 1");
        if (refresh_every < 0) throw std::invalid_argument("config: refresh_every must be >= 0");
        if (pgr_initial_dim < 1) throw std::invalid_argument("config: pgr_initial_dim must be >= 1");
        if (variant == Variant::Pex && inner_style == InnerStyle::Proximal)
            throw std::invalid_argument("config: pex supports the coordinate inner style only");
    }

    double effective_inner_tol() const { return inner_tol > 0.0 ? inner_tol : 1e-2 * tol; }
};

struct OpCounters {
    uint64_t flops = 0;  // multiply-add count of the column-update kernels
    uint64_t column_updates = 0;
    uint64_t inner_sweeps = 0;
    uint64_t coordinate_moves = 0;
};

struct SolverState {
    SymmetricMatrix theta;
    SymmetricMatrix w;  // tracked inverse of theta
    LogDetAccumulator logdet;
    double trace_s = 0.0;        // <s, theta>, tracked incrementally
    double penalty = 0.0;        // penalty value, tracked incrementally
    double objective = 0.0;      // -logdet + trace_s + penalty
    long sweep_count = 0;
    int active_dim = 0;          // pgr growth frontier; == dim() otherwise
    OpCounters counters;
    OpCounters growth_counters;  // snapshot at the end of the pgr growing pass

    int dim() const { return theta.dim(); }
    void refresh_objective() { objective = -logdet.value + trace_s + penalty; }
};

struct Diagnostics {
    double kkt_residual = std::numeric_limits<double>::quiet_NaN();
    double dual_gap = std::numeric_limits<double>::infinity();
    int nnz_offdiag = 0;
    double min_pivot = std::numeric_limits<double>::quiet_NaN();
};

struct SweepRecord {
    long sweep = 0;
    double objective = 0.0;
    double logdet = 0.0;
    double penalty = 0.0;
    int nnz_offdiag = 0;
    double elapsed_ms = 0.0;
    double kkt_residual = std::numeric_limits<double>::quiet_NaN();
};

struct ValidationReport {
    long long column_updates = 0;
    long long monotonicity_violations = 0;
    long long schur_violations = 0;
    long long pd_failures = 0;
    long long lemma2_violations = 0;
    long long objective_inconsistencies = 0;
    double max_schur_rel_err = 0.0;
    double max_drift = 0.0;  // max |theta w - I| seen at sweep boundaries
    double worst_lemma2_margin = std::numeric_limits<double>::infinity();

    bool clean() const {
        return monotonicity_violations == 0 && schur_violations == 0 && pd_failures == 0 &&
               lemma2_violations == 0 && objective_inconsistencies == 0;
    }
};

struct SolveResult {
    SolverState state;
    Diagnostics diagnostics;
    std::vector<SweepRecord> trace;
    bool converged = false;
    ValidationReport validation;
};

// ---------------------------------------------------------------------------
// Objective and optimality measures
// ---------------------------------------------------------------------------

inline double trace_product(const SymmetricMatrix& s, const SymmetricMatrix& theta) {
    const int p = s.dim();
    double t = 0.0;
    for (int i = 0; i < p; ++i) {
        t += s(i, i) * theta(i, i);
        for (int j = 0; j < i; ++j) t += 2.0 * s(i, j) * theta(i, j);
    }
    return t;
}

inline double objective_with_logdet(const SymmetricMatrix& theta, double logdet,
                                     const SymmetricMatrix& s, const PenaltySpec& pen) {
    return -logdet + trace_product(s, theta) + penalty_value(theta, pen);
}

inline double objective(const SymmetricMatrix& theta, const SymmetricMatrix& s,
                        const PenaltySpec& pen) {
    const auto ch = cholesky_check(theta);
    if (!ch.is_pd) throw std::domain_error("objective: theta is not positive definite");
    return objective_with_logdet(theta, ch.logdet, s, pen);
}

// Maximal violation of the stationarity system -w + s + d(penalty) = 0,
// with the subgradient box condition at zero entries.
inline double kkt_residual(const SymmetricMatrix& theta, const SymmetricMatrix& w,
                           const SymmetricMatrix& s, const PenaltySpec& pen) {
    const int p = theta.dim();
    double res = 0.0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double t = theta(i, j);
            const double smooth = -w(i, j) + s(i, j) + 2.0 * pen.quad_coefficient(i, j) * t;
            const double gamma = pen.l1_coefficient(i, j);
            const double r = (t != 0.0) ? std::abs(smooth + gamma * (t > 0.0 ? 1.0 : -1.0))
                                        : std::max(std::abs(smooth) - gamma, 0.0);
            res = std::max(res, r);
        }
    }
    return res;
}

// Duality gap at the feasible dual point v = clip(w - s) onto the penalty's
// subdifferential box. Defined for the l1 and weighted-l1 penalties; returns
// +infinity when no feasible dual point is constructed (elastic net, or
// s + v not positive definite).
inline double dual_gap(const SymmetricMatrix& theta, const SymmetricMatrix& w,
                       const SymmetricMatrix& s, const PenaltySpec& pen) {
    const double inf = std::numeric_limits<double>::infinity();
    if (pen.kind == PenaltyKind::ElasticNet) return inf;
    const int p = theta.dim();
    SymmetricMatrix b(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j) {
            double v = w(i, j) - s(i, j);
            if (!(i == j && !pen.penalize_diagonal)) {
                const double box = pen.l1_coefficient(i, j);
                v = std::clamp(v, -box, box);
            }
            b.set(i, j, s(i, j) + v);
        }
    const auto chb = cholesky_check(b);
    if (!chb.is_pd) return inf;
    const auto cht = cholesky_check(theta);
    if (!cht.is_pd) return inf;
    const double primal = objective_with_logdet(theta, cht.logdet, s, pen);
    const double dual = chb.logdet + double(p);
    return primal - dual;
}

// Connected components of the graph with an edge (i,j), i != j, whenever
// |s_ij| > lambda. Components are returned as sorted index lists ordered by
// their smallest member.
inline std::vector<std::vector<int>> screen(const SymmetricMatrix& s, double lambda) {
    const int p = s.dim();
    std::vector<int> parent(p);
    for (int i = 0; i < p; ++i) parent[i] = i;
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(s(i, j)) > lambda) {
                const int a = find(i), b = find(j);
                if (a != b) parent[a] = b;
            }
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(p, -1);
    for (int i = 0; i < p; ++i) {
        const int r = find(i);
        if (comp_of[r] < 0) {
            comp_of[r] = int(comps.size());
            comps.emplace_back();
        }
        comps[comp_of[r]].push_back(i);
    }
    return comps;  // members ascend by construction; components by first member
}

// ---------------------------------------------------------------------------
// Column update kernels
// ---------------------------------------------------------------------------

namespace detail {

struct ColumnWorkspace {
    SymmetricMatrix m;           // (p-1) buffer, leading (active-1) block in use
    std::vector<double> x, s1p, r;
    explicit ColumnWorkspace(int p)
        : m(std::max(p - 1, 1)), x(size_t(std::max(p - 1, 0))),
          s1p(size_t(std::max(p - 1, 0))), r(size_t(std::max(p - 1, 0))) {}
};

struct ColumnUpdateStats {
    double objective_before = 0.0;
    double objective_after = 0.0;
    double schur = 0.0;
    double lipschitz = 0.0;      // proximal style only
    double step_norm_sq = 0.0;   // proximal style only
    int moves = 0;
    int inner_sweeps_run = 0;
};

struct DiagonalSolve {
    double schur = 0.0;       // c > 0
    double theta = 0.0;       // k + c
    double lambda_eff = 0.0;  // 1/c - s_ii
};

// Exact minimizer of -log(theta - k) + s_ii theta + phi_ii(theta) over
// theta > k, for k >= 0. For l1-type penalties c = 1/(s_ii + gamma); the
// elastic net ridge term makes c the positive root of
// 2 omega c^2 + (s_ii + gamma + 2 omega k) c - 1 = 0.
inline DiagonalSolve solve_diagonal(double s_ii, double k, const PenaltySpec& pen, int i) {
    const double gamma = pen.l1_coefficient(i, i);
    const double omega = pen.quad_coefficient(i, i);
    DiagonalSolve out;
    if (omega == 0.0) {
        const double denom = s_ii + gamma;
        if (!(denom > 0.0))
            throw corrupted_state("column update: s_ii plus diagonal penalty is not positive");
        out.schur = 1.0 / denom;
    } else {
        const double beta = s_ii + gamma + 2.0 * omega * k;
        out.schur = (-beta + std::sqrt(beta * beta + 8.0 * omega)) / (4.0 * omega);
    }
    out.theta = k + out.schur;
    out.lambda_eff = 1.0 / out.schur - s_ii;
    return out;
}

// Fills ws.m with the inverse of theta's complement block relative to
// column i, restricted to the leading active x active window, via the
// rank-one identity on the tracked inverse w.
inline void submatrix_inverse_into(const SymmetricMatrix& w, int i, int active,
                                   ColumnWorkspace& ws) {
    const double wpp = w(i, i);
    if (!(wpp > 0.0))
        throw corrupted_state("column update: tracked inverse has nonpositive diagonal");
    const double* wi = w.row(i);
    for (int r = 0, j = 0; r < active; ++r) {
        if (r == i) continue;
        const double* wr = w.row(r);
        const double wri = wi[r] / wpp;
        for (int c = 0, k = 0; c <= r; ++c) {
            if (c == i) continue;
            ws.m.set(j, k, wr[c] - wri * wi[c]);
            ++k;
        }
        ++j;
    }
}

// r := m x over the leading d-dimensional block, skipping zero coordinates.
inline uint64_t residual_from_scratch(const SymmetricMatrix& m, const std::vector<double>& x,
                                      int d, std::vector<double>& r) {
    std::fill(r.begin(), r.begin() + d, 0.0);
    uint64_t flops = 0;
    for (int j = 0; j < d; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        const double* mj = m.row(j);
        for (int k = 0; k < d; ++k) r[k] += mj[k] * xj;
        flops += uint64_t(d);
    }
    return flops;
}

// One column update of the inner block coordinate-descent scheme:
//   (a) complement-block inverse via rank-one update of w,
//   (b) coordinate sweeps of exact one-dimensional minimizers over the
//       off-diagonal entries (soft-thresholded residuals),
//   (c) diagonal update from the updated off-diagonals,
//   (d) rank-one rebuild of w,
//   (e) incremental log-det / objective update.
// All steps O(active^2). stats_out is optional.
inline void update_column(SolverState& st, const SymmetricMatrix& s, const PenaltySpec& pen,
                          int i, const SolverConfig& cfg, ColumnWorkspace& ws,
                          ColumnUpdateStats* stats_out) {
    const int active = st.active_dim;
    const int d = active - 1;
    const double s_ii = s(i, i);
    ColumnUpdateStats stats;
    stats.objective_before = st.objective;

    if (d == 0) {
        const double wpp_old = st.w(i, i);
        const auto ds = solve_diagonal(s_ii, 0.0, pen, i);
        const double theta_old = st.theta(i, i);
        st.logdet.add(logdet_column_delta(wpp_old, s_ii, ds.lambda_eff));
        st.trace_s += s_ii * (ds.theta - theta_old);
        st.penalty += pen.entry_value(ds.theta, i, i) - pen.entry_value(theta_old, i, i);
        st.theta.set(i, i, ds.theta);
        st.w.set(i, i, 1.0 / ds.schur);
        st.refresh_objective();
        st.counters.column_updates++;
        stats.schur = ds.schur;
        stats.objective_after = st.objective;
        if (stats_out) *stats_out = stats;
        return;
    }

    submatrix_inverse_into(st.w, i, active, ws);
    st.counters.flops += uint64_t(d) * d;

    auto full_row = [i](int j) { return j < i ? j : j + 1; };
    for (int j = 0; j < d; ++j) {
        const int rj = full_row(j);
        ws.x[j] = st.theta(rj, i);
        ws.s1p[j] = s(rj, i);
    }

    // Diagonal penalty coefficient for this pass; the elastic net ridge makes
    // it depend on the current diagonal value.
    const double lambda_d = pen.l1_coefficient(i, i) +
                            2.0 * pen.quad_coefficient(i, i) * st.theta(i, i);
    const double q_ii = s_ii + lambda_d;
    if (!(q_ii > 0.0))
        throw corrupted_state("column update: s_ii plus diagonal penalty is not positive");

    st.counters.flops += residual_from_scratch(ws.m, ws.x, d, ws.r);

    double d_trace_s = 0.0, d_penalty = 0.0;

    if (cfg.inner_style == InnerStyle::Coordinate) {
        // Surrogate column objective q_ii x'mx + 2 s1p'x + 2 phi(x); tracked
        // through per-move deltas for the pex inner stopping rule.
        double f_cur = 0.0;
        const bool pex = cfg.variant == Variant::Pex;
        if (pex) {
            double quad = 0.0, lin = 0.0, ph = 0.0;
            for (int j = 0; j < d; ++j) {
                quad += ws.x[j] * ws.r[j];
                lin += ws.s1p[j] * ws.x[j];
                ph += pen.entry_value(ws.x[j], i, full_row(j));
            }
            f_cur = q_ii * quad + 2.0 * lin + 2.0 * ph;
        }
        const int sweep_budget = pex ? cfg.max_inner_sweeps : cfg.inner_sweeps;
        const double inner_tol = cfg.effective_inner_tol();

        for (int t = 0; t < sweep_budget; ++t) {
            int moves = 0;
            const double f_before = f_cur;
            for (int j = 0; j < d; ++j) {
                const int rj = full_row(j);
                const double mjj = ws.m(j, j);
                const double b = q_ii * mjj;
                const double xo = ws.x[j];
                const double a = ws.s1p[j] + q_ii * (ws.r[j] - mjj * xo);
                const double xn = coordinate_prox(-a, b, pen, i, rj);
                if (xn == xo) continue;
                const double delta = xn - xo;
                const double* mj = ws.m.row(j);
                for (int k = 0; k < d; ++k) ws.r[k] += mj[k] * delta;
                st.counters.flops += uint64_t(d);
                d_trace_s += 2.0 * ws.s1p[j] * delta;
                d_penalty += 2.0 * (pen.entry_value(xn, i, rj) - pen.entry_value(xo, i, rj));
                if (pex)
                    f_cur += b * (xn * xn - xo * xo) + 2.0 * a * delta +
                             2.0 * (pen.entry_value(xn, i, rj) - pen.entry_value(xo, i, rj));
                ws.x[j] = xn;
                ++moves;
            }
            stats.moves += moves;
            stats.inner_sweeps_run++;
            st.counters.inner_sweeps++;
            st.counters.coordinate_moves += uint64_t(moves);
            if (moves == 0) break;
            if (pex && std::abs(f_before - f_cur) <=
                           inner_tol * std::max(std::abs(f_before), 1e-300))
                break;
        }
    } else {
        // One generalized gradient step: soft-threshold the gradient step at
        // 2 lambda / L with L = 2(s_ii + lambda) ||m||_2.
        SymmetricMatrix mblock(d);
        for (int j = 0; j < d; ++j)
            for (int k = 0; k <= j; ++k) mblock.set(j, k, ws.m(j, k));
        const double lip = 2.0 * q_ii * spectral_norm_psd(mblock);
        stats.lipschitz = lip;
        const double thr = 2.0 * pen.lambda / lip;
        int moves = 0;
        for (int j = 0; j < d; ++j) {
            const int rj = full_row(j);
            const double grad = 2.0 * q_ii * ws.r[j] + 2.0 * ws.s1p[j];
            const double xo = ws.x[j];
            const double xn = soft_threshold(xo - grad / lip, thr);
            if (xn == xo) continue;
            const double delta = xn - xo;
            stats.step_norm_sq += delta * delta;
            d_trace_s += 2.0 * ws.s1p[j] * delta;
            d_penalty += 2.0 * (pen.entry_value(xn, i, rj) - pen.entry_value(xo, i, rj));
            ws.x[j] = xn;
            ++moves;
        }
        stats.moves = moves;
        stats.inner_sweeps_run = 1;
        st.counters.inner_sweeps++;
        st.counters.coordinate_moves += uint64_t(moves);
    }

    // Fresh residual for the diagonal update and the w rebuild; bounds the
    // drift contributed by the incremental refreshes.
    st.counters.flops += residual_from_scratch(ws.m, ws.x, d, ws.r);
    double k_quad = 0.0;
    for (int j = 0; j < d; ++j) k_quad += ws.x[j] * ws.r[j];
    st.counters.flops += uint64_t(d);

    const double wpp_old = st.w(i, i);
    const auto ds = solve_diagonal(s_ii, k_quad, pen, i);
    if (!(ds.schur > 1e-14))
        throw corrupted_state("column update: nonpositive Schur complement");
    const double theta_old = st.theta(i, i);
    st.logdet.add(logdet_column_delta(wpp_old, s_ii, ds.lambda_eff));
    d_trace_s += s_ii * (ds.theta - theta_old);
    d_penalty += pen.entry_value(ds.theta, i, i) - pen.entry_value(theta_old, i, i);

    // Write the column back and rebuild w over the active block.
    for (int j = 0; j < d; ++j) st.theta.set(full_row(j), i, ws.x[j]);
    st.theta.set(i, i, ds.theta);
    const double c = ds.schur;
    for (int r = 0, j = 0; r < active; ++r) {
        if (r == i) continue;
        for (int c2 = 0, k = 0; c2 <= r; ++c2) {
            if (c2 == i) continue;
            st.w.set(r, c2, ws.m(j, k) + ws.r[j] * ws.r[k] / c);
            ++k;
        }
        st.w.set(r, i, -ws.r[j] / c);
        ++j;
    }
    st.w.set(i, i, 1.0 / c);
    st.counters.flops += uint64_t(d) * d;

    st.trace_s += d_trace_s;
    st.penalty += d_penalty;
    st.refresh_objective();
    st.counters.column_updates++;

    stats.schur = c;
    stats.objective_after = st.objective;
    if (stats_out) *stats_out = stats;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// State construction
// ---------------------------------------------------------------------------

// Default initialization theta = diag(1/(s_ii + lambda)), w = diag(s_ii + lambda);
// the diagonal of the inverse at the KKT conditions is exactly s_ii + lambda.
inline SolverState init_state(const SymmetricMatrix& s, const PenaltySpec& pen) {
    const int p = s.dim();
    SolverState st;
    st.theta = SymmetricMatrix(p);
    st.w = SymmetricMatrix(p);
    st.active_dim = p;
    double logdet = 0.0, tr = 0.0, pv = 0.0;
    for (int i = 0; i < p; ++i) {
        const auto ds = detail::solve_diagonal(s(i, i), 0.0, pen, i);
        st.theta.set(i, i, ds.theta);
        st.w.set(i, i, 1.0 / ds.schur);
        logdet += std::log(ds.theta);
        tr += s(i, i) * ds.theta;
        pv += pen.entry_value(ds.theta, i, i);
    }
    st.logdet.value = logdet;
    st.trace_s = tr;
    st.penalty = pv;
    st.refresh_objective();
    return st;
}

// State from a known (theta, w) pair, e.g. a warm start; theta must be
// positive definite.
inline SolverState state_from_pair(const SymmetricMatrix& theta, const SymmetricMatrix& w,
                                   const SymmetricMatrix& s, const PenaltySpec& pen) {
    if (theta.dim() != s.dim() || w.dim() != s.dim())
        throw std::invalid_argument("init: dimension mismatch");
    const auto ch = cholesky_check(theta);
    if (!ch.is_pd) throw std::invalid_argument("init: theta is not positive definite");
    SolverState st;
    st.theta = theta;
    st.w = w;
    st.active_dim = s.dim();
    st.logdet.value = ch.logdet;
    st.trace_s = trace_product(s, theta);
    st.penalty = penalty_value(theta, pen);
    st.refresh_objective();
    return st;
}

// State from theta alone; w is computed by direct inversion.
inline SolverState state_from_theta(const SymmetricMatrix& theta, const SymmetricMatrix& s,
                                    const PenaltySpec& pen) {
    auto inv = spd_inverse(theta);
    if (!inv) throw std::invalid_argument("init: theta is not positive definite");
    return state_from_pair(theta, *inv, s, pen);
}

// ---------------------------------------------------------------------------
// Public column updates (spec-level operations; the solve loop reuses the
// same kernels through a persistent workspace)
// ---------------------------------------------------------------------------

inline SolverState column_update(const SolverState& state, const SymmetricMatrix& s,
                                 const PenaltySpec& pen, int i, const SolverConfig& cfg) {
    if (i < 0 || i >= state.active_dim)
        throw std::invalid_argument("column_update: index outside active dimension");
    SolverState st = state;
    detail::ColumnWorkspace ws(st.dim());
    SolverConfig c = cfg;
    c.inner_style = InnerStyle::Coordinate;
    detail::update_column(st, s, pen, i, c, ws, nullptr);
    return st;
}

inline SolverState column_update_proximal(const SolverState& state, const SymmetricMatrix& s,
                                          const PenaltySpec& pen, int i,
                                          const SolverConfig& cfg) {
    if (i < 0 || i >= state.active_dim)
        throw std::invalid_argument("column_update: index outside active dimension");
    if (pen.kind != PenaltyKind::L1)
        throw std::invalid_argument("column_update_proximal: l1 penalty only");
    SolverState st = state;
    detail::ColumnWorkspace ws(st.dim());
    SolverConfig c = cfg;
    c.inner_style = InnerStyle::Proximal;
    detail::update_column(st, s, pen, i, c, ws, nullptr);
    return st;
}

// ---------------------------------------------------------------------------
// Solve drivers
// ---------------------------------------------------------------------------

namespace detail {

inline SymmetricMatrix leading_block(const SymmetricMatrix& a, int m) {
    SymmetricMatrix b(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) b.set(i, j, a(i, j));
    return b;
}

inline void validate_after_column(const SolverState& st, const SymmetricMatrix& s,
                                  const PenaltySpec& pen, int i, const SolverConfig& cfg,
                                  const ColumnUpdateStats& stats, ValidationReport& rep) {
    rep.column_updates++;
    const double before = stats.objective_before;
    if (stats.objective_after > before + 1e-12 * std::abs(before))
        rep.monotonicity_violations++;
    if (cfg.inner_style == InnerStyle::Proximal && stats.lipschitz > 0.0) {
        const double drop = before - stats.objective_after;
        const double required = 0.5 * stats.lipschitz * stats.step_norm_sq - 1e-10;
        rep.worst_lemma2_margin = std::min(rep.worst_lemma2_margin, drop - required);
        if (drop < required) rep.lemma2_violations++;
    }

    // Schur identity: theta_ii - theta_1p' theta_11^{-1} theta_1p must equal
    // the Schur complement the diagonal update produced.
    const int active = st.active_dim;
    const int d = active - 1;
    if (d >= 1) {
        double k = 0.0;
        bool have_k = false;
        if (cfg.validate_exact) {
            SymmetricMatrix t11(d);
            std::vector<double> x(d);
            for (int r = 0, j = 0; r < active; ++r) {
                if (r == i) continue;
                x[j] = st.theta(r, i);
                for (int c = 0, kk = 0; c < active; ++c) {
                    if (c == i) continue;
                    if (c <= r) t11.set(j, kk, st.theta(r, c));
                    ++kk;
                }
                ++j;
            }
            if (auto f = CholeskyFactor::compute(t11)) {
                std::vector<double> y = x;
                f->solve_in_place(y);
                for (int j = 0; j < d; ++j) k += x[j] * y[j];
                have_k = true;
            } else {
                rep.pd_failures++;
            }
        } else {
            // Same identity through the tracked inverse.
            SymmetricMatrix m = leading_block(st.w, active);
            auto minv = submatrix_inverse(m, i);
            for (int r = 0, j = 0; r < active; ++r) {
                if (r == i) continue;
                double rj = 0.0;
                for (int c = 0, kk = 0; c < active; ++c) {
                    if (c == i) continue;
                    rj += minv(j, kk) * st.theta(c, i);
                    ++kk;
                }
                k += st.theta(r, i) * rj;
                ++j;
            }
            have_k = true;
        }
        if (have_k) {
            const double lhs = st.theta(i, i) - k;
            const double rel = std::abs(lhs - stats.schur) / std::abs(stats.schur);
            rep.max_schur_rel_err = std::max(rep.max_schur_rel_err, rel);
            if (rel > 1e-10) rep.schur_violations++;
        }
    }
}

inline void validate_after_sweep(const SolverState& st, const SymmetricMatrix& s,
                                 const PenaltySpec& pen, ValidationReport& rep) {
    const int m = st.active_dim;
    SymmetricMatrix tb = leading_block(st.theta, m);
    const auto ch = cholesky_check(tb);
    if (!ch.is_pd) {
        rep.pd_failures++;
        return;
    }
    const double obj = objective_with_logdet(tb, ch.logdet, leading_block(s, m), pen);
    if (std::abs(obj - st.objective) > 1e-8 * std::max(std::abs(obj), 1.0))
        rep.objective_inconsistencies++;
    // max |theta w - I| over the active block
    double drift = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double v = 0.0;
            for (int k = 0; k < m; ++k) v += st.theta(i, k) * st.w(k, j);
            drift = std::max(drift, std::abs(v - (i == j ? 1.0 : 0.0)));
        }
    rep.max_drift = std::max(rep.max_drift, drift);
}

inline void refresh_inverse(SolverState& st, const SymmetricMatrix& s, const PenaltySpec& pen) {
    const int m = st.active_dim;
    SymmetricMatrix tb = leading_block(st.theta, m);
    auto f = CholeskyFactor::compute(tb);
    if (!f) throw corrupted_state("refresh: theta lost positive definiteness");
    SymmetricMatrix inv = f->inverse();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) st.w.set(i, j, inv(i, j));
    st.logdet.value = f->logdet();
    st.trace_s = trace_product(leading_block(s, m), tb);
    st.penalty = penalty_value(tb, pen);
    st.refresh_objective();
}

}  // namespace detail

// Full solve: cycles the column update over i = 0..p-1 until the relative
// objective change between two successive sweeps drops below cfg.tol or
// max_sweeps is reached. Handles all three variants; pgr runs its growing
// pass first and then falls through to the sweep loop.
inline SolveResult solve(const SymmetricMatrix& s, const PenaltySpec& pen,
                         const SolverConfig& cfg,
                         std::optional<std::pair<SymmetricMatrix, SymmetricMatrix>> init =
                             std::nullopt) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed_ms = [&t0]() {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    cfg.check();
    const int p = s.dim();
    if (p < 1) throw std::invalid_argument("solve: empty matrix");
    if (!s.all_finite()) throw std::invalid_argument("solve: input matrix has non-finite entries");
    pen.validate(p);
    if (cfg.inner_style == InnerStyle::Proximal && pen.kind != PenaltyKind::L1)
        throw std::invalid_argument("solve: proximal inner style supports the l1 penalty only");
    if (cfg.variant == Variant::Pgr && init)
        throw std::invalid_argument("solve: pgr builds its own initialization");

    SolveResult out;
    SolverState& st = out.state;
    detail::ColumnWorkspace ws(p);
    detail::ColumnUpdateStats stats;

    if (cfg.variant == Variant::Pgr) {
        const int p0 = std::min(cfg.pgr_initial_dim, p);
        st.theta = SymmetricMatrix(p);
        st.w = SymmetricMatrix(p);
        st.active_dim = p0;
        double logdet = 0.0, tr = 0.0, pv = 0.0;
        for (int i = 0; i < p0; ++i) {
            const auto ds = detail::solve_diagonal(s(i, i), 0.0, pen, i);
            st.theta.set(i, i, ds.theta);
            st.w.set(i, i, 1.0 / ds.schur);
            logdet += std::log(ds.theta);
            tr += s(i, i) * ds.theta;
            pv += pen.entry_value(ds.theta, i, i);
        }
        st.logdet.value = logdet;
        st.trace_s = tr;
        st.penalty = pv;
        st.refresh_objective();

        // Growing pass: pad with the decoupled diagonal solution, then run
        // the column update on the appended row/column only.
        for (int m = p0 + 1; m <= p; ++m) {
            const int i = m - 1;
            const auto ds = detail::solve_diagonal(s(i, i), 0.0, pen, i);
            st.theta.set(i, i, ds.theta);
            st.w.set(i, i, 1.0 / ds.schur);
            st.logdet.add(std::log(ds.theta));
            st.trace_s += s(i, i) * ds.theta;
            st.penalty += pen.entry_value(ds.theta, i, i);
            st.refresh_objective();
            st.active_dim = m;
            detail::update_column(st, s, pen, i, cfg, ws,
                                  cfg.validate ? &stats : nullptr);
            if (cfg.validate)
                detail::validate_after_column(st, s, pen, i, cfg, stats, out.validation);
        }
        st.growth_counters = st.counters;
    } else if (init) {
        st = state_from_pair(init->first, init->second, s, pen);
    } else {
        st = init_state(s, pen);
    }

    auto record = [&](long sweep) {
        SweepRecord r;
        r.sweep = sweep;
        r.objective = st.objective;
        r.logdet = st.logdet.value;
        r.penalty = st.penalty;
        r.nnz_offdiag = st.theta.nnz_off_diagonal();
        r.elapsed_ms = elapsed_ms();
        if (cfg.trace_kkt) r.kkt_residual = kkt_residual(st.theta, st.w, s, pen);
        out.trace.push_back(r);
    };
    record(0);
    if (cfg.validate) detail::validate_after_sweep(st, s, pen, out.validation);

    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        const double obj_prev = st.objective;
        for (int i = 0; i < p; ++i) {
            detail::update_column(st, s, pen, i, cfg, ws, cfg.validate ? &stats : nullptr);
            if (cfg.validate)
                detail::validate_after_column(st, s, pen, i, cfg, stats, out.validation);
        }
        st.sweep_count = sweep;
        if (cfg.refresh_every > 0 && sweep % cfg.refresh_every == 0)
            detail::refresh_inverse(st, s, pen);
        record(sweep);
        if (cfg.validate) detail::validate_after_sweep(st, s, pen, out.validation);
        if (std::abs(obj_prev - st.objective) <
            cfg.tol * std::max(std::abs(obj_prev), 1e-300)) {
            out.converged = true;
            break;
        }
    }

    out.diagnostics.kkt_residual = kkt_residual(st.theta, st.w, s, pen);
    out.diagnostics.dual_gap = dual_gap(st.theta, st.w, s, pen);
    out.diagnostics.nnz_offdiag = st.theta.nnz_off_diagonal();
    out.diagnostics.min_pivot = cholesky_check(st.theta).min_pivot;
    return out;
}

inline SolveResult solve_pex(const SymmetricMatrix& s, const PenaltySpec& pen, SolverConfig cfg,
                             std::optional<std::pair<SymmetricMatrix, SymmetricMatrix>> init =
                                 std::nullopt) {
    cfg.variant = Variant::Pex;
    return solve(s, pen, cfg, std::move(init));
}

inline SolveResult solve_pgr(const SymmetricMatrix& s, const PenaltySpec& pen, SolverConfig cfg) {
    cfg.variant = Variant::Pgr;
    return solve(s, pen, cfg);
}

// Screening driver: solves each connected component of the thresholded
// graph independently and assembles the block-diagonal solution. The edge
// threshold is the penalty's own box radius so the split is exact for the
// l1 and weighted-l1 penalties.
inline SolveResult solve_screened(const SymmetricMatrix& s, const PenaltySpec& pen,
                                  const SolverConfig& cfg) {
    const int p = s.dim();
    pen.validate(p);
    SymmetricMatrix thresholds(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j) thresholds.set(i, j, pen.l1_coefficient(i, j));

    std::vector<int> parent(p);
    for (int i = 0; i < p; ++i) parent[i] = i;
    auto find = [&](int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < i; ++j)
            if (std::abs(s(i, j)) > thresholds(i, j)) {
                const int a = find(i), b = find(j);
                if (a != b) parent[a] = b;
            }
    std::vector<std::vector<int>> comps;
    {
        std::vector<int> comp_of(p, -1);
        for (int i = 0; i < p; ++i) {
            const int r = find(i);
            if (comp_of[r] < 0) {
                comp_of[r] = int(comps.size());
                comps.emplace_back();
            }
            comps[comp_of[r]].push_back(i);
        }
    }

    SolveResult out;
    out.state.theta = SymmetricMatrix(p);
    out.state.w = SymmetricMatrix(p);
    out.state.active_dim = p;
    out.converged = true;
    double logdet = 0.0;
    for (const auto& comp : comps) {
        const int m = int(comp.size());
        SymmetricMatrix sc(m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b <= a; ++b) sc.set(a, b, s(comp[a], comp[b]));
        PenaltySpec pc = pen;
        if (pen.kind == PenaltyKind::WeightedL1) {
            SymmetricMatrix wc(m);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b <= a; ++b) wc.set(a, b, (*pen.weights)(comp[a], comp[b]));
            pc.weights = std::move(wc);
        }
        SolveResult r = solve(sc, pc, cfg);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b <= a; ++b) {
                out.state.theta.set(comp[a], comp[b], r.state.theta(a, b));
                out.state.w.set(comp[a], comp[b], r.state.w(a, b));
            }
        logdet += r.state.logdet.value;
        out.state.sweep_count = std::max(out.state.sweep_count, r.state.sweep_count);
        out.state.counters.flops += r.state.counters.flops;
        out.state.counters.column_updates += r.state.counters.column_updates;
        out.state.counters.inner_sweeps += r.state.counters.inner_sweeps;
        out.state.counters.coordinate_moves += r.state.counters.coordinate_moves;
        out.converged = out.converged && r.converged;
        out.validation.column_updates += r.validation.column_updates;
        out.validation.monotonicity_violations += r.validation.monotonicity_violations;
        out.validation.schur_violations += r.validation.schur_violations;
        out.validation.pd_failures += r.validation.pd_failures;
        out.validation.lemma2_violations += r.validation.lemma2_violations;
        out.validation.objective_inconsistencies += r.validation.objective_inconsistencies;
        out.validation.max_schur_rel_err =
            std::max(out.validation.max_schur_rel_err, r.validation.max_schur_rel_err);
        out.validation.max_drift = std::max(out.validation.max_drift, r.validation.max_drift);
        out.validation.worst_lemma2_margin =
            std::min(out.validation.worst_lemma2_margin, r.validation.worst_lemma2_margin);
    }
    out.state.logdet.value = logdet;
    out.state.trace_s = trace_product(s, out.state.theta);
    out.state.penalty = penalty_value(out.state.theta, pen);
    out.state.refresh_objective();

    SweepRecord rec;
    rec.sweep = out.state.sweep_count;
    rec.objective = out.state.objective;
    rec.logdet = out.state.logdet.value;
    rec.penalty = out.state.penalty;
    rec.nnz_offdiag = out.state.theta.nnz_off_diagonal();
    rec.kkt_residual = kkt_residual(out.state.theta, out.state.w, s, pen);
    out.trace.push_back(rec);

    out.diagnostics.kkt_residual = rec.kkt_residual;
    out.diagnostics.dual_gap = dual_gap(out.state.theta, out.state.w, s, pen);
    out.diagnostics.nnz_offdiag = rec.nnz_offdiag;
    out.diagnostics.min_pivot = cholesky_check(out.state.theta).min_pivot;
    return out;
}

}  // namespace pgl
