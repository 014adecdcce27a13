#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pgl/solver.hpp"
#include "pgl/symmetric_matrix.hpp"

namespace pgl {

// Strictly decreasing positive regularization grid lambda_K > ... > lambda_1.
struct LambdaGrid {
    std::vector<double> values;
    bool collapsed_duplicates = false;  // duplicates or nonpositive values dropped
};

namespace detail {

inline std::vector<double> sorted_offdiag_abs(const SymmetricMatrix& s) {
    const int p = s.dim();
    if (p < 2) throw std::invalid_argument("grid: p must be >= 2");
    std::vector<double> v;
    v.reserve(size_t(p) * (p - 1) / 2);
    for (int i = 1; i < p; ++i)
        for (int j = 0; j < i; ++j) v.push_back(std::abs(s(i, j)));
    std::sort(v.begin(), v.end());
    if (v.back() == 0.0)
        throw std::invalid_argument("grid: all off-diagonal entries are zero");
    return v;
}

// Nearest-rank percentile of a sorted sample: the smallest value with at
// least q percent of the sample at or below it.
inline double percentile(const std::vector<double>& sorted, double q) {
    const size_t m = sorted.size();
    long rank = long(std::ceil(q / 100.0 * double(m)));
    rank = std::clamp(rank, 1L, long(m));
    return sorted[size_t(rank - 1)];
}

inline LambdaGrid finalize_grid(std::vector<double> values) {
    std::sort(values.begin(), values.end(), std::greater<>());
    LambdaGrid g;
    for (double v : values) {
        if (!(v > 0.0)) {
            g.collapsed_duplicates = true;
            continue;
        }
        if (!g.values.empty() && v == g.values.back()) {
            g.collapsed_duplicates = true;
            continue;
        }
        g.values.push_back(v);
    }
    if (g.values.empty())
        throw std::invalid_argument("grid: no positive lambda values remain");
    return g;
}

}  // namespace detail

// Grid along equi-spaced percentiles of the off-diagonal |s_ij| values,
// between the pmin-th and pmax-th percentile. A single point takes pmax.
inline LambdaGrid percentile_grid(const SymmetricMatrix& s, int n_points, double pmin,
                                  double pmax) {
    if (n_points < 1) throw std::invalid_argument("grid: n_points must be >= 1");
    if (!(pmin <= pmax)) throw std::invalid_argument("grid: pmin must not exceed pmax");
    const auto sorted = detail::sorted_offdiag_abs(s);
    std::vector<double> vals;
    if (n_points == 1) {
        vals.push_back(detail::percentile(sorted, pmax));
    } else {
        for (int k = 0; k < n_points; ++k)
            vals.push_back(detail::percentile(
                sorted, pmin + double(k) * (pmax - pmin) / double(n_points - 1)));
    }
    return detail::finalize_grid(std::move(vals));
}

// Grid of n_points values equally spaced between eta_max * q and
// eta_min * q, where q = max_{i>j} |s_ij|.
inline LambdaGrid eta_grid(const SymmetricMatrix& s, int n_points, double eta_min,
                           double eta_max) {
    if (n_points < 1) throw std::invalid_argument("grid: n_points must be >= 1");
    if (!(eta_min <= eta_max)) throw std::invalid_argument("grid: eta_min must not exceed eta_max");
    const auto sorted = detail::sorted_offdiag_abs(s);
    const double q = sorted.back();
    std::vector<double> vals;
    if (n_points == 1) {
        vals.push_back(eta_max * q);
    } else {
        for (int k = 0; k < n_points; ++k)
            vals.push_back(
                q * (eta_max - double(k) * (eta_max - eta_min) / double(n_points - 1)));
    }
    return detail::finalize_grid(std::move(vals));
}

struct PathRecord {
    double lambda = 0.0;
    SymmetricMatrix theta;
    double objective = 0.0;
    long sweeps = 0;
    double kkt_residual = 0.0;
    double dual_gap = 0.0;
    int nnz_offdiag = 0;
    bool converged = false;
};

struct PathResult {
    std::vector<PathRecord> records;  // grid order, largest lambda first
    long total_sweeps = 0;
    bool warm = false;
};

// Runs the solver over the grid from the largest lambda down (reverse walks
// it upward instead, warm-starting in the other direction). With warm starts
// the (theta, w) pair of the previous lambda seeds the next solve; the
// primal iterates are always positive definite, so warm starts never need a
// feasibility repair. on_record, when given, is invoked as each lambda
// completes, enabling streaming output.
inline PathResult solve_path(
    const SymmetricMatrix& s, const LambdaGrid& grid, const PenaltySpec& pen_template,
    const SolverConfig& cfg, bool warm,
    const std::function<void(const PathRecord&)>& on_record = {}, bool reverse = false,
    std::optional<std::pair<SymmetricMatrix, SymmetricMatrix>> first_init = std::nullopt) {
    if (grid.values.empty()) throw std::invalid_argument("path: empty grid");
    if (warm && cfg.variant == Variant::Pgr)
        throw std::invalid_argument("path: pgr rebuilds from scratch and takes no warm starts");
    PathResult out;
    out.warm = warm;
    std::vector<double> order = grid.values;
    if (reverse) std::reverse(order.begin(), order.end());
    std::optional<std::pair<SymmetricMatrix, SymmetricMatrix>> init =
        warm ? std::move(first_init) : std::nullopt;
    for (double lambda : order) {
        PenaltySpec pen = pen_template;
        pen.lambda = lambda;
        SolveResult r;
        try {
            r = solve(s, pen, cfg, warm ? init : std::nullopt);
        } catch (const std::exception& e) {
            throw std::runtime_error("path: solve failed at lambda=" + std::to_string(lambda) +
                                     ": " + e.what());
        }
        PathRecord rec;
        rec.lambda = lambda;
        rec.theta = r.state.theta;
        rec.objective = r.state.objective;
        rec.sweeps = r.state.sweep_count;
        rec.kkt_residual = r.diagnostics.kkt_residual;
        rec.dual_gap = r.diagnostics.dual_gap;
        rec.nnz_offdiag = r.diagnostics.nnz_offdiag;
        rec.converged = r.converged;
        out.total_sweeps += rec.sweeps;
        if (warm) init = std::make_pair(r.state.theta, r.state.w);
        if (on_record) on_record(rec);
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace pgl
