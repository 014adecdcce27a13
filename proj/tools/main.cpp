// Command-line driver for the primal graphical lasso toolkit.
//
// Exit codes: 0 success (solver converged), 1 usage or input error,
// 2 sweep limit reached before convergence (outputs still written).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgl/pgl.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitSweepLimit = 2;

struct PenaltyFlags {
    std::string kind = "l1";
    double alpha = 0.5;
    std::string weights_file;
    bool no_diagonal_penalty = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--penalty", kind, "Penalty: l1, wl1 or enet")
            ->check(CLI::IsMember({"l1", "wl1", "enet"}))
            ->capture_default_str();
        cmd->add_option("--alpha", alpha, "Elastic net mixing weight in [0,1]")
            ->capture_default_str();
        cmd->add_option("--weights", weights_file, "Symmetric weight matrix file (wl1)");
        cmd->add_flag("--no-diagonal-penalty", no_diagonal_penalty,
                      "Leave diagonal entries unpenalized");
    }

    pgl::PenaltySpec build(double lambda, int dim) const {
        pgl::PenaltySpec pen;
        if (kind == "l1") {
            pen = pgl::PenaltySpec::l1(lambda);
        } else if (kind == "enet") {
            pen = pgl::PenaltySpec::elastic_net(lambda, alpha);
        } else {
            if (weights_file.empty())
                throw std::invalid_argument("--penalty wl1 requires --weights");
            pen = pgl::PenaltySpec::weighted_l1(lambda, pgl::read_matrix(weights_file));
        }
        pen.penalize_diagonal = !no_diagonal_penalty;
        pen.validate(dim);
        return pen;
    }
};

struct SolverFlags {
    std::string variant = "pine";
    std::string inner = "coordinate";
    int inner_sweeps = 1;
    double inner_tol = -1.0;
    double tol = 1e-5;
    int max_sweeps = 200;
    int refresh_every = 0;
    int p0 = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--variant", variant, "Algorithm variant: pine, pex or pgr")
            ->check(CLI::IsMember({"pine", "pex", "pgr"}))
            ->capture_default_str();
        cmd->add_option("--inner", inner, "Inner minimizer: coordinate or proximal")
            ->check(CLI::IsMember({"coordinate", "proximal"}))
            ->capture_default_str();
        cmd->add_option("--inner-sweeps", inner_sweeps,
                        "Inner coordinate sweeps per column (pine/pgr)")
            ->capture_default_str();
        cmd->add_option("--inner-tol", inner_tol,
                        "Inner relative tolerance (pex); default tol/100");
        cmd->add_option("--tol", tol, "Relative objective change between sweeps")
            ->capture_default_str();
        cmd->add_option("--max-sweeps", max_sweeps, "Sweep limit")->capture_default_str();
        cmd->add_option("--refresh-every", refresh_every,
                        "Rebuild the tracked inverse every k sweeps (0 = never)")
            ->capture_default_str();
        cmd->add_option("--p0", p0, "Initial dimension of the pgr growing pass")
            ->capture_default_str();
    }

    pgl::SolverConfig build() const {
        pgl::SolverConfig cfg;
        cfg.variant = variant == "pex"   ? pgl::Variant::Pex
                      : variant == "pgr" ? pgl::Variant::Pgr
                                         : pgl::Variant::Pine;
        cfg.inner_style =
            inner == "proximal" ? pgl::InnerStyle::Proximal : pgl::InnerStyle::Coordinate;
        cfg.inner_sweeps = inner_sweeps;
        cfg.inner_tol = inner_tol;
        cfg.tol = tol;
        cfg.max_sweeps = max_sweeps;
        cfg.refresh_every = refresh_every;
        cfg.pgr_initial_dim = p0;
        cfg.check();
        return cfg;
    }
};

json sweep_record_json(const pgl::SweepRecord& r) {
    json j{{"sweep", r.sweep},
           {"objective", r.objective},
           {"logdet", r.logdet},
           {"penalty", r.penalty},
           {"nnz_offdiag", r.nnz_offdiag},
           {"elapsed_ms", r.elapsed_ms}};
    if (std::isfinite(r.kkt_residual)) j["kkt_residual"] = r.kkt_residual;
    return j;
}

void write_trace(const std::string& path, const std::vector<pgl::SweepRecord>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& r : trace) out << sweep_record_json(r).dump() << '\n';
}

double json_finite(double v) { return std::isfinite(v) ? v : -1.0; }

json result_summary(const pgl::SolveResult& r) {
    json j{{"objective", r.state.objective},
           {"logdet", r.state.logdet.value},
           {"penalty", r.state.penalty},
           {"sweeps", r.state.sweep_count},
           {"nnz_offdiag", r.diagnostics.nnz_offdiag},
           {"kkt_residual", r.diagnostics.kkt_residual},
           {"converged", r.converged}};
    if (std::isfinite(r.diagnostics.dual_gap)) j["dual_gap"] = r.diagnostics.dual_gap;
    return j;
}

// ---------------------------------------------------------------------------

struct SolveArgs {
    std::string input, init_file, out_theta, out_cov, trace_file;
    double lambda = 0.0;
    bool screen = false;
    PenaltyFlags penalty;
    SolverFlags solver;
};

int run_solve(const SolveArgs& a) {
    auto s = pgl::read_matrix(a.input);
    auto pen = a.penalty.build(a.lambda, s.dim());
    auto cfg = a.solver.build();

    std::optional<std::pair<pgl::SymmetricMatrix, pgl::SymmetricMatrix>> init;
    if (!a.init_file.empty()) {
        auto theta0 = pgl::read_matrix(a.init_file);
        auto w0 = pgl::spd_inverse(theta0);
        if (!w0) throw std::invalid_argument("--init matrix is not positive definite");
        init = std::make_pair(std::move(theta0), std::move(*w0));
    }

    pgl::SolveResult r =
        a.screen ? pgl::solve_screened(s, pen, cfg) : pgl::solve(s, pen, cfg, std::move(init));

    if (!a.out_theta.empty()) pgl::write_matrix(a.out_theta, r.state.theta);
    if (!a.out_cov.empty()) pgl::write_matrix(a.out_cov, r.state.w);
    if (!a.trace_file.empty()) write_trace(a.trace_file, r.trace);
    std::cout << result_summary(r).dump() << '\n';
    return r.converged ? kExitOk : kExitSweepLimit;
}

// ---------------------------------------------------------------------------

struct PathArgs {
    std::string input, out_dir, manifest_file;
    std::string grid_mode = "percentile";
    int grid_points = 10;
    double pmin = 10.0, pmax = 100.0;
    double eta_min = 0.01, eta_max = 1.0;
    bool warm = true;
    bool resume = false;
    bool reverse = false;
    int jobs = 1;
    PenaltyFlags penalty;
    SolverFlags solver;
};

json path_record_json(const pgl::PathRecord& rec, const std::string& theta_file) {
    return json{{"lambda", rec.lambda},
                {"objective", rec.objective},
                {"nnz_offdiag", rec.nnz_offdiag},
                {"sweeps", rec.sweeps},
                {"kkt_residual", rec.kkt_residual},
                {"dual_gap", json_finite(rec.dual_gap)},
                {"converged", rec.converged},
                {"theta_file", theta_file}};
}

int run_path(const PathArgs& a) {
    auto s = pgl::read_matrix(a.input);
    auto pen_template = a.penalty.build(1.0, s.dim());
    auto cfg = a.solver.build();

    pgl::LambdaGrid grid = a.grid_mode == "eta"
                               ? pgl::eta_grid(s, a.grid_points, a.eta_min, a.eta_max)
                               : pgl::percentile_grid(s, a.grid_points, a.pmin, a.pmax);
    if (a.reverse) std::reverse(grid.values.begin(), grid.values.end());
    if (grid.collapsed_duplicates)
        std::cerr << "warning: duplicate or nonpositive grid values collapsed; "
                  << grid.values.size() << " lambda values remain\n";

    std::filesystem::create_directories(a.out_dir);
    const std::string manifest_path =
        a.manifest_file.empty() ? (std::filesystem::path(a.out_dir) / "manifest.jsonl").string()
                                : a.manifest_file;
    auto theta_path = [&](size_t idx) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "theta_%04zu.mtx", idx);
        return (std::filesystem::path(a.out_dir) / buf).string();
    };

    // Resume: keep the already-completed prefix of the grid.
    size_t start_idx = 0;
    std::optional<std::pair<pgl::SymmetricMatrix, pgl::SymmetricMatrix>> init;
    if (a.resume && std::filesystem::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        std::vector<json> done;
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) done.push_back(json::parse(line));
        while (start_idx < grid.values.size() && start_idx < done.size()) {
            const double lam = done[start_idx].at("lambda").get<double>();
            if (std::abs(lam - grid.values[start_idx]) >
                1e-12 * std::max(1.0, std::abs(lam)))
                break;
            ++start_idx;
        }
        if (start_idx > 0 && a.warm && start_idx < grid.values.size()) {
            auto theta = pgl::read_matrix(
                done[start_idx - 1].at("theta_file").get<std::string>());
            auto w = pgl::spd_inverse(theta);
            if (!w) throw std::runtime_error("resume: stored theta is not positive definite");
            init = std::make_pair(std::move(theta), std::move(*w));
        }
        std::cerr << "resume: " << start_idx << " lambda values already complete\n";
    }

    std::ofstream manifest(manifest_path,
                           a.resume && start_idx > 0 ? std::ios::app : std::ios::trunc);
    if (!manifest) throw std::runtime_error("cannot open for writing: " + manifest_path);

    long total_sweeps = 0;
    bool all_converged = true;

    if (!a.warm && a.jobs > 1) {
        // Cold solves share nothing; fan the remaining lambdas out.
        const size_t n = grid.values.size();
        std::vector<std::optional<pgl::SolveResult>> results(n);
        std::atomic<size_t> next(start_idx);
        std::mutex err_mu;
        std::string first_error;
        auto worker = [&]() {
            for (;;) {
                const size_t k = next.fetch_add(1);
                if (k >= n) return;
                pgl::PenaltySpec pen = pen_template;
                pen.lambda = grid.values[k];
                try {
                    results[k] = pgl::solve(s, pen, cfg);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (first_error.empty())
                        first_error = "lambda=" + std::to_string(pen.lambda) + ": " + e.what();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < a.jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (!first_error.empty()) throw std::runtime_error("path: solve failed at " + first_error);
        for (size_t k = start_idx; k < n; ++k) {
            const auto& r = *results[k];
            pgl::PathRecord rec;
            rec.lambda = grid.values[k];
            rec.theta = r.state.theta;
            rec.objective = r.state.objective;
            rec.sweeps = r.state.sweep_count;
            rec.kkt_residual = r.diagnostics.kkt_residual;
            rec.dual_gap = r.diagnostics.dual_gap;
            rec.nnz_offdiag = r.diagnostics.nnz_offdiag;
            rec.converged = r.converged;
            pgl::write_matrix_mm(theta_path(k), rec.theta);
            manifest << path_record_json(rec, theta_path(k)).dump() << '\n';
            manifest.flush();
            total_sweeps += rec.sweeps;
            all_converged = all_converged && rec.converged;
        }
    } else {
        pgl::LambdaGrid remaining;
        remaining.values.assign(grid.values.begin() + long(start_idx), grid.values.end());
        size_t k = start_idx;
        if (!remaining.values.empty()) {
            pgl::solve_path(
                s, remaining, pen_template, cfg, a.warm,
                [&](const pgl::PathRecord& rec) {
                    pgl::write_matrix_mm(theta_path(k), rec.theta);
                    manifest << path_record_json(rec, theta_path(k)).dump() << '\n';
                    manifest.flush();
                    total_sweeps += rec.sweeps;
                    all_converged = all_converged && rec.converged;
                    ++k;
                },
                false, std::move(init));
        }
    }

    std::cout << json{{"lambdas", grid.values.size()},
                      {"total_sweeps", total_sweeps},
                      {"warm", a.warm},
                      {"manifest", manifest_path},
                      {"converged", all_converged}}
                     .dump()
              << '\n';
    return all_converged ? kExitOk : kExitSweepLimit;
}

// ---------------------------------------------------------------------------

struct GenArgs {
    int p = 200;
    int n = 400;
    double density = 0.01;
    uint64_t seed = 1;
    std::string out_s, out_precision;
    bool verify = false;
};

int run_gen(const GenArgs& a) {
    pgl::SyntheticSpec spec;
    spec.p = a.p;
    spec.n = a.n;
    spec.density = a.density;
    spec.seed = a.seed;
    auto inst = pgl::generate_instance(spec);
    if (!a.out_s.empty()) pgl::write_matrix(a.out_s, inst.sample_correlation);
    if (!a.out_precision.empty()) pgl::write_matrix(a.out_precision, inst.sigma_inv_true);
    json j{{"p", a.p},
           {"n", a.n},
           {"seed", a.seed},
           {"density_target", a.density},
           {"density_realized", inst.realized_offdiag_density},
           {"tau", inst.tau}};
    if (a.verify) {
        const auto eig = pgl::jacobi_eigenvalues(inst.sigma_inv_true);
        j["lambda_min"] = eig.front();
        j["lambda_min_ok"] = std::abs(eig.front() - 1.0) <= 1e-8;
    }
    std::cout << j.dump() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimArgs {
    std::string ratings, out;
};

int run_sim(const SimArgs& a) {
    auto r = pgl::read_ratings_csv(a.ratings);
    auto s = pgl::similarity_matrix(r);
    if (!a.out.empty()) pgl::write_matrix(a.out, s);
    std::cout << json{{"users", r.users}, {"items", r.items}, {"dim", s.dim()}}.dump() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct CheckArgs {
    std::string input, theta_file, cov_file;
    double lambda = 0.0;
    bool oracle = false;
    PenaltyFlags penalty;
};

int run_check(const CheckArgs& a) {
    auto s = pgl::read_matrix(a.input);
    auto theta = pgl::read_matrix(a.theta_file);
    if (theta.dim() != s.dim())
        throw std::invalid_argument("check: theta and s dimensions differ");
    auto pen = a.penalty.build(a.lambda, s.dim());

    json j;
    const auto ch = pgl::cholesky_check(theta);
    j["pd"] = ch.is_pd;
    j["min_pivot"] = ch.min_pivot;
    j["nnz_offdiag"] = theta.nnz_off_diagonal();
    if (ch.is_pd) {
        pgl::SymmetricMatrix w(0);
        if (!a.cov_file.empty()) {
            w = pgl::read_matrix(a.cov_file);
            if (w.dim() != s.dim()) throw std::invalid_argument("check: cov dimension differs");
        } else {
            w = *pgl::spd_inverse(theta);
        }
        const double obj = pgl::objective_with_logdet(theta, ch.logdet, s, pen);
        j["objective"] = obj;
        j["kkt_residual"] = pgl::kkt_residual(theta, w, s, pen);
        j["dual_gap"] = json_finite(pgl::dual_gap(theta, w, s, pen));
        if (a.oracle) {
            if (pen.kind != pgl::PenaltyKind::L1 || !pen.penalize_diagonal)
                throw std::invalid_argument("check: --oracle supports the plain l1 penalty");
            auto orc = pgl::dual_projected_gradient(s, a.lambda, 1e-9);
            const double best = pgl::objective(orc.theta_star, s, pen);
            j["oracle_objective"] = best;
            j["oracle_rel_gap"] = (obj - best) / std::max(std::abs(best), 1e-300);
        }
    }
    std::cout << j.dump() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
    std::vector<int> sizes{100, 200};
    double n_factor = 2.0;
    double density = 0.01;
    int grid_points = 3;
    std::vector<std::string> variants{"pine", "pex", "pgr"};
    double tol = 1e-5;
    int max_sweeps = 200;
    uint64_t seed = 1;
    std::string out;
};

int run_bench(const BenchArgs& a) {
    std::ofstream jout;
    if (!a.out.empty()) {
        jout.open(a.out);
        if (!jout) throw std::runtime_error("cannot open for writing: " + a.out);
    }
    std::printf("%6s %6s %8s %12s %8s %7s %12s %14s %12s\n", "p", "n", "variant", "lambda",
                "pct_nnz", "sweeps", "time_ms", "col_update_us", "mono");
    for (int p : a.sizes) {
        pgl::SyntheticSpec spec;
        spec.p = p;
        spec.n = std::max(2, int(std::lround(a.n_factor * p)));
        spec.density = a.density;
        spec.seed = a.seed;
        auto inst = pgl::generate_instance(spec);
        const auto& s = inst.sample_correlation;
        auto grid = pgl::percentile_grid(s, a.grid_points, 30.0, 95.0);
        for (const auto& variant : a.variants) {
            for (double lambda : grid.values) {
                SolverFlags sf;
                sf.variant = variant;
                sf.tol = a.tol;
                sf.max_sweeps = a.max_sweeps;
                auto cfg = sf.build();
                auto pen = pgl::PenaltySpec::l1(lambda);
                const auto t0 = std::chrono::steady_clock::now();
                auto r = pgl::solve(s, pen, cfg);
                const double ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0)
                        .count();
                bool monotone = true;
                for (size_t k = 1; k < r.trace.size(); ++k)
                    monotone = monotone &&
                               r.trace[k].objective <= r.trace[k - 1].objective +
                                                           1e-10 * std::abs(r.trace[k - 1].objective);
                const double col_us =
                    r.state.counters.column_updates
                        ? 1e3 * ms / double(r.state.counters.column_updates)
                        : 0.0;
                const double pct_nnz =
                    100.0 * double(r.diagnostics.nnz_offdiag) / (double(p) * (p - 1));
                std::printf("%6d %6d %8s %12.5g %8.1f %7ld %12.2f %14.2f %12s\n", p, spec.n,
                            variant.c_str(), lambda, pct_nnz, r.state.sweep_count, ms, col_us,
                            monotone ? "yes" : "NO");
                if (jout.is_open()) {
                    jout << json{{"p", p},
                                 {"n", spec.n},
                                 {"variant", variant},
                                 {"lambda", lambda},
                                 {"pct_nnz", pct_nnz},
                                 {"sweeps", r.state.sweep_count},
                                 {"time_ms", ms},
                                 {"col_update_us", col_us},
                                 {"flops", r.state.counters.flops},
                                 {"flops_per_col",
                                  double(r.state.counters.flops) /
                                      double(std::max<uint64_t>(1, r.state.counters.column_updates))},
                                 {"trace_monotone", monotone},
                                 {"converged", r.converged}}
                                .dump()
                         << '\n';
                }
            }
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Primal block-coordinate solvers for l1-penalized inverse covariance estimation"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
    solve_cmd->add_option("--input", solve_args.input, "Input matrix s (csv or mtx)")->required();
    solve_cmd->add_option("--lambda", solve_args.lambda, "Regularization strength")->required();
    solve_cmd->add_option("--init", solve_args.init_file, "Warm-start theta file");
    solve_cmd->add_option("--out", solve_args.out_theta, "Sparse theta output (mtx)");
    solve_cmd->add_option("--out-cov", solve_args.out_cov, "Covariance (inverse) output");
    solve_cmd->add_option("--trace", solve_args.trace_file, "Per-sweep trace (jsonl)");
    solve_cmd->add_flag("--screen", solve_args.screen,
                        "Split into thresholded connected components first");
    solve_args.penalty.attach(solve_cmd);
    solve_args.solver.attach(solve_cmd);

    PathArgs path_args;
    auto* path_cmd = app.add_subcommand("path", "Solve along a lambda grid");
    path_cmd->add_option("--input", path_args.input, "Input matrix s")->required();
    path_cmd->add_option("--out-dir", path_args.out_dir, "Directory for theta exports")
        ->required();
    path_cmd->add_option("--manifest", path_args.manifest_file,
                         "Manifest file (default <out-dir>/manifest.jsonl)");
    path_cmd->add_option("--grid-mode", path_args.grid_mode, "percentile or eta")
        ->check(CLI::IsMember({"percentile", "eta"}))
        ->capture_default_str();
    path_cmd->add_option("--grid-points", path_args.grid_points, "Grid size")
        ->capture_default_str();
    path_cmd->add_option("--pmin", path_args.pmin, "Lower percentile")->capture_default_str();
    path_cmd->add_option("--pmax", path_args.pmax, "Upper percentile")->capture_default_str();
    path_cmd->add_option("--eta-min", path_args.eta_min, "Lower fraction of max |s_ij|")
        ->capture_default_str();
    path_cmd->add_option("--eta-max", path_args.eta_max, "Upper fraction of max |s_ij|")
        ->capture_default_str();
    path_cmd->add_flag("--warm,!--cold", path_args.warm,
                       "Warm-start each lambda from the previous solution (default)");
    path_cmd->add_flag("--resume", path_args.resume, "Skip lambdas already in the manifest");
    path_cmd->add_flag("--reverse", path_args.reverse,
                       "Walk the grid from the smallest lambda upward");
    path_cmd->add_option("--jobs", path_args.jobs, "Concurrent solves (cold paths only)")
        ->capture_default_str();
    path_args.penalty.attach(path_cmd);
    path_args.solver.attach(path_cmd);

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic instance");
    gen_cmd->add_option("--p", gen_args.p, "Dimension")->capture_default_str();
    gen_cmd->add_option("--n", gen_args.n, "Sample count")->capture_default_str();
    gen_cmd->add_option("--density", gen_args.density, "Target nonzero proportion")
        ->capture_default_str();
    gen_cmd->add_option("--seed", gen_args.seed, "Generator seed")->capture_default_str();
    gen_cmd->add_option("--out-s", gen_args.out_s, "Sample correlation output (csv)");
    gen_cmd->add_option("--out-precision", gen_args.out_precision,
                        "True precision matrix output (mtx)");
    gen_cmd->add_flag("--verify", gen_args.verify,
                      "Recompute the minimal eigenvalue and report the check");

    SimArgs sim_args;
    auto* sim_cmd = app.add_subcommand("sim", "Build an item-item similarity matrix");
    sim_cmd->add_option("--ratings", sim_args.ratings, "CSV of user_id,item_id pairs")
        ->required();
    sim_cmd->add_option("--out", sim_args.out, "Similarity matrix output");

    CheckArgs check_args;
    auto* check_cmd = app.add_subcommand("check", "Diagnose a stored solution");
    check_cmd->add_option("--input", check_args.input, "Input matrix s")->required();
    check_cmd->add_option("--theta", check_args.theta_file, "Stored theta")->required();
    check_cmd->add_option("--cov", check_args.cov_file, "Stored inverse (optional)");
    check_cmd->add_option("--lambda", check_args.lambda, "Regularization strength")->required();
    check_cmd->add_flag("--oracle", check_args.oracle,
                        "Cross-check against the reference solver (p <= 100)");
    check_args.penalty.attach(check_cmd);

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Run the scaled synthetic battery");
    bench_cmd->add_option("--sizes", bench_args.sizes, "Problem sizes")->capture_default_str();
    bench_cmd->add_option("--n-factor", bench_args.n_factor, "Samples per dimension")
        ->capture_default_str();
    bench_cmd->add_option("--density", bench_args.density, "Generator density")
        ->capture_default_str();
    bench_cmd->add_option("--grid-points", bench_args.grid_points, "Lambdas per size")
        ->capture_default_str();
    bench_cmd->add_option("--variants", bench_args.variants, "Variants to run")
        ->capture_default_str();
    bench_cmd->add_option("--tol", bench_args.tol, "Solver tolerance")->capture_default_str();
    bench_cmd->add_option("--max-sweeps", bench_args.max_sweeps, "Sweep limit")
        ->capture_default_str();
    bench_cmd->add_option("--seed", bench_args.seed, "Generator seed")->capture_default_str();
    bench_cmd->add_option("--out", bench_args.out, "JSONL output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (app.got_subcommand(solve_cmd)) return run_solve(solve_args);
        if (app.got_subcommand(path_cmd)) return run_path(path_args);
        if (app.got_subcommand(gen_cmd)) return run_gen(gen_args);
        if (app.got_subcommand(sim_cmd)) return run_sim(sim_args);
        if (app.got_subcommand(check_cmd)) return run_check(check_args);
        if (app.got_subcommand(bench_cmd)) return run_bench(bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
