#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgl/linalg.hpp"
#include "pgl/rng.hpp"
#include "pgl/symmetric_matrix.hpp"

namespace pgl {

// Plain row-major dense matrix for sample tables (n observations x p variables).
struct DenseMatrix {
    int rows = 0, cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), values(size_t(r) * c, 0.0) {}
    double& at(int i, int j) { return values[size_t(i) * cols + j]; }
    double at(int i, int j) const { return values[size_t(i) * cols + j]; }
};

struct SyntheticSpec {
    int p = 0;
    int n = 0;
    double density = 0.01;  // target proportion of nonzeros in the raw +-1 draw
    uint64_t seed = 0;

    void check() const {
        if (p < 2) throw std::invalid_argument("synthetic: p must be >= 2");
        if (n < 1) throw std::invalid_argument("synthetic: n must be >= 1");
        if (!(density > 0.0 && density <= 1.0))
            throw std::invalid_argument("synthetic: density must lie in (0,1]");
    }
};

struct SyntheticInstance {
    SymmetricMatrix sigma_inv_true;       // population precision, min eigenvalue 1
    SymmetricMatrix sample_correlation;   // the matrix handed to the solver as s
    double realized_offdiag_density = 0.0;
    double tau = 0.0;                     // diagonal lift applied to reach eigenvalue 1
};

// Unit-diagonal matrix of Pearson correlations. The normalization makes the
// covariance denominator cancel, so none is applied.
inline SymmetricMatrix sample_correlation(const DenseMatrix& samples) {
    const int n = samples.rows, p = samples.cols;
    if (n < 2) throw std::invalid_argument("sample_correlation: need at least 2 samples");
    std::vector<double> mean(p, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) mean[j] += samples.at(i, j);
    for (int j = 0; j < p; ++j) mean[j] /= double(n);

    std::vector<double> scatter(size_t(p) * p, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) {
            const double xj = samples.at(i, j) - mean[j];
            for (int k = 0; k <= j; ++k)
                scatter[size_t(j) * p + k] += xj * (samples.at(i, k) - mean[k]);
        }
    for (int j = 0; j < p; ++j) {
        const double var = scatter[size_t(j) * p + j];
        const double floor = double(n) * std::pow(1e-14 * (std::abs(mean[j]) + 1.0), 2);
        if (!(var > floor))
            throw std::invalid_argument("sample_correlation: column " + std::to_string(j) +
                                        " has zero variance");
    }
    SymmetricMatrix s(p);
    for (int j = 0; j < p; ++j) {
        s.set(j, j, 1.0);
        for (int k = 0; k < j; ++k)
            s.set(j, k, scatter[size_t(j) * p + k] /
                            std::sqrt(scatter[size_t(j) * p + j] * scatter[size_t(k) * p + k]));
    }
    return s;
}

// Synthetic protocol: draw a_ij in {-1,0,1} with P(nonzero) = density and the
// signs balanced, symmetrize a <- (a + a')/2, lift the spectrum so the
// smallest eigenvalue of sigma^{-1} = a + tau I equals one, then sample n
// observations from N(0, sigma) and return their correlation matrix.
inline SyntheticInstance generate_instance(const SyntheticSpec& spec) {
    spec.check();
    const int p = spec.p, n = spec.n;
    Rng rng(spec.seed);

    DenseMatrix a(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            const double u = rng.uniform();
            a.at(i, j) = u < 0.5 * spec.density ? -1.0 : (u < spec.density ? 1.0 : 0.0);
        }
    SymmetricMatrix sym(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j) sym.set(i, j, 0.5 * (a.at(i, j) + a.at(j, i)));

    const auto eig = jacobi_eigenvalues(sym);
    const double tau = 1.0 - eig.front();

    SyntheticInstance inst;
    inst.tau = tau;
    inst.sigma_inv_true = sym;
    for (int i = 0; i < p; ++i) inst.sigma_inv_true.set(i, i, sym(i, i) + tau);

    int nnz = 0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j && inst.sigma_inv_true(i, j) != 0.0) ++nnz;
    inst.realized_offdiag_density = double(nnz) / (double(p) * (p - 1));

    auto sigma = spd_inverse(inst.sigma_inv_true);
    if (!sigma) throw std::runtime_error("synthetic: lifted precision matrix not positive definite");
    auto chol = CholeskyFactor::compute(*sigma);
    if (!chol) throw std::runtime_error("synthetic: covariance factorization failed");

    DenseMatrix samples(n, p);
    std::vector<double> z(p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) z[j] = rng.normal();
        for (int j = 0; j < p; ++j) {
            double x = 0.0;
            for (int k = 0; k <= j; ++k) x += chol->lower(j, k) * z[k];
            samples.at(i, j) = x;
        }
    }
    inst.sample_correlation = sample_correlation(samples);
    return inst;
}

// Binary who-rated-what table, stored as per-user item lists (the dense
// indicator view is available through rated()).
struct RatingsMatrix {
    int users = 0;
    int items = 0;
    std::vector<std::vector<int>> items_by_user;  // sorted, deduplicated

    bool rated(int u, int j) const {
        const auto& v = items_by_user[u];
        return std::binary_search(v.begin(), v.end(), j);
    }
};

// Reads CSV lines "user_id,item_id[,...]"; any extra columns are ignored.
// Raw ids are mapped to contiguous indices in sorted order.
inline RatingsMatrix read_ratings_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::pair<long, long>> pairs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string ucell, icell;
        if (!std::getline(ss, ucell, ',') || !std::getline(ss, icell, ','))
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": expected user_id,item_id");
        try {
            pairs.emplace_back(std::stol(ucell), std::stol(icell));
        } catch (const std::exception&) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": cannot parse ids");
        }
    }
    if (pairs.empty()) throw std::runtime_error(path + ": no ratings found");

    std::vector<long> uids, iids;
    for (auto& pr : pairs) {
        uids.push_back(pr.first);
        iids.push_back(pr.second);
    }
    std::sort(uids.begin(), uids.end());
    uids.erase(std::unique(uids.begin(), uids.end()), uids.end());
    std::sort(iids.begin(), iids.end());
    iids.erase(std::unique(iids.begin(), iids.end()), iids.end());
    auto index_of = [](const std::vector<long>& v, long x) {
        return int(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };

    RatingsMatrix r;
    r.users = int(uids.size());
    r.items = int(iids.size());
    r.items_by_user.resize(r.users);
    for (auto& pr : pairs)
        r.items_by_user[index_of(uids, pr.first)].push_back(index_of(iids, pr.second));
    for (auto& v : r.items_by_user) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return r;
}

// s_jk = x_j'x_k / sqrt(sum_l x_jl  sum_l x_kl) over the binary indicator
// columns; the Gram structure of the normalized columns makes the output
// positive semidefinite with a unit diagonal.
inline SymmetricMatrix similarity_matrix(const RatingsMatrix& r) {
    const int m = r.items;
    std::vector<long> count(m, 0);
    for (const auto& v : r.items_by_user)
        for (int j : v) ++count[j];
    std::vector<int> unrated;
    for (int j = 0; j < m; ++j)
        if (count[j] == 0) unrated.push_back(j);
    if (!unrated.empty()) {
        std::string ids;
        for (size_t k = 0; k < unrated.size(); ++k)
            ids += (k ? "," : "") + std::to_string(unrated[k]);
        throw std::invalid_argument("similarity_matrix: items never rated: " + ids);
    }

    std::vector<long> co(size_t(m) * m, 0);
    for (const auto& v : r.items_by_user)
        for (size_t a = 0; a < v.size(); ++a)
            for (size_t b = 0; b <= a; ++b) ++co[size_t(v[a]) * m + v[b]];

    SymmetricMatrix s(m);
    for (int j = 0; j < m; ++j) {
        s.set(j, j, 1.0);
        for (int k = 0; k < j; ++k)
            s.set(j, k, double(co[size_t(j) * m + k]) /
                            std::sqrt(double(count[j]) * double(count[k])));
    }
    return s;
}

}  // namespace pgl
