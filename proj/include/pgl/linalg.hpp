#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "pgl/symmetric_matrix.hpp"

namespace pgl {

struct CholeskyResult {
    bool is_pd = false;
    double logdet = std::numeric_limits<double>::quiet_NaN();
    double min_pivot = std::numeric_limits<double>::quiet_NaN();
};

// Lower-triangular Cholesky factor of a symmetric matrix, when it exists.
// Pivots are required to be strictly positive; failure is reported, not thrown.
class CholeskyFactor {
public:
    static std::optional<CholeskyFactor> compute(const SymmetricMatrix& a) {
        const int n = a.dim();
        CholeskyFactor f;
        f.dim_ = n;
        f.lower_.assign(size_t(n) * n, 0.0);
        f.min_pivot_ = std::numeric_limits<double>::infinity();
        double logdet = 0.0;
        for (int j = 0; j < n; ++j) {
            double d = a(j, j);
            const double* lj = &f.lower_[size_t(j) * n];
            for (int k = 0; k < j; ++k) d -= lj[k] * lj[k];
            f.min_pivot_ = std::min(f.min_pivot_, d);
            if (!(d > 0.0)) return std::nullopt;
            const double ljj = std::sqrt(d);
            f.lower_[size_t(j) * n + j] = ljj;
            logdet += std::log(d);
            for (int r = j + 1; r < n; ++r) {
                double s = a(r, j);
                const double* lr = &f.lower_[size_t(r) * n];
                for (int k = 0; k < j; ++k) s -= lr[k] * lj[k];
                f.lower_[size_t(r) * n + j] = s / ljj;
            }
        }
        f.logdet_ = logdet;
        return f;
    }

    int dim() const { return dim_; }
    double logdet() const { return logdet_; }
    double min_pivot() const { return min_pivot_; }
    double lower(int i, int j) const { return lower_[size_t(i) * dim_ + j]; }

    // Solves A x = b in place via the two triangular systems.
    void solve_in_place(std::vector<double>& b) const {
        const int n = dim_;
        for (int i = 0; i < n; ++i) {
            double s = b[i];
            const double* li = &lower_[size_t(i) * n];
            for (int k = 0; k < i; ++k) s -= li[k] * b[k];
            b[i] = s / li[i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = b[i];
            for (int k = i + 1; k < n; ++k) s -= lower_[size_t(k) * n + i] * b[k];
            b[i] = s / lower_[size_t(i) * n + i];
        }
    }

    SymmetricMatrix inverse() const {
        const int n = dim_;
        // X = L^{-1}, then A^{-1} = X' X.
        std::vector<double> x(size_t(n) * n, 0.0);
        for (int j = 0; j < n; ++j) {
            x[size_t(j) * n + j] = 1.0 / lower_[size_t(j) * n + j];
            for (int i = j + 1; i < n; ++i) {
                double s = 0.0;
                const double* li = &lower_[size_t(i) * n];
                for (int k = j; k < i; ++k) s -= li[k] * x[size_t(k) * n + j];
                x[size_t(i) * n + j] = s / li[i];
            }
        }
        SymmetricMatrix inv(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double s = 0.0;
                for (int k = i; k < n; ++k) s += x[size_t(k) * n + i] * x[size_t(k) * n + j];
                inv.set(i, j, s);
            }
        return inv;
    }

private:
    int dim_ = 0;
    std::vector<double> lower_;
    double logdet_ = 0.0;
    double min_pivot_ = 0.0;
};

// PD test by attempted factorization. Non-PD is an answer, not an error.
inline CholeskyResult cholesky_check(const SymmetricMatrix& a) {
    const int n = a.dim();
    std::vector<double> l(size_t(n) * n, 0.0);
    CholeskyResult res;
    res.min_pivot = std::numeric_limits<double>::infinity();
    double logdet = 0.0;
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        const double* lj = &l[size_t(j) * n];
        for (int k = 0; k < j; ++k) d -= lj[k] * lj[k];
        res.min_pivot = std::min(res.min_pivot, d);
        if (!(d > 0.0)) {
            res.is_pd = false;
            res.logdet = std::numeric_limits<double>::quiet_NaN();
            return res;
        }
        logdet += std::log(d);
        const double ljj = std::sqrt(d);
        l[size_t(j) * n + j] = ljj;
        for (int r = j + 1; r < n; ++r) {
            double s = a(r, j);
            const double* lr = &l[size_t(r) * n];
            for (int k = 0; k < j; ++k) s -= lr[k] * lj[k];
            l[size_t(r) * n + j] = s / ljj;
        }
    }
    res.is_pd = true;
    res.logdet = logdet;
    return res;
}

inline std::optional<SymmetricMatrix> spd_inverse(const SymmetricMatrix& a) {
    auto f = CholeskyFactor::compute(a);
    if (!f) return std::nullopt;
    return f->inverse();
}

// All eigenvalues of a symmetric matrix by the cyclic Jacobi method,
// returned in ascending order. Deterministic; adequate at desk scale.
inline std::vector<double> jacobi_eigenvalues(const SymmetricMatrix& a_in, int max_sweeps = 100) {
    const int n = a_in.dim();
    std::vector<double> a(size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[size_t(i) * n + j] = a_in(i, j);

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a[size_t(i) * n + j] * a[size_t(i) * n + j];
        return std::sqrt(2.0 * s);
    };
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double tol = 1e-14 * std::max(scale, 1.0) * n;

    for (int sweep = 0; sweep < max_sweeps && off_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[size_t(p) * n + q];
                if (apq == 0.0) continue;
                const double app = a[size_t(p) * n + p];
                const double aqq = a[size_t(q) * n + q];
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a[size_t(k) * n + p];
                    const double akq = a[size_t(k) * n + q];
                    a[size_t(k) * n + p] = c * akp - s * akq;
                    a[size_t(k) * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[size_t(p) * n + k];
                    const double aqk = a[size_t(q) * n + k];
                    a[size_t(p) * n + k] = c * apk - s * aqk;
                    a[size_t(q) * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a[size_t(i) * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

// Largest eigenvalue of a symmetric PSD matrix by power iteration
// (Rayleigh-quotient tolerance 1e-8, cap 200 iterations). The Rayleigh
// quotient approaches the spectral norm from below, so the converged value
// is inflated slightly and the Frobenius norm serves as the upper-bound
// fallback when the iteration stalls.
inline double spectral_norm_psd(const SymmetricMatrix& m, double tol = 1e-8, int max_iter = 200) {
    const int n = m.dim();
    if (n == 0) return 0.0;
    double fro = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fro += m(i, j) * m(i, j);
    fro = std::sqrt(fro);
    if (fro == 0.0) return 0.0;

    // Ramped start vector: a uniform start can be exactly orthogonal to the
    // top eigenvector (alternating-sign modes), which would stall the
    // iteration on a smaller eigenvalue.
    std::vector<double> v(n), mv(n);
    double vnorm = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = 1.0 + 0.618 * double(i + 1) / double(n);
        vnorm += v[i] * v[i];
    }
    vnorm = std::sqrt(vnorm);
    for (int i = 0; i < n; ++i) v[i] /= vnorm;
    double lambda_prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            const double* mi = m.row(i);
            for (int j = 0; j < n; ++j) s += mi[j] * v[j];
            mv[i] = s;
        }
        double norm = 0.0, lambda = 0.0;
        for (int i = 0; i < n; ++i) {
            norm += mv[i] * mv[i];
            lambda += v[i] * mv[i];
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) break;  // v in the null space; fall back
        for (int i = 0; i < n; ++i) v[i] = mv[i] / norm;
        if (it > 0 && std::abs(lambda - lambda_prev) <= tol * std::max(std::abs(lambda), 1.0))
            return lambda * (1.0 + 1e-6);
        lambda_prev = lambda;
    }
    return fro;
}

}  // namespace pgl
