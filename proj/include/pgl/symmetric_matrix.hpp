#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "pgl/errors.hpp"

namespace pgl {

// Dense symmetric matrix, row-major full storage with mirrored writes:
// set(i,j,v) stores v at both (i,j) and (j,i), so entry(i,j) == entry(j,i)
// holds exactly at all times.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;

    explicit SymmetricMatrix(int dim) : dim_(dim), data_(size_t(dim) * dim, 0.0) {
        assert(dim >= 1);
    }

    static SymmetricMatrix identity(int dim) {
        SymmetricMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.data_[size_t(i) * dim + i] = 1.0;
        return m;
    }

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return data_[size_t(i) * dim_ + j]; }

    void set(int i, int j, double v) {
        data_[size_t(i) * dim_ + j] = v;
        data_[size_t(j) * dim_ + i] = v;
    }

    void add(int i, int j, double v) { set(i, j, (*this)(i, j) + v); }

    // Contiguous row i (equals column i by symmetry).
    const double* row(int i) const { return data_.data() + size_t(i) * dim_; }
    double* row(int i) { return data_.data() + size_t(i) * dim_; }

    const std::vector<double>& data() const { return data_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs_off_diagonal() const {
        double q = 0.0;
        for (int i = 1; i < dim_; ++i)
            for (int j = 0; j < i; ++j) q = std::max(q, std::abs((*this)(i, j)));
        return q;
    }

    int nnz_off_diagonal() const {
        int nnz = 0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                if (i != j && (*this)(i, j) != 0.0) ++nnz;
        return nnz;
    }

private:
    int dim_ = 0;
    std::vector<double> data_;
};

// One column of a symmetric matrix split into its off-diagonal part and the
// diagonal scalar. off_diagonal holds the p-1 entries of column `target` in
// ascending row order with row `target` skipped, i.e. the compacted index
// space used by all block kernels below. No physical permutation happens
// anywhere; the target column logically plays the "last row/column" role.
struct ColumnSplit {
    int target = 0;
    std::vector<double> off_diagonal;
    double diagonal = 0.0;
};

inline ColumnSplit column_split(const SymmetricMatrix& a, int i) {
    const int p = a.dim();
    ColumnSplit s;
    s.target = i;
    s.off_diagonal.resize(size_t(p) - 1);
    for (int r = 0, k = 0; r < p; ++r) {
        if (r == i) continue;
        s.off_diagonal[k++] = a(r, i);
    }
    s.diagonal = a(i, i);
    return s;
}

inline void set_column(SymmetricMatrix& a, const ColumnSplit& s) {
    const int p = a.dim();
    for (int r = 0, k = 0; r < p; ++r) {
        if (r == s.target) continue;
        a.set(r, s.target, s.off_diagonal[k++]);
    }
    a.set(s.target, s.target, s.diagonal);
}

// Running log det of the tracked precision matrix, advanced by the exact
// per-column deltas so no separate factorization is needed inside solves.
struct LogDetAccumulator {
    double value = 0.0;
    void add(double delta) { value += delta; }
};

// Given w = theta^{-1} for a positive definite theta, returns the inverse of
// theta with row/column i deleted:
//
//   (theta_11)^{-1} = w_11 - w_1p w_1p' / w_pp
//
// in the compacted (p-1)-dimensional index space. Cost O(p^2).
inline SymmetricMatrix submatrix_inverse(const SymmetricMatrix& w, int i) {
    const int p = w.dim();
    const double wpp = w(i, i);
    if (!(wpp > 0.0))
        throw corrupted_state("submatrix_inverse: tracked inverse has nonpositive diagonal");
    SymmetricMatrix m(p - 1);
    const double* wi = w.row(i);
    for (int r = 0, j = 0; r < p; ++r) {
        if (r == i) continue;
        const double* wr = w.row(r);
        const double wri = wi[r] / wpp;
        for (int c = 0, k = 0; c <= r; ++c) {
            if (c == i) continue;
            m.set(j, k, wr[c] - wri * wi[c]);
            ++k;
        }
        ++j;
    }
    return m;
}

// Inverse of the matrix obtained by replacing column/row i with new_column
// while keeping the complement block fixed. theta_inv11 is the inverse of
// that complement block (compacted index space). With
// c = diagonal - off' theta_inv11 off (the Schur complement):
//
//   w_11 = theta_inv11 + (theta_inv11 off)(theta_inv11 off)' / c
//   w_1p = -(theta_inv11 off) / c,   w_pp = 1 / c
//
// c <= 1e-14 is treated as corruption: a legal column update always yields
// c = 1/(s_pp + lambda) > 0. Cost O(p^2).
inline SymmetricMatrix inverse_rebuild(const SymmetricMatrix& theta_inv11,
                                       const ColumnSplit& new_column, int i) {
    const int d = theta_inv11.dim();
    const int p = d + 1;
    assert(new_column.target == i);
    assert(int(new_column.off_diagonal.size()) == d);

    std::vector<double> u(d, 0.0);
    for (int j = 0; j < d; ++j) {
        const double xj = new_column.off_diagonal[j];
        if (xj == 0.0) continue;
        const double* mj = theta_inv11.row(j);
        for (int k = 0; k < d; ++k) u[k] += mj[k] * xj;
    }
    double quad = 0.0;
    for (int j = 0; j < d; ++j) quad += u[j] * new_column.off_diagonal[j];
    const double c = new_column.diagonal - quad;
    if (!(c > 1e-14))
        throw corrupted_state("inverse_rebuild: nonpositive Schur complement, positive definiteness lost");

    SymmetricMatrix w(p);
    for (int r = 0, j = 0; r < p; ++r) {
        if (r == i) continue;
        for (int c2 = 0, k = 0; c2 <= r; ++c2) {
            if (c2 == i) continue;
            w.set(r, c2, theta_inv11(j, k) + u[j] * u[k] / c);
            ++k;
        }
        w.set(r, i, -u[j] / c);
        ++j;
    }
    w.set(i, i, 1.0 / c);
    return w;
}

// Exact change in log det theta caused by one column update: the pre-update
// Schur complement of the column equals 1/w_pp and the post-update one
// equals 1/(s_pp + lambda_diag).
inline double logdet_column_delta(double w_pp_old, double s_pp, double lambda_diag) {
    if (!(w_pp_old > 0.0))
        throw corrupted_state("logdet_column_delta: nonpositive w_pp");
    const double denom = s_pp + lambda_diag;
    if (!(denom > 0.0))
        throw corrupted_state("logdet_column_delta: nonpositive s_pp + lambda_diag");
    return std::log(w_pp_old) - std::log(denom);
}

}  // namespace pgl
