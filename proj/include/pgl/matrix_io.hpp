#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgl/symmetric_matrix.hpp"

namespace pgl {

enum class MatrixFormat { DenseCsv, MatrixMarket, Auto };

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline MatrixFormat infer_format(const std::string& path) {
    const auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& c : ext) c = char(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "mtx" || ext == "mm") return MatrixFormat::MatrixMarket;
    return MatrixFormat::DenseCsv;
}

}  // namespace detail

// Dense CSV: one row per line, comma-separated decimal values, 17 significant
// digits on write so the round trip is exact.
inline void write_matrix_csv(const std::string& path, const SymmetricMatrix& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const int p = a.dim();
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (j) out << ',';
            out << detail::format_double(a(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline SymmetricMatrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                         ": cannot parse value '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": ragged row, expected " +
                                     std::to_string(rows.front().size()) + " values, got " +
                                     std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty matrix file");
    const int p = int(rows.size());
    if (int(rows.front().size()) != p)
        throw std::runtime_error(path + ": matrix is not square (" + std::to_string(p) + " rows, " +
                                 std::to_string(rows.front().size()) + " columns)");
    SymmetricMatrix a(p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j) {
            if (std::abs(rows[i][j] - rows[j][i]) > 1e-12)
                throw std::runtime_error(path + ": asymmetric entry at (" + std::to_string(i) +
                                         "," + std::to_string(j) + "): " +
                                         detail::format_double(rows[i][j]) + " vs " +
                                         detail::format_double(rows[j][i]));
            a.set(i, j, rows[i][j]);
        }
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (!std::isfinite(rows[i][j]))
                throw std::runtime_error(path + ": non-finite entry at (" + std::to_string(i) +
                                         "," + std::to_string(j) + ")");
    return a;
}

// Matrix Market coordinate format, symmetric: only the lower triangle is
// stored, 1-based indices, nonzero entries plus every diagonal entry.
inline void write_matrix_mm(const std::string& path, const SymmetricMatrix& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    const int p = a.dim();
    long nnz = 0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j)
            if (i == j || a(i, j) != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << p << ' ' << p << ' ' << nnz << '\n';
    for (int i = 0; i < p; ++i)
        for (int j = 0; j <= i; ++j)
            if (i == j || a(i, j) != 0.0)
                out << (i + 1) << ' ' << (j + 1) << ' ' << detail::format_double(a(i, j)) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline SymmetricMatrix read_matrix_mm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    {
        std::stringstream hs(line);
        std::string banner, object, fmt, field, symmetry;
        hs >> banner >> object >> fmt >> field >> symmetry;
        if (banner != "%%MatrixMarket" || object != "matrix" || fmt != "coordinate" ||
            field != "real" || symmetry != "symmetric")
            throw std::runtime_error(path + ": expected a coordinate real symmetric header");
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] != '%') break;
    }
    int rows = 0, cols = 0;
    long nnz = 0;
    {
        std::stringstream ss(line);
        if (!(ss >> rows >> cols >> nnz))
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": cannot parse size line");
    }
    if (rows != cols || rows < 1)
        throw std::runtime_error(path + ": not a square matrix (" + std::to_string(rows) + "x" +
                                 std::to_string(cols) + ")");
    SymmetricMatrix a(rows);
    for (long k = 0; k < nnz; ++k) {
        int i = 0, j = 0;
        double v = 0.0;
        if (!(in >> i >> j >> v))
            throw std::runtime_error(path + ": truncated entry list, expected " +
                                     std::to_string(nnz) + " entries, got " + std::to_string(k));
        if (i < 1 || i > rows || j < 1 || j > rows)
            throw std::runtime_error(path + ": entry index out of range: (" + std::to_string(i) +
                                     "," + std::to_string(j) + ")");
        if (!std::isfinite(v)) throw std::runtime_error(path + ": non-finite entry value");
        a.set(i - 1, j - 1, v);
    }
    return a;
}

inline SymmetricMatrix read_matrix(const std::string& path,
                                   MatrixFormat fmt = MatrixFormat::Auto) {
    if (fmt == MatrixFormat::Auto) fmt = detail::infer_format(path);
    return fmt == MatrixFormat::MatrixMarket ? read_matrix_mm(path) : read_matrix_csv(path);
}

inline void write_matrix(const std::string& path, const SymmetricMatrix& a,
                         MatrixFormat fmt = MatrixFormat::Auto) {
    if (fmt == MatrixFormat::Auto) fmt = detail::infer_format(path);
    if (fmt == MatrixFormat::MatrixMarket)
        write_matrix_mm(path, a);
    else
        write_matrix_csv(path, a);
}

}  // namespace pgl
