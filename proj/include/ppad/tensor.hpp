#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ppad/errors.hpp"
#include "ppad/rng.hpp"

namespace ppad {

using Vec = std::vector<double>;

/// Dense row-major matrix of doubles. Small and deliberately simple; every
/// gradient in this project is written against it by hand.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(std::size_t(r) * std::size_t(c), fill) {}

    double& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
    double at(int r, int c) const { return data[std::size_t(r) * cols + c]; }

    const double* row(int r) const { return data.data() + std::size_t(r) * cols; }
    double* row(int r) { return data.data() + std::size_t(r) * cols; }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    static Matrix gaussian(int r, int c, double sigma, Rng& rng) {
        Matrix m(r, c);
        for (auto& v : m.data) v = rng.gaussian(0.0, sigma);
        return m;
    }
};

inline Vec matvec(const Matrix& a, const Vec& x) {
    if (int(x.size()) != a.cols) throw DimensionMismatch("matvec shape mismatch");
    Vec y(a.rows, 0.0);
    for (int r = 0; r < a.rows; ++r) {
        const double* row = a.row(r);
        double acc = 0.0;
        for (int c = 0; c < a.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

/// y = A^T x (x has a.rows entries, result a.cols).
inline Vec matvec_transpose(const Matrix& a, const Vec& x) {
    if (int(x.size()) != a.rows) throw DimensionMismatch("matvec_transpose shape mismatch");
    Vec y(a.cols, 0.0);
    for (int r = 0; r < a.rows; ++r) {
        const double* row = a.row(r);
        const double xr = x[r];
        for (int c = 0; c < a.cols; ++c) y[c] += row[c] * xr;
    }
    return y;
}

inline double dot(const Vec& a, const Vec& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

/// Column mean over rows of a nonempty matrix.
inline Vec mean_rows(const Matrix& m) {
    if (m.rows == 0) throw EmptyInput("mean over zero rows");
    Vec out(m.cols, 0.0);
    for (int r = 0; r < m.rows; ++r) {
        const double* row = m.row(r);
        for (int c = 0; c < m.cols; ++c) out[c] += row[c];
    }
    for (auto& v : out) v /= m.rows;
    return out;
}

} // namespace ppad
