#pragma once

// Small dense linear algebra kernels. Dimensions here are tiny (d <= 16 or so),
// so everything is plain std::vector<double> with fixed left-to-right summation
// order — reproducibility matters more than speed.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace attnlab {

using Vec = std::vector<double>;

// Row-major dense matrix.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) {
        assert(r >= 0 && r < rows && c >= 0 && c < cols);
        return data[static_cast<size_t>(r) * cols + c];
    }
    double operator()(int r, int c) const {
        assert(r >= 0 && r < rows && c >= 0 && c < cols);
        return data[static_cast<size_t>(r) * cols + c];
    }
    bool operator==(const Matrix& o) const {
        return rows == o.rows && cols == o.cols && data == o.data;
    }
};

inline double dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double x : m.data) s += x * x;
    return std::sqrt(s);
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
    assert(a.rows == b.rows && a.cols == b.cols);
    double s = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const double dlt = a.data[i] - b.data[i];
        s += dlt * dlt;
    }
    return std::sqrt(s);
}

// a += scale * b
inline void axpy(Vec& a, double scale, const Vec& b) {
    assert(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
}

inline void axpy(Matrix& a, double scale, const Matrix& b) {
    assert(a.rows == b.rows && a.cols == b.cols);
    for (size_t i = 0; i < a.data.size(); ++i) a.data[i] += scale * b.data[i];
}

// Cosine of the angle between two nonzero vectors.
inline double cosine(const Vec& a, const Vec& b) {
    const double na = norm2(a), nb = norm2(b);
    assert(na > 0.0 && nb > 0.0);
    return dot(a, b) / (na * nb);
}

}  // namespace attnlab
