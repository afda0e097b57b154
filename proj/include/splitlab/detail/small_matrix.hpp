#pragma once

#include <array>
#include <cmath>

namespace splitlab::detail {

/// Row-major 3x3 matrix, enough for Radau IIA stage blocks.
struct Mat3 {
    std::array<double, 9> a{};

    double& operator()(int r, int c) noexcept { return a[3 * r + c]; }
    double operator()(int r, int c) const noexcept { return a[3 * r + c]; }

    static Mat3 identity() noexcept {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
};

using Vec3 = std::array<double, 3>;

inline Mat3 operator*(const Mat3& x, const Mat3& y) noexcept {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j) + x(i, 2) * y(2, j);
    return r;
}

inline Vec3 operator*(const Mat3& m, const Vec3& v) noexcept {
    return {m(0, 0) * v[0] + m(0, 1) * v[1] + m(0, 2) * v[2],
            m(1, 0) * v[0] + m(1, 1) * v[1] + m(1, 2) * v[2],
            m(2, 0) * v[0] + m(2, 1) * v[1] + m(2, 2) * v[2]};
}

/// Cofactor inverse. Returns false when the matrix is numerically singular.
inline bool invert(const Mat3& m, Mat3& inv) noexcept {
    const double c00 = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const double c01 = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    const double c02 = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    const double det = m(0, 0) * c00 + m(0, 1) * c01 + m(0, 2) * c02;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) return false;
    const double s = 1.0 / det;
    inv(0, 0) = c00 * s;
    inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) * s;
    inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) * s;
    inv(1, 0) = c01 * s;
    inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) * s;
    inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) * s;
    inv(2, 0) = c02 * s;
    inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) * s;
    inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) * s;
    return true;
}

}  // namespace splitlab::detail
