#pragma once

#include <algorithm>
#include <cmath>

#include "splitlab/detail/small_matrix.hpp"

namespace splitlab::detail {

/// Three-stage Radau IIA collocation (order 5, L-stable, stiffly accurate:
/// the step result is the last stage value).
inline const Mat3& radau_a() {
    static const Mat3 a = [] {
        const double s6 = std::sqrt(6.0);
        Mat3 m;
        m(0, 0) = (88.0 - 7.0 * s6) / 360.0;
        m(0, 1) = (296.0 - 169.0 * s6) / 1800.0;
        m(0, 2) = (-2.0 + 3.0 * s6) / 225.0;
        m(1, 0) = (296.0 + 169.0 * s6) / 1800.0;
        m(1, 1) = (88.0 + 7.0 * s6) / 360.0;
        m(1, 2) = (-2.0 - 3.0 * s6) / 225.0;
        m(2, 0) = (16.0 - s6) / 36.0;
        m(2, 1) = (16.0 + s6) / 36.0;
        m(2, 2) = 1.0 / 9.0;
        return m;
    }();
    return a;
}

/// Local error exponent used by the step-size controller (order 5 => h^6).
inline constexpr double kRadauErrorExponent = 1.0 / 6.0;
inline constexpr int kNewtonMaxIterations = 25;

/// New step size from a step-doubling error ratio (err <= 1 means accept).
inline double next_step_factor(double err) noexcept {
    if (!(err > 0.0)) return 4.0;
    return std::clamp(0.9 * std::pow(err, -kRadauErrorExponent), 0.2, 4.0);
}

struct ScalarStepResult {
    bool converged;
    double value;
};

/// One Radau IIA step for the scalar ODE du/dt = rate * g(u), full Newton.
/// `scale` is abs_tol + rel_tol*|u| used for the increment test.
template <class G, class G1>
ScalarStepResult radau_scalar_step(double u0, double h, double rate, const G& g, const G1& g1, double scale) {
    const Mat3& a = radau_a();
    Vec3 z{0.0, 0.0, 0.0};
    double prev = 0.0;
    for (int it = 0; it < kNewtonMaxIterations; ++it) {
        Vec3 fz;
        Mat3 m = Mat3::identity();
        for (int j = 0; j < 3; ++j) {
            const double uj = u0 + z[j];
            fz[j] = rate * g(uj);
            const double dj = h * rate * g1(uj);
            for (int i = 0; i < 3; ++i) m(i, j) -= a(i, j) * dj;
        }
        const Vec3 afz = a * fz;
        Vec3 res{z[0] - h * afz[0], z[1] - h * afz[1], z[2] - h * afz[2]};
        Mat3 minv;
        if (!invert(m, minv)) return {false, u0};
        const Vec3 dz = minv * res;
        double inc = 0.0;
        for (int j = 0; j < 3; ++j) {
            z[j] -= dz[j];
            inc = std::max(inc, std::abs(dz[j]));
        }
        if (!std::isfinite(inc)) return {false, u0};
        if (inc < 0.1 * scale) return {true, u0 + z[2]};
        if (it > 1 && inc > prev) return {false, u0};
        prev = inc;
    }
    return {false, u0};
}

}  // namespace splitlab::detail
