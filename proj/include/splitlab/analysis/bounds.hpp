#pragma once

// Closed-form local-error bounds for the four splitting schemes.
//
// The bounds are stated for the unit problem du/dt = u_xx + f(u). The scaled
// problem du/dt = D u_xx + k f(u) maps onto it through tau = k t and
// r = sqrt(k/D) x, so every formula is evaluated with
//   t        -> k t
//   |u_x|    -> sqrt(D/k) |u_x|
//   |u_xx|   -> (D/k) |u_xx|
// which reproduces the k, D factors of the scaled Lie estimates exactly.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <numbers>

#include "splitlab/grid.hpp"
#include "splitlab/kpp.hpp"
#include "splitlab/model.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab {

inline constexpr double kNoBound = std::numeric_limits<double>::infinity();

/// Evaluated bounds; entries that do not apply to the scheme stay +inf.
struct BoundSet {
    double classical = kNoBound;         ///< Lie, order 2
    double alt_15 = kNoBound;            ///< Lie, order 1.5 (L1 and L2 variants)
    double alt_1 = kNoBound;             ///< L2 only, order 1
    double strang_classical = kNoBound;  ///< Strang, order 3
    double strang_alt = kNoBound;        ///< Strang, regularised
    double effective = kNoBound;
};

/// Problem-dependent quantities the bounds need; computed once per initial field.
struct BoundInputs {
    double k = 1.0;
    double D = 1.0;
    double u0_sup = 0.0;
    double grad_sup = 0.0;
    double grad2_sup = 0.0;
    DerivativeSupNorms norms;
};

inline BoundInputs bound_inputs(const ReactionModel& model, const DiffusionCoefficient& D, const GridField& u0) {
    BoundInputs in;
    in.k = model.k;
    in.D = D.value();
    in.u0_sup = field_norms(u0).linf;
    in.grad_sup = gradient_max(u0);
    in.grad2_sup = second_derivative_max(u0);
    in.norms = derivative_sup_norms(model, std::max(in.u0_sup, 1.0));
    return in;
}

namespace detail {

/// Product of non-negative factors where an exact zero wins over an infinite
/// exponential, so vanishing derivative terms stay zero.
inline double product(std::initializer_list<double> factors) {
    double p = 1.0;
    for (double f : factors)
        if (f == 0.0) return 0.0;
    for (double f : factors) p *= f;
    return p;
}

inline double finite_min(std::initializer_list<double> xs) {
    double m = kNoBound;
    for (double x : xs) m = std::min(m, x);
    return m;
}

}  // namespace detail

inline BoundSet evaluate_bounds(SchemeId scheme, double dt, const BoundInputs& in) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("bounds require dt > 0");
    using detail::product;
    constexpr double pi = std::numbers::pi;
    const double sqrt_pi = std::sqrt(pi);

    // Unit-problem variables.
    const double t = in.k * dt;
    const double g1 = in.k > 0.0 ? std::sqrt(in.D / in.k) * in.grad_sup : 0.0;
    const double g2 = in.k > 0.0 ? (in.D / in.k) * in.grad2_sup : 0.0;
    const double n0 = in.u0_sup;
    const double kappa = std::max(n0, 1.0);
    const auto& N = in.norms;
    const double F0 = N.norm_f, F1 = N.norm_f1, F2 = N.norm_f2, F3 = N.norm_f3, F4 = N.norm_f4;
    const auto e = [&](double c) { return std::exp(c * t * F1); };

    BoundSet b;
    if (is_lie(scheme)) {
        b.classical = product({t * t / 2.0, e(2.0), F2, g1 * g1});
        if (scheme == SchemeId::L1) {
            b.alt_15 = product({4.0 * kappa * t * std::sqrt(t) / (3.0 * sqrt_pi), e(1.0), F2, g1});
        } else {
            b.alt_15 = product({2.0 * t * std::sqrt(t) / (3.0 * sqrt_pi), e(2.0), F2, n0, g1});
            b.alt_1 = product({t / pi, e(2.0), F2, n0 * n0});
        }
        b.effective = detail::finite_min({b.classical, b.alt_15, b.alt_1});
        return b;
    }

    const double t3 = t * t * t, t4 = t3 * t, t5 = t4 * t;
    const double mixed = F1 * F2 + F0 * F3;
    if (scheme == SchemeId::S1) {
        b.strang_classical =
            product({t3 * F4 / 24.0 + t4 * F3 * F2 / 8.0 + t5 * F2 * F2 * F2 / 20.0, e(4.0), std::pow(g1, 4)}) +
            product({t3 * F3 / 6.0 + t4 * F2 * F2 / 8.0, e(3.0), g1 * g1, g2}) +
            product({t3 / 12.0, e(2.0), F2, g2 * g2}) +
            product({t3 / 12.0, e(2.0), mixed, g1 * g1});
        b.strang_alt =
            product({t / (2.0 * pi * pi), e(4.0),
                     F4 * std::pow(n0, 4) + 4.0 * pi * F3 * std::pow(n0, 3) + 2.0 * pi * pi * F2 * n0 * n0}) +
            product({t * t / (pi * pi), e(4.0), F3 * F2 * std::pow(n0, 4) + pi * F2 * F2 * std::pow(n0, 3)}) +
            product({t * t / (4.0 * pi), e(2.0), mixed, n0 * n0}) +
            product({t3 / (3.0 * pi * pi), e(4.0), F2 * F2 * F2, std::pow(n0, 4)});
    } else {
        b.strang_classical =
            product({t3 * F4 / 12.0 + t4 * F3 * F2 / 8.0 + t5 * F2 * F2 * F2 / 40.0, e(2.5), std::pow(g1, 4)}) +
            product({t3 * F3 / 3.0 + t4 * F2 * F2 / 8.0, e(2.0), g1 * g1, g2}) +
            product({t3 / 6.0, e(1.5), F2, g2 * g2}) +
            product({t3 / 24.0, e(2.0), mixed, g1 * g1});
        b.strang_alt =
            product({kappa * t * std::sqrt(t) / (3.0 * pi * sqrt_pi), e(1.0),
                     2.0 * kappa * kappa * F4 + 8.0 * pi * kappa * F3 + 4.0 * pi * F2, g1}) +
            product({kappa * kappa * t * t / (16.0 * pi), e(1.5), mixed});
    }
    b.effective = detail::finite_min({b.strang_classical, b.strang_alt});
    return b;
}

inline BoundSet evaluate_bounds(SchemeId scheme, double dt, const ReactionModel& model, const DiffusionCoefficient& D,
                                const GridField& u0) {
    return evaluate_bounds(scheme, dt, bound_inputs(model, D, u0));
}

}  // namespace splitlab
