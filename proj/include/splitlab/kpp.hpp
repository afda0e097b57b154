#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <vector>

#include "splitlab/diagnostics.hpp"
#include "splitlab/error.hpp"
#include "splitlab/grid.hpp"
#include "splitlab/model.hpp"

namespace splitlab {

/// Zeldovich nonlinearity f(u) = u^2 (1 - u) with rate k.
inline ReactionModel zeldovich_model(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("zeldovich_model requires finite k > 0");
    ReactionModel m;
    m.k = k;
    m.f = [](double u) { return u * u * (1.0 - u); };
    m.f1 = [](double u) { return 2.0 * u - 3.0 * u * u; };
    m.f2 = [](double u) { return 2.0 - 6.0 * u; };
    m.f3 = [](double) { return -6.0; };
    m.f4 = [](double) { return 0.0; };
    m.name = "zeldovich";
    return m;
}

struct WaveParameters {
    double k = 1.0;
    double D = 1.0;
    double x0 = -14.0;

    /// Parameters obeying k * D = 1.
    static WaveParameters unit_product(double k, double x0 = -14.0) { return {k, 1.0 / k, x0}; }

    void validate() const {
        if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("wave parameter k must be finite and > 0");
        if (!(D > 0.0) || !std::isfinite(D)) throw InvalidArgument("wave parameter D must be finite and > 0");
        if (!std::isfinite(x0)) throw InvalidArgument("wave parameter x0 must be finite");
    }

    /// Exponential rate of the logistic front, sqrt(k/D)/sqrt(2).
    double steepness() const { return std::sqrt(k / D) / std::numbers::sqrt2; }

    /// Front speed sqrt(k D)/sqrt(2).
    double speed() const { return std::sqrt(k * D) / std::numbers::sqrt2; }

    /// Distance between the u = 0.9 and u = 0.1 levels.
    double layer_width() const { return 2.0 * std::log(9.0) / steepness(); }
};

inline constexpr double kMinNodesAcrossFront = 20.0;

inline double nodes_across_front(const Grid& grid, const WaveParameters& p) { return p.layer_width() / grid.dx(); }

/// Analytic profile and derivatives of the Zeldovich travelling wave at x.
struct WaveSample {
    double u;
    double du;
    double d2u;
};

inline WaveSample wave_sample(const WaveParameters& p, double x) {
    const double a = p.steepness();
    const double e = std::exp(a * (x - p.x0));
    const double u = std::isinf(e) ? 0.0 : 1.0 / (1.0 + e);
    const double s = u * (1.0 - u);
    return {u, -a * s, a * a * s * (1.0 - 2.0 * u)};
}

/// Travelling-wave initial profile u0(x) = 1 / (1 + exp(sqrt(k/D) (x - x0) / sqrt 2)).
inline GridField kpp_wave_profile(const Grid& grid, const WaveParameters& params) {
    params.validate();
    const double nodes = nodes_across_front(grid, params);
    if (nodes < kMinNodesAcrossFront) {
        std::ostringstream msg;
        msg << "under-resolved front: " << nodes << " nodes across the transition layer (k=" << params.k
            << ", D=" << params.D << ", dx=" << grid.dx() << "), recommended >= " << kMinNodesAcrossFront;
        warn(msg.str());
    }
    return GridField::sample(grid, [&](double x) { return wave_sample(params, x).u; });
}

/// Same profile shifted by speed * t.
inline GridField kpp_wave_at(const Grid& grid, const WaveParameters& params, double t) {
    WaveParameters moved = params;
    moved.x0 += params.speed() * t;
    return GridField::sample(grid, [&](double x) { return wave_sample(moved, x).u; });
}

struct DerivativeSupNorms {
    double kappa = 1.0;
    double norm_f = 0.0;
    double norm_f1 = 0.0;
    double norm_f2 = 0.0;
    double norm_f3 = 0.0;
    double norm_f4 = 0.0;

    double operator[](int n) const {
        switch (n) {
            case 0: return norm_f;
            case 1: return norm_f1;
            case 2: return norm_f2;
            case 3: return norm_f3;
            case 4: return norm_f4;
            default: throw InvalidArgument("derivative order must be in [0, 4]");
        }
    }
};

namespace detail {

/// sup |g| over [lo, hi]: dense sampling, then golden-section refinement of
/// every sampled local maximum.
template <class G>
double sup_abs(const G& g, double lo, double hi, std::size_t samples = 100001) {
    std::vector<double> v(samples);
    const double step = (hi - lo) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) v[i] = std::abs(g(lo + static_cast<double>(i) * step));
    double best = *std::max_element(v.begin(), v.end());

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (std::size_t i = 1; i + 1 < samples; ++i) {
        if (!(v[i] >= v[i - 1] && v[i] >= v[i + 1]) || v[i] == 0.0) continue;
        double a = lo + static_cast<double>(i - 1) * step;
        double b = lo + static_cast<double>(i + 1) * step;
        double c = b - inv_phi * (b - a);
        double d = a + inv_phi * (b - a);
        double fc = std::abs(g(c));
        double fd = std::abs(g(d));
        for (int it = 0; it < 60 && (b - a) > 1e-15 * (1.0 + std::abs(a)); ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = std::abs(g(c));
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = std::abs(g(d));
            }
        }
        best = std::max({best, fc, fd});
    }
    return best;
}

}  // namespace detail

/// Sup norms of |f|, ..., |f''''| over [-kappa, kappa].
inline DerivativeSupNorms derivative_sup_norms(const ReactionModel& model, double kappa) {
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be finite and >= 1");
    model.validate();
    DerivativeSupNorms out;
    out.kappa = kappa;
    out.norm_f = detail::sup_abs(model.f, -kappa, kappa);
    out.norm_f1 = detail::sup_abs(model.f1, -kappa, kappa);
    out.norm_f2 = detail::sup_abs(model.f2, -kappa, kappa);
    out.norm_f3 = detail::sup_abs(model.f3, -kappa, kappa);
    out.norm_f4 = detail::sup_abs(model.f4, -kappa, kappa);
    return out;
}

/// Samples r f(r) <= 0 on +-[R, r_max]; true when the dissipativity condition holds there.
inline bool satisfies_dissipativity(const ReactionModel& model, double R = 1.0, double r_max = 10.0,
                                    std::size_t samples = 1001) {
    for (std::size_t i = 0; i < samples; ++i) {
        const double r = R + (r_max - R) * static_cast<double>(i) / static_cast<double>(samples - 1);
        if (r * model.f(r) > 0.0 || -r * model.f(-r) > 0.0) return false;
    }
    return true;
}

}  // namespace splitlab
