#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "splitlab/error.hpp"
#include "splitlab/flows.hpp"
#include "splitlab/grid.hpp"
#include "splitlab/kpp.hpp"
#include "splitlab/model.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab {

/// Scaled bracket kD f''(u) (u_x)^2 with the centered gradient.
inline GridField lie_bracket_field(const ReactionModel& model, const DiffusionCoefficient& D, const GridField& u) {
    model.validate();
    const std::vector<double> g = gradient_values(u);
    std::vector<double> out(u.grid().size());
    const double scale = model.k * D.value();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * model.f2(u[i]) * g[i] * g[i];
    return GridField(u.grid(), std::move(out));
}

struct LeadingTermRow {
    double dt;
    double deviation;
};

/// L2 norm of (T - L1) + (dt^2/2) bracket for each dt; the remainder should shrink like dt^3.
inline std::vector<LeadingTermRow> leading_term_check(const GridField& u0, const std::vector<double>& dt_list,
                                                      const ReactionModel& model, const DiffusionCoefficient& D,
                                                      const FlowTolerances& tol) {
    const double norm_f1 = derivative_sup_norms(model, std::max(field_norms(u0).linf, 1.0)).norm_f1;
    for (double dt : dt_list) {
        if (!(dt >= 0.0) || !std::isfinite(dt)) throw InvalidArgument("leading-term dt must be finite and >= 0");
        if (dt * model.k * norm_f1 >= 0.1)
            throw InvalidArgument("dt = " + std::to_string(dt) + " is outside the asymptotic regime (dt k |f'| >= 0.1)");
    }
    const GridField bracket = lie_bracket_field(model, D, u0);
    std::vector<LeadingTermRow> rows;
    rows.reserve(dt_list.size());
    for (double dt : dt_list) {
        if (dt == 0.0) {
            rows.push_back({0.0, 0.0});
            continue;
        }
        const GridField exact = coupled_flow(u0, dt, model, D, tol);
        const GridField lie = split_step(u0, dt, SchemeId::L1, model, D, tol);
        const GridField remainder = linear_combination(1.0, difference(exact, lie), 0.5 * dt * dt, bracket);
        rows.push_back({dt, field_norms(remainder).l2});
    }
    return rows;
}

/// Location where u crosses `level`, by linear interpolation between the bracketing nodes.
inline double front_position(const GridField& u, double level) {
    const Grid& g = u.grid();
    std::size_t crossings = 0;
    double position = 0.0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const bool above_here = u[i] >= level;
        const bool above_next = u[i + 1] >= level;
        if (above_here == above_next) continue;
        ++crossings;
        const double w = (level - u[i]) / (u[i + 1] - u[i]);
        position = g.x(i) + w * g.dx();
    }
    if (crossings == 0) throw InvalidArgument("field never crosses level " + std::to_string(level));
    if (crossings > 1)
        throw InvalidArgument("field crosses level " + std::to_string(level) + " " + std::to_string(crossings) +
                              " times");
    return position;
}

/// Least-squares slope of front position against time.
inline double wave_speed_estimate(const std::vector<std::pair<double, GridField>>& snapshots, double level = 0.5) {
    if (snapshots.size() < 2) throw InsufficientPoints("wave speed needs at least 2 snapshots");
    double st = 0.0, sx = 0.0;
    std::vector<double> xs;
    xs.reserve(snapshots.size());
    for (const auto& [t, u] : snapshots) {
        xs.push_back(front_position(u, level));
        st += t;
        sx += xs.back();
    }
    const double n = static_cast<double>(snapshots.size());
    const double tm = st / n, xm = sx / n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        const double dt = snapshots[i].first - tm;
        num += dt * (xs[i] - xm);
        den += dt * dt;
    }
    if (!(den > 0.0)) throw InsufficientPoints("wave speed needs snapshots at distinct times");
    return num / den;
}

}  // namespace splitlab
