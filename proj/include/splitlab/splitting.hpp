#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "splitlab/error.hpp"
#include "splitlab/flows.hpp"
#include "splitlab/grid.hpp"
#include "splitlab/model.hpp"

namespace splitlab {

/// L1 = X^t Y^t, L2 = Y^t X^t, S1 = X^{t/2} Y^t X^{t/2}, S2 = Y^{t/2} X^t Y^{t/2}
/// (compositions read right to left: the rightmost flow acts first).
enum class SchemeId { L1, L2, S1, S2 };

inline constexpr std::array<SchemeId, 4> kAllSchemes{SchemeId::L1, SchemeId::L2, SchemeId::S1, SchemeId::S2};

inline std::string_view to_string(SchemeId s) noexcept {
    switch (s) {
        case SchemeId::L1: return "L1";
        case SchemeId::L2: return "L2";
        case SchemeId::S1: return "S1";
        case SchemeId::S2: return "S2";
    }
    return "?";
}

inline SchemeId parse_scheme(std::string_view tag) {
    for (SchemeId s : kAllSchemes)
        if (to_string(s) == tag) return s;
    throw InvalidArgument("unknown splitting scheme '" + std::string(tag) + "'");
}

inline bool is_lie(SchemeId s) noexcept { return s == SchemeId::L1 || s == SchemeId::L2; }

enum class SubFlow { Diffusion, Reaction };

/// Debug hook called before each sub-flow with its kind and duration.
using SubFlowTracer = std::function<void(SubFlow, double)>;

namespace detail {

struct SubFlowRunner {
    const ReactionModel& model;
    const DiffusionCoefficient& D;
    const FlowTolerances& tol;
    const SubFlowTracer& tracer;

    GridField diffuse(const GridField& u, double t) const {
        if (tracer) tracer(SubFlow::Diffusion, t);
        return diffusion_flow(u, t, D, tol);
    }

    GridField react(const GridField& u, double t, const char* stage) const {
        if (tracer) tracer(SubFlow::Reaction, t);
        try {
            return reaction_flow(u, t, model, tol);
        } catch (const NonConvergence& e) {
            throw NonConvergence(std::string(stage) + ": " + e.what());
        }
    }
};

}  // namespace detail

/// One splitting step of size dt.
inline GridField split_step(const GridField& u0, double dt, SchemeId scheme, const ReactionModel& model,
                            const DiffusionCoefficient& D, const FlowTolerances& tol = {},
                            const SubFlowTracer& tracer = {}) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) throw InvalidArgument("splitting step must be finite and >= 0");
    if (dt == 0.0) return u0;
    const detail::SubFlowRunner run{model, D, tol, tracer};
    switch (scheme) {
        case SchemeId::L1: return run.diffuse(run.react(u0, dt, "L1 reaction stage"), dt);
        case SchemeId::L2: return run.react(run.diffuse(u0, dt), dt, "L2 reaction stage");
        case SchemeId::S1: {
            const GridField half = run.diffuse(u0, 0.5 * dt);
            return run.diffuse(run.react(half, dt, "S1 reaction stage"), 0.5 * dt);
        }
        case SchemeId::S2: {
            const GridField first = run.react(u0, 0.5 * dt, "S2 first reaction stage");
            return run.react(run.diffuse(first, dt), 0.5 * dt, "S2 second reaction stage");
        }
    }
    throw InvalidArgument("unknown splitting scheme");
}

/// Number of steps t_final/dt, rejecting anything that is not an integer to a few ulps.
inline std::size_t step_count(double t_final, double dt) {
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw InvalidArgument("t_final must be finite and >= 0");
    if (t_final == 0.0) return 0;
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be finite and > 0");
    const double ratio = t_final / dt;
    const double n = std::round(ratio);
    const double ulp = std::nextafter(std::max(n, 1.0), std::numeric_limits<double>::infinity()) - std::max(n, 1.0);
    if (n < 1.0 || std::abs(ratio - n) > 4.0 * ulp)
        throw InvalidArgument("t_final / dt = " + std::to_string(ratio) + " is not an integer step count");
    return static_cast<std::size_t>(n);
}

/// Observer receives (step index starting at 1, time, field) after each step.
using StepObserver = std::function<void(std::size_t, double, const GridField&)>;

inline GridField evolve(const GridField& u0, double t_final, double dt, SchemeId scheme, const ReactionModel& model,
                        const DiffusionCoefficient& D, const FlowTolerances& tol = {},
                        const StepObserver& observer = {}) {
    const std::size_t n = step_count(t_final, dt);
    GridField u = u0;
    for (std::size_t s = 1; s <= n; ++s) {
        u = split_step(u, dt, scheme, model, D, tol);
        if (observer) observer(s, static_cast<double>(s) * dt, u);
    }
    return u;
}

}  // namespace splitlab
