#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "splitlab/analysis/bounds.hpp"
#include "splitlab/analysis/diagnostics.hpp"
#include "splitlab/flows.hpp"
#include "splitlab/kpp.hpp"
#include "splitlab/splitting.hpp"
#include "support.hpp"

using namespace splitlab;
using splitlab::testing::max_abs_diff;

namespace {

std::vector<std::pair<SubFlow, double>> trace(SchemeId s, double dt) {
    std::vector<std::pair<SubFlow, double>> calls;
    const GridField u0 = kpp_wave_profile(build_grid(-20, 20, 401), {1.0, 1.0, 0.0});
    (void)split_step(u0, dt, s, zeldovich_model(1.0), DiffusionCoefficient(1.0), {},
                     [&](SubFlow f, double t) { calls.emplace_back(f, t); });
    return calls;
}

using Calls = std::vector<std::pair<SubFlow, double>>;
constexpr SubFlow X = SubFlow::Diffusion;
constexpr SubFlow Y = SubFlow::Reaction;

}  // namespace

TEST(SchemeId, RoundTripsThroughText) {
    for (SchemeId s : kAllSchemes) EXPECT_EQ(parse_scheme(to_string(s)), s);
    EXPECT_THROW(parse_scheme("S3"), InvalidArgument);
    EXPECT_TRUE(is_lie(SchemeId::L2));
    EXPECT_FALSE(is_lie(SchemeId::S1));
}

TEST(SplitStep, SubFlowOrder) {
    EXPECT_EQ(trace(SchemeId::L1, 0.2), (Calls{{Y, 0.2}, {X, 0.2}}));
    EXPECT_EQ(trace(SchemeId::L2, 0.2), (Calls{{X, 0.2}, {Y, 0.2}}));
    EXPECT_EQ(trace(SchemeId::S1, 0.2), (Calls{{X, 0.1}, {Y, 0.2}, {X, 0.1}}));
    EXPECT_EQ(trace(SchemeId::S2, 0.2), (Calls{{Y, 0.1}, {X, 0.2}, {Y, 0.1}}));
}

TEST(SplitStep, ZeroStepIsIdentity) {
    const GridField u0 = kpp_wave_profile(build_grid(-20, 20, 401), {1.0, 1.0, 0.0});
    for (SchemeId s : kAllSchemes)
        EXPECT_EQ(max_abs_diff(split_step(u0, 0.0, s, zeldovich_model(1.0), DiffusionCoefficient(1.0)), u0), 0.0);
}

TEST(SplitStep, WithoutReactionEqualsDiffusion) {
    splitlab::testing::FieldGenerator gen(21);
    const GridField u0 = gen.smooth(build_grid(-30, 30, 601));
    const DiffusionCoefficient D(1.3);
    const FlowTolerances tol;
    const GridField ref = diffusion_flow(u0, 0.4, D, tol);
    for (SchemeId s : kAllSchemes)
        EXPECT_LE(max_abs_diff(split_step(u0, 0.4, s, zero_model(), D, tol), ref), 2 * tol.abs_tol) << to_string(s);
}

TEST(SplitStep, LinearReactionCommutes) {
    splitlab::testing::FieldGenerator gen(22);
    const GridField u0 = gen.smooth_in(build_grid(-30, 30, 601), 0.0, 1.0);
    const DiffusionCoefficient D(0.9);
    const ReactionModel m = linear_model(-0.7, 2.0);
    const FlowTolerances tol;
    const GridField ref = coupled_flow(u0, 0.5, m, D, tol);
    for (SchemeId s : kAllSchemes)
        EXPECT_LE(max_abs_diff(split_step(u0, 0.5, s, m, D, tol), ref), 10 * tol.abs_tol) << to_string(s);
}

TEST(SplitStep, ConstantFieldReducesToReaction) {
    const GridField u0 = GridField::constant(build_grid(-5, 5, 81), 0.3);
    const ReactionModel m = zeldovich_model(3.0);
    const FlowTolerances tol;
    const GridField ref = reaction_flow(u0, 0.8, m, tol);
    for (SchemeId s : kAllSchemes)
        EXPECT_LE(max_abs_diff(split_step(u0, 0.8, s, m, DiffusionCoefficient(1.0), tol), ref), 10 * tol.abs_tol);
}

TEST(SplitStep, SmallStepLieErrorIsPositiveAndBounded) {
    const Grid g = build_grid(-70, 70, 5001);
    const ReactionModel m = zeldovich_model(10.0);
    const DiffusionCoefficient D(0.1);
    const GridField u0 = kpp_wave_profile(g, {10.0, 0.1, -14.0});
    const double dt = 1e-3;
    const GridField ref = coupled_flow(u0, dt, m, D, FlowTolerances::uniform(1e-12));
    const double err = max_abs_diff(ref, split_step(u0, dt, SchemeId::L1, m, D));
    EXPECT_GT(err, 0.0);
    EXPECT_LE(err, evaluate_bounds(SchemeId::L1, dt, m, D, u0).classical);
}

TEST(SplitStep, FailureNamesTheStage) {
    FlowTolerances tol;
    tol.max_substeps = 1;
    const GridField u0(build_grid(0, 1, 3), {0.5, 0.5, 0.5});
    try {
        (void)split_step(u0, 40.0, SchemeId::S2, zeldovich_model(1.0), DiffusionCoefficient(1.0), tol);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_NE(std::string(e.what()).find("S2 first reaction stage"), std::string::npos) << e.what();
    }
}

TEST(StepCount, AcceptsNearIntegersOnly) {
    EXPECT_EQ(step_count(45.0, 0.05), 900u);
    EXPECT_EQ(step_count(1.0, 0.1), 10u);
    EXPECT_EQ(step_count(0.0, 0.3), 0u);
    EXPECT_THROW(step_count(1.0, 0.3), InvalidArgument);
    EXPECT_THROW(step_count(1.0, 0.0), InvalidArgument);
    EXPECT_THROW(step_count(-1.0, 0.1), InvalidArgument);
}

TEST(Evolve, ZeroHorizonReturnsInput) {
    const GridField u0 = kpp_wave_profile(build_grid(-20, 20, 401), {1.0, 1.0, 0.0});
    EXPECT_EQ(max_abs_diff(evolve(u0, 0.0, 0.1, SchemeId::S1, zeldovich_model(1.0), DiffusionCoefficient(1.0)), u0),
              0.0);
}

TEST(Evolve, HeatSemigroupWithoutReaction) {
    splitlab::testing::FieldGenerator gen(31);
    const GridField u0 = gen.smooth(build_grid(-30, 30, 601));
    const DiffusionCoefficient D(1.0);
    const FlowTolerances tol;
    const GridField many = evolve(u0, 1.0, 0.1, SchemeId::L2, zero_model(), D, tol);
    EXPECT_LE(max_abs_diff(many, diffusion_flow(u0, 1.0, D, tol)), 20 * tol.abs_tol);
}

TEST(Evolve, ObserverSeesEveryStep) {
    const GridField u0 = kpp_wave_profile(build_grid(-20, 20, 201), {1.0, 1.0, 0.0});
    std::vector<std::pair<std::size_t, double>> seen;
    (void)evolve(u0, 0.5, 0.1, SchemeId::S2, zeldovich_model(1.0), DiffusionCoefficient(1.0), {},
                 [&](std::size_t s, double t, const GridField&) { seen.emplace_back(s, t); });
    ASSERT_EQ(seen.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(seen[i].first, i + 1);
        EXPECT_DOUBLE_EQ(seen[i].second, 0.1 * static_cast<double>(i + 1));
    }
}

TEST(Evolve, StrangFrontTravelsAtWaveSpeed) {
    const Grid g = build_grid(-70, 70, 5001);
    const GridField u0 = kpp_wave_profile(g, {1.0, 1.0, -14.0});
    const GridField u = evolve(u0, 45.0, 0.05, SchemeId::S2, zeldovich_model(1.0), DiffusionCoefficient(1.0));
    const double shift = front_position(u, 0.5) - front_position(u0, 0.5);
    EXPECT_NEAR(shift, 45.0 / std::sqrt(2.0), 0.005 * 45.0 / std::sqrt(2.0));
}
