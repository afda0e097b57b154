#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "splitlab/analysis/studies.hpp"
#include "splitlab/kpp.hpp"
#include "support.hpp"

using namespace splitlab;

namespace {

ErrorStudyReport synthetic(const std::vector<double>& dts, double (*err)(double)) {
    ErrorStudyReport r;
    for (double dt : dts) {
        StudyRow row;
        row.dt = dt;
        row.err_l2 = err(dt);
        row.err_linf = row.err_l2;
        r.rows.push_back(row);
    }
    return r;
}

std::vector<double> log_steps(double lo, int per_decade, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
    return out;
}

const FlowTolerances kSplit = FlowTolerances::uniform(1e-10);
const FlowTolerances kRef = FlowTolerances::uniform(1e-12);

/// Shared k = 10, kD = 1 study on the reference grid; dt from 1e-4 to 10^0.25.
const std::vector<ErrorStudyReport>& stiff_study() {
    static const std::vector<ErrorStudyReport> reports = [] {
        const Grid g = build_grid(-70, 70, 5001);
        const WaveParameters p = WaveParameters::unit_product(10.0);
        return local_error_study(kpp_wave_profile(g, p), log_steps(1e-4, 4, 18),
                                 std::vector<SchemeId>(kAllSchemes.begin(), kAllSchemes.end()), zeldovich_model(10.0),
                                 DiffusionCoefficient(p.D), kSplit, kRef);
    }();
    return reports;
}

const ErrorStudyReport& report_for(SchemeId s) {
    for (const auto& r : stiff_study())
        if (r.scheme == s) return r;
    throw std::logic_error("scheme missing");
}

}  // namespace

TEST(FitSlope, ExactPowerLaw) {
    const ErrorStudyReport r = synthetic(log_steps(1e-4, 3, 10), [](double dt) { return 7.0 * dt * dt; });
    EXPECT_NEAR(fit_slope(r, {1e-4, 1.0}), 2.0, 1e-12);
}

TEST(FitSlope, DominantPowerLawWithNoise) {
    static std::mt19937_64 rng(99);
    const ErrorStudyReport r = synthetic(log_steps(1e-2, 4, 9), [](double dt) {
        return dt * dt * dt + 1e-12 * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    });
    EXPECT_NEAR(fit_slope(r, {1e-2, 1.0}), 3.0, 0.01);
}

TEST(FitSlope, WindowSelectsRows) {
    ErrorStudyReport r = synthetic(log_steps(1e-3, 2, 7), [](double dt) { return dt < 0.05 ? dt * dt : 0.05 * dt; });
    EXPECT_NEAR(fit_slope(r, {1e-3, 0.0316228}), 2.0, 1e-12);
    EXPECT_NEAR(fit_slope(r, {0.09, 1.0}), 1.0, 1e-12);
}

TEST(FitSlope, InsufficientPoints) {
    ErrorStudyReport r = synthetic({0.1, 0.2, 0.4}, [](double dt) { return dt; });
    EXPECT_THROW(fit_slope(r, {0.15, 1.0}), InsufficientPoints);
    r.rows[0].valid = false;
    EXPECT_THROW(fit_slope(r, {0.0, 1.0}), InsufficientPoints);
}

TEST(LocalStudy, ExactSplittingWithoutReaction) {
    splitlab::testing::FieldGenerator gen(17);
    const GridField u0 = gen.smooth_in(build_grid(-20, 20, 401), 0.0, 1.0);
    const auto reports = local_error_study(u0, {0.5, 0.01, 0.1}, {SchemeId::L1, SchemeId::S2}, zero_model(),
                                           DiffusionCoefficient(1.0), kSplit, kRef);
    ASSERT_EQ(reports.size(), 2u);
    for (const auto& r : reports) {
        ASSERT_EQ(r.rows.size(), 3u);
        EXPECT_LT(r.rows[0].dt, r.rows[1].dt);
        EXPECT_LT(r.rows[1].dt, r.rows[2].dt);
        EXPECT_TRUE(std::isnan(r.t_eval));
        for (const auto& row : r.rows) {
            EXPECT_TRUE(row.valid);
            EXPECT_LE(row.err_linf, 10 * (kSplit.abs_tol + kRef.abs_tol));
            EXPECT_GE(row.err_l2, 0.0);
        }
    }
}

TEST(LocalStudy, RequiresDominantReference) {
    const GridField u0 = GridField::constant(build_grid(0, 1, 5), 0.5);
    EXPECT_THROW(local_error_study(u0, {0.1}, {SchemeId::L1}, zeldovich_model(1.0), DiffusionCoefficient(1.0), kSplit,
                                   FlowTolerances::uniform(1e-11)),
                 InvalidArgument);
    EXPECT_THROW(local_error_study(u0, {}, {SchemeId::L1}, zeldovich_model(1.0), DiffusionCoefficient(1.0), kSplit, kRef),
                 InvalidArgument);
    EXPECT_THROW(local_error_study(u0, {-0.1}, {SchemeId::L1}, zeldovich_model(1.0), DiffusionCoefficient(1.0), kSplit,
                                   kRef),
                 InvalidArgument);
}

TEST(LocalStudy, FailedReferenceMarksRowsInvalid) {
    FlowTolerances ref = kRef;
    ref.max_substeps = 1;
    const GridField u0 = kpp_wave_profile(build_grid(-20, 20, 201), {1.0, 1.0, 0.0});
    const auto reports = local_error_study(u0, {0.5, 5.0}, {SchemeId::L2}, zeldovich_model(1.0),
                                           DiffusionCoefficient(1.0), kSplit, ref);
    for (const auto& row : reports[0].rows) {
        EXPECT_FALSE(row.valid);
        EXPECT_NE(row.status.find("reference"), std::string::npos);
    }
    EXPECT_TRUE(reports[0].fitted_slopes.empty());
}

TEST(LocalStudy, ParallelRowsMatchSerial) {
    const GridField u0 = kpp_wave_profile(build_grid(-20, 20, 401), {1.0, 1.0, 0.0});
    const std::vector<double> dts{0.02, 0.05, 0.1, 0.2};
    StudyOptions serial, parallel;
    parallel.threads = 3;
    const auto a = local_error_study(u0, dts, {SchemeId::S1}, zeldovich_model(1.0), DiffusionCoefficient(1.0), kSplit,
                                     kRef, serial);
    const auto b = local_error_study(u0, dts, {SchemeId::S1}, zeldovich_model(1.0), DiffusionCoefficient(1.0), kSplit,
                                     kRef, parallel);
    for (std::size_t i = 0; i < dts.size(); ++i) {
        EXPECT_EQ(a[0].rows[i].err_l2, b[0].rows[i].err_l2);
        EXPECT_EQ(a[0].rows[i].err_linf, b[0].rows[i].err_linf);
    }
}

TEST(GlobalStudy, SingleStepMatchesLocalStudy) {
    const GridField u0 = kpp_wave_profile(build_grid(-20, 20, 401), {1.0, 1.0, 0.0});
    const auto local = local_error_study(u0, {0.25}, {SchemeId::S2}, zeldovich_model(1.0), DiffusionCoefficient(1.0),
                                         kSplit, kRef);
    const ErrorStudyReport global = global_error_study(u0, {0.25}, SchemeId::S2, 0.25, zeldovich_model(1.0),
                                                       DiffusionCoefficient(1.0), kSplit, kRef);
    EXPECT_EQ(global.t_eval, 0.25);
    EXPECT_EQ(global.rows[0].err_l2, local[0].rows[0].err_l2);
    EXPECT_EQ(global.rows[0].err_linf, local[0].rows[0].err_linf);
    EXPECT_EQ(global.rows[0].bounds.effective, kNoBound);
}

TEST(GlobalStudy, RejectsNonDividingStep) {
    const GridField u0 = GridField::constant(build_grid(0, 1, 5), 0.5);
    EXPECT_THROW(global_error_study(u0, {0.3}, SchemeId::S2, 1.0, zeldovich_model(1.0), DiffusionCoefficient(1.0),
                                    kSplit, kRef),
                 InvalidArgument);
}

TEST(StiffLocalStudy, SmallStepWindowSlopeForL1) {
    const double s = fit_slope(report_for(SchemeId::L1), {1e-4, 1e-2});
    EXPECT_GE(s, 1.75);
    EXPECT_LE(s, 2.25);
}

TEST(StiffLocalStudy, AsymptoticSlopes) {
    // dt k <= 0.05
    for (SchemeId s : kAllSchemes) {
        const double slope = fit_slope(report_for(s), {1e-4, 5e-3});
        if (is_lie(s)) {
            EXPECT_GE(slope, 1.8) << to_string(s);
            EXPECT_LE(slope, 2.2) << to_string(s);
        } else {
            EXPECT_GE(slope, 2.7) << to_string(s);
            EXPECT_LE(slope, 3.3) << to_string(s);
        }
    }
}

TEST(StiffLocalStudy, OrderReductionOnset) {
    // dt in [2/k, 20/k]
    for (SchemeId s : kAllSchemes) {
        const double slope = fit_slope(report_for(s), {0.2, 2.0});
        EXPECT_LE(slope, is_lie(s) ? 1.7 : 2.7) << to_string(s);
    }
}

TEST(StiffLocalStudy, ErrorsGrowWithStep) {
    for (const auto& r : stiff_study()) {
        std::size_t increasing = 0, pairs = 0;
        for (std::size_t i = 1; i < r.rows.size(); ++i) {
            if (!r.rows[i].valid || !r.rows[i - 1].valid) continue;
            ++pairs;
            if (r.rows[i].err_l2 >= r.rows[i - 1].err_l2) ++increasing;
        }
        EXPECT_GE(static_cast<double>(increasing), 0.9 * static_cast<double>(pairs)) << to_string(r.scheme);
    }
}

TEST(StiffLocalStudy, DefaultWindowsAreReported) {
    for (const auto& r : stiff_study()) {
        ASSERT_EQ(r.fitted_slopes.size(), 2u) << to_string(r.scheme);
        EXPECT_LT(r.fitted_slopes[0].window_hi, 0.05);
        EXPECT_GT(r.fitted_slopes[1].window_lo, 0.2);
        EXPECT_LT(r.fitted_slopes[1].slope, r.fitted_slopes[0].slope);
    }
}

TEST(StiffLocalStudy, ReactionLastIsMoreAccurateAtLargeSteps) {
    const StudyRow& l1 = report_for(SchemeId::L1).rows.back();
    const StudyRow& l2 = report_for(SchemeId::L2).rows.back();
    const StudyRow& s1 = report_for(SchemeId::S1).rows.back();
    const StudyRow& s2 = report_for(SchemeId::S2).rows.back();
    EXPECT_LT(l2.err_linf, l1.err_linf);
    EXPECT_LT(s2.err_linf, s1.err_linf);
}
