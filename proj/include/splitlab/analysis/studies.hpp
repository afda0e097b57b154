#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "splitlab/analysis/bounds.hpp"
#include "splitlab/detail/parallel.hpp"
#include "splitlab/error.hpp"
#include "splitlab/flows.hpp"
#include "splitlab/grid.hpp"
#include "splitlab/splitting.hpp"

namespace splitlab {

struct StudyRow {
    double dt = 0.0;
    double err_l2 = 0.0;
    double err_linf = 0.0;
    BoundSet bounds;
    bool valid = true;
    std::string status = "ok";
};

struct SlopeFit {
    double window_lo;
    double window_hi;
    double slope;
};

struct ErrorStudyReport {
    SchemeId scheme = SchemeId::L1;
    std::vector<StudyRow> rows;  ///< sorted by dt ascending
    double t_eval = std::numeric_limits<double>::quiet_NaN();  ///< global studies only
    std::vector<SlopeFit> fitted_slopes;
};

struct StudyOptions {
    unsigned threads = 1;
    /// Fit the default asymptotic (dt < 1/(2k)) and reduced (dt > 2/k) windows.
    bool default_windows = true;
};

/// Least-squares slope of log(err_l2) against log(dt) over valid rows with dt in [lo, hi].
inline double fit_slope(const ErrorStudyReport& report, std::pair<double, double> window) {
    const auto [lo, hi] = window;
    const double slack = 1e-9;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const StudyRow& row : report.rows) {
        if (!row.valid || !(row.err_l2 > 0.0)) continue;
        if (row.dt < lo * (1.0 - slack) || row.dt > hi * (1.0 + slack)) continue;
        const double x = std::log(row.dt);
        const double y = std::log(row.err_l2);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 3)
        throw InsufficientPoints("slope fit over [" + std::to_string(lo) + ", " + std::to_string(hi) + "] has " +
                                 std::to_string(n) + " valid rows, need 3");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) throw InsufficientPoints("slope fit window has a single distinct dt");
    return (dn * sxy - sx * sy) / denom;
}

namespace detail {

inline std::vector<double> sorted_steps(std::vector<double> dts) {
    if (dts.empty()) throw InvalidArgument("dt list must not be empty");
    for (double dt : dts)
        if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt values must be finite and > 0");
    std::sort(dts.begin(), dts.end());
    return dts;
}

inline void require_reference_dominates(const FlowTolerances& split, const FlowTolerances& ref) {
    if (ref.abs_tol > split.abs_tol / 100.0 || ref.rel_tol > split.rel_tol / 100.0)
        throw InvalidArgument("reference tolerance must be at most 1/100 of the splitting tolerance");
}

inline void fill_row_errors(StudyRow& row, const GridField& reference, const GridField& approx) {
    const FieldNorms n = field_norms(difference(reference, approx));
    row.err_l2 = n.l2;
    row.err_linf = n.linf;
}

inline void mark_failed(StudyRow& row, const std::string& what) {
    row.valid = false;
    row.err_l2 = std::numeric_limits<double>::quiet_NaN();
    row.err_linf = std::numeric_limits<double>::quiet_NaN();
    row.status = "failed: " + what;
}

/// Default windows split at dt* = 1/k.
inline void attach_default_slopes(ErrorStudyReport& report, double k) {
    if (report.rows.empty() || !(k > 0.0)) return;
    const double dt_star = 1.0 / k;
    const double lo = report.rows.front().dt;
    const double hi = report.rows.back().dt;
    const std::pair<double, double> windows[] = {{lo, 0.5 * dt_star * (1.0 - 1e-9)},
                                                 {2.0 * dt_star * (1.0 + 1e-9), hi}};
    for (const auto& w : windows) {
        if (w.first > w.second) continue;
        try {
            report.fitted_slopes.push_back({w.first, w.second, fit_slope(report, w)});
        } catch (const InsufficientPoints&) {
        }
    }
}

}  // namespace detail

/// Local errors |T^dt u0 - scheme^dt u0| for every scheme and dt.
inline std::vector<ErrorStudyReport> local_error_study(const GridField& u0, std::vector<double> dt_list,
                                                       const std::vector<SchemeId>& schemes,
                                                       const ReactionModel& model, const DiffusionCoefficient& D,
                                                       const FlowTolerances& tol_split, const FlowTolerances& tol_ref,
                                                       const StudyOptions& options = {}) {
    tol_split.validate();
    tol_ref.validate();
    detail::require_reference_dominates(tol_split, tol_ref);
    if (schemes.empty()) throw InvalidArgument("at least one scheme is required");
    const std::vector<double> dts = detail::sorted_steps(std::move(dt_list));
    const BoundInputs inputs = bound_inputs(model, D, u0);

    std::vector<ErrorStudyReport> reports(schemes.size());
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        reports[s].scheme = schemes[s];
        reports[s].rows.resize(dts.size());
    }

    detail::parallel_for(dts.size(), options.threads, [&](std::size_t i) {
        const double dt = dts[i];
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            StudyRow& row = reports[s].rows[i];
            row.dt = dt;
            row.bounds = evaluate_bounds(schemes[s], dt, inputs);
        }
        GridField reference = u0;
        try {
            reference = coupled_flow(u0, dt, model, D, tol_ref);
        } catch (const SolverFailure& e) {
            for (auto& r : reports) detail::mark_failed(r.rows[i], std::string("reference: ") + e.what());
            return;
        }
        for (std::size_t s = 0; s < schemes.size(); ++s) {
            StudyRow& row = reports[s].rows[i];
            try {
                detail::fill_row_errors(row, reference, split_step(u0, dt, schemes[s], model, D, tol_split));
            } catch (const SolverFailure& e) {
                detail::mark_failed(row, e.what());
            }
        }
    });

    if (options.default_windows)
        for (auto& r : reports) detail::attach_default_slopes(r, model.k);
    return reports;
}

/// Global errors |T^t_final u0 - (scheme^dt)^n u0| with n = t_final / dt.
inline ErrorStudyReport global_error_study(const GridField& u0, std::vector<double> dt_list, SchemeId scheme,
                                           double t_final, const ReactionModel& model, const DiffusionCoefficient& D,
                                           const FlowTolerances& tol_split, const FlowTolerances& tol_ref,
                                           const StudyOptions& options = {}) {
    tol_split.validate();
    tol_ref.validate();
    detail::require_reference_dominates(tol_split, tol_ref);
    const std::vector<double> dts = detail::sorted_steps(std::move(dt_list));
    for (double dt : dts) (void)step_count(t_final, dt);

    ErrorStudyReport report;
    report.scheme = scheme;
    report.t_eval = t_final;
    report.rows.resize(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) report.rows[i].dt = dts[i];

    GridField reference = u0;
    try {
        reference = coupled_flow(u0, t_final, model, D, tol_ref);
    } catch (const SolverFailure& e) {
        for (auto& row : report.rows) detail::mark_failed(row, std::string("reference: ") + e.what());
        return report;
    }

    detail::parallel_for(dts.size(), options.threads, [&](std::size_t i) {
        StudyRow& row = report.rows[i];
        try {
            detail::fill_row_errors(row, reference, evolve(u0, t_final, row.dt, scheme, model, D, tol_split));
        } catch (const SolverFailure& e) {
            detail::mark_failed(row, e.what());
        }
    });

    if (options.default_windows) detail::attach_default_slopes(report, model.k);
    return report;
}

}  // namespace splitlab
