#pragma once

// Diffusion, reaction and coupled reaction-diffusion flows on a Grid.
//
//   diffusion_flow: exact exponential of the Neumann Laplacian, computed in
//                   the DCT-I eigenbasis of the mirror-ghost stencil.
//   reaction_flow:  independent scalar ODEs du/dt = k f(u), Radau IIA per node.
//   coupled_flow:   du/dt = D L u + k f(u) as one stiff system, Radau IIA with
//                   simplified Newton and block-tridiagonal solves.
//
// The two Radau integrators control the step with step doubling: the
// difference between one step of size h and two of size h/2 must stay below
// abs_tol + rel_tol*|u| node-wise, and the two-half-step value is kept.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "splitlab/detail/dct.hpp"
#include "splitlab/detail/radau.hpp"
#include "splitlab/detail/small_matrix.hpp"
#include "splitlab/error.hpp"
#include "splitlab/grid.hpp"
#include "splitlab/model.hpp"

namespace splitlab {

namespace detail {

inline void require_time(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("flow time must be finite and >= 0");
}

}  // namespace detail

/// X^t u0 for du/dt = D L u.
inline GridField diffusion_flow(const GridField& u0, double t, const DiffusionCoefficient& D,
                                const FlowTolerances& tol = {}) {
    detail::require_time(t);
    tol.validate();
    if (t == 0.0) return u0;

    const std::size_t n = u0.size();
    const double dx = u0.grid().dx();
    const detail::DctI dct(n);
    auto buf = detail::make_fftw_buffer(n);
    auto spec = detail::make_fftw_buffer(n);
    std::copy(u0.values().begin(), u0.values().end(), buf.get());
    dct.execute(buf.get(), spec.get());

    // Eigenvalue of mode m: -(4/dx^2) sin^2(pi m / (2(n-1))).
    const double scale = 1.0 / (2.0 * static_cast<double>(n - 1));
    const double rate = 4.0 * D.value() * t / (dx * dx);
    for (std::size_t m = 0; m < n; ++m) {
        const double s = std::sin(std::numbers::pi * static_cast<double>(m) / (2.0 * static_cast<double>(n - 1)));
        spec[m] *= std::exp(-rate * s * s) * scale;
    }
    dct.execute(spec.get(), buf.get());
    return GridField(u0.grid(), std::vector<double>(buf.get(), buf.get() + n));
}

namespace detail {

/// Integrate du/dt = k f(u) over [0, t] for a single value.
inline double integrate_scalar_reaction(double u, double t, const ReactionModel& model, const FlowTolerances& tol,
                                        std::ptrdiff_t node) {
    const double k = model.k;
    double done = 0.0;
    double h = t;
    int attempts = 0;
    while (done < t) {
        if (++attempts > tol.max_substeps)
            throw NonConvergence("reaction flow exhausted max_substeps", node);
        const double remaining = t - done;
        bool last = false;
        if (h >= remaining * (1.0 - 1e-12)) {
            h = remaining;
            last = true;
        }
        if (h < 1e-14 * t) throw NonConvergence("reaction flow step size underflow", node);

        const double scale = tol.abs_tol + tol.rel_tol * std::abs(u);
        const auto full = radau_scalar_step(u, h, k, model.f, model.f1, scale);
        if (!full.converged) {
            h *= 0.5;
            continue;
        }
        const auto mid = radau_scalar_step(u, 0.5 * h, k, model.f, model.f1, scale);
        if (!mid.converged) {
            h *= 0.5;
            continue;
        }
        const auto fine = radau_scalar_step(mid.value, 0.5 * h, k, model.f, model.f1,
                                            tol.abs_tol + tol.rel_tol * std::abs(mid.value));
        if (!fine.converged) {
            h *= 0.5;
            continue;
        }
        const double w = tol.abs_tol + tol.rel_tol * std::max(std::abs(u), std::abs(fine.value));
        const double err = std::abs(full.value - fine.value) / w;
        if (!std::isfinite(err)) {
            h *= 0.5;
            continue;
        }
        if (err <= 1.0) {
            u = fine.value;
            done = last ? t : done + h;
        }
        h *= next_step_factor(err);
    }
    return u;
}

}  // namespace detail

/// Y^t u0: node-wise integration of du/dt = k f(u).
inline GridField reaction_flow(const GridField& u0, double t, const ReactionModel& model,
                               const FlowTolerances& tol = {}) {
    detail::require_time(t);
    tol.validate();
    model.validate();
    if (t == 0.0 || model.k == 0.0) return u0;
    std::vector<double> out(u0.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = detail::integrate_scalar_reaction(u0[i], t, model, tol, static_cast<std::ptrdiff_t>(i));
    return GridField(u0.grid(), std::move(out));
}

namespace detail {

/// Simplified-Newton Radau IIA stepper for du/dt = D L u + k f(u).
/// The Newton matrix I - h (A kron J) is block tridiagonal with 3x3 blocks
/// when unknowns are ordered node-major; it is factored by block Thomas.
class CoupledRadau {
public:
    CoupledRadau(const ReactionModel& model, double D, double dx, std::size_t n, const FlowTolerances& tol)
        : model_(model), c_(D / (dx * dx)), dx_(dx), D_(D), n_(n), tol_(tol),
          jac_diag_(n), s_inv_(n), w_(n), lower_(n), z_(3 * n), rhs_(3 * n), stage_(n), stage_f_(3 * n),
          lap_(n) {}

    /// Jacobian diagonal at y0 (off-diagonals are the constant Laplacian couplings).
    void set_jacobian(std::span<const double> y0) {
        for (std::size_t i = 0; i < n_; ++i) jac_diag_[i] = -2.0 * c_ + model_.k * model_.f1(y0[i]);
    }

    /// Factor I - h (A kron J). Returns false if a pivot block is singular.
    bool factor(double h) {
        const Mat3& a = radau_a();
        for (std::size_t i = 0; i < n_; ++i) {
            Mat3 s;
            const double d = -h * jac_diag_[i];
            for (int r = 0; r < 3; ++r)
                for (int q = 0; q < 3; ++q) s(r, q) = (r == q ? 1.0 : 0.0) + d * a(r, q);
            if (i > 0) {
                lower_[i] = -h * coupling(i, i - 1);
                const Mat3 aw = a * w_[i - 1];
                for (int e = 0; e < 9; ++e) s.a[e] -= lower_[i] * aw.a[e];
            }
            if (!invert(s, s_inv_[i])) return false;
            if (i + 1 < n_) {
                const double up = -h * coupling(i, i + 1);
                const Mat3 ia = s_inv_[i] * a;
                for (int e = 0; e < 9; ++e) w_[i].a[e] = up * ia.a[e];
            }
        }
        return true;
    }

    /// One Radau step from y0 with the current factorization. Writes y1.
    bool step(std::span<const double> y0, double h, std::span<double> y1) {
        const Mat3& a = radau_a();
        std::fill(z_.begin(), z_.end(), 0.0);
        double prev = 0.0;
        for (int it = 0; it < kNewtonMaxIterations; ++it) {
            for (int j = 0; j < 3; ++j) {
                for (std::size_t i = 0; i < n_; ++i) stage_[i] = y0[i] + z_[3 * i + j];
                laplacian_into(stage_, dx_, D_, lap_);
                for (std::size_t i = 0; i < n_; ++i) stage_f_[3 * i + j] = lap_[i] + model_.k * model_.f(stage_[i]);
            }
            for (std::size_t i = 0; i < n_; ++i) {
                const Vec3 fz{stage_f_[3 * i], stage_f_[3 * i + 1], stage_f_[3 * i + 2]};
                const Vec3 afz = a * fz;
                for (int j = 0; j < 3; ++j) rhs_[3 * i + j] = z_[3 * i + j] - h * afz[j];
            }
            solve_in_place(rhs_);
            double inc = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                const double scale = tol_.abs_tol + tol_.rel_tol * std::abs(y0[i]);
                for (int j = 0; j < 3; ++j) {
                    z_[3 * i + j] -= rhs_[3 * i + j];
                    inc = std::max(inc, std::abs(rhs_[3 * i + j]) / scale);
                }
            }
            if (!std::isfinite(inc)) return false;
            if (inc < 0.1) {
                for (std::size_t i = 0; i < n_; ++i) y1[i] = y0[i] + z_[3 * i + 2];
                return true;
            }
            if (it > 1 && inc > prev) return false;
            prev = inc;
        }
        return false;
    }

private:
    double coupling(std::size_t row, std::size_t col) const noexcept {
        if (row == 0 || row + 1 == n_) return 2.0 * c_;
        (void)col;
        return c_;
    }

    void solve_in_place(std::vector<double>& r) const {
        const Mat3& a = radau_a();
        Vec3 prev{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < n_; ++i) {
            Vec3 v{r[3 * i], r[3 * i + 1], r[3 * i + 2]};
            if (i > 0) {
                const Vec3 ap = a * prev;
                for (int j = 0; j < 3; ++j) v[j] -= lower_[i] * ap[j];
            }
            prev = s_inv_[i] * v;
            for (int j = 0; j < 3; ++j) r[3 * i + j] = prev[j];
        }
        for (std::size_t i = n_ - 1; i-- > 0;) {
            const Vec3 next{r[3 * (i + 1)], r[3 * (i + 1) + 1], r[3 * (i + 1) + 2]};
            const Vec3 wn = w_[i] * next;
            for (int j = 0; j < 3; ++j) r[3 * i + j] -= wn[j];
        }
    }

    const ReactionModel& model_;
    double c_;
    double dx_;
    double D_;
    std::size_t n_;
    FlowTolerances tol_;
    std::vector<double> jac_diag_;
    std::vector<Mat3> s_inv_;
    std::vector<Mat3> w_;
    std::vector<double> lower_;
    std::vector<double> z_;
    std::vector<double> rhs_;
    std::vector<double> stage_;
    std::vector<double> stage_f_;
    std::vector<double> lap_;
};

}  // namespace detail

/// Quasi-exact T^t u0 for du/dt = D L u + k f(u), integrated without splitting.
inline GridField coupled_flow(const GridField& u0, double t, const ReactionModel& model,
                              const DiffusionCoefficient& D, const FlowTolerances& tol = {}) {
    detail::require_time(t);
    tol.validate();
    model.validate();
    if (t == 0.0) return u0;

    const std::size_t n = u0.size();
    detail::CoupledRadau radau(model, D.value(), u0.grid().dx(), n, tol);
    std::vector<double> y(u0.values().begin(), u0.values().end());
    std::vector<double> full(n), mid(n), fine(n);

    double done = 0.0;
    double h = model.k > 0.0 ? std::min(t, 0.05 / model.k) : t;
    int attempts = 0;
    while (done < t) {
        if (++attempts > tol.max_substeps) throw NonConvergence("coupled flow exhausted max_substeps");
        const double remaining = t - done;
        bool last = false;
        if (h >= remaining * (1.0 - 1e-12)) {
            h = remaining;
            last = true;
        }
        if (h < 1e-14 * t) throw StepSizeUnderflow("coupled flow step size fell below 1e-14 * t");

        radau.set_jacobian(y);
        const bool ok = radau.factor(h) && radau.step(y, h, full) && radau.factor(0.5 * h) &&
                        radau.step(y, 0.5 * h, mid) && radau.step(mid, 0.5 * h, fine);
        if (!ok) {
            h *= 0.5;
            continue;
        }
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = tol.abs_tol + tol.rel_tol * std::max(std::abs(y[i]), std::abs(fine[i]));
            err = std::max(err, std::abs(full[i] - fine[i]) / w);
        }
        if (!std::isfinite(err)) {
            h *= 0.5;
            continue;
        }
        if (err <= 1.0) {
            y.swap(fine);
            done = last ? t : done + h;
        }
        h *= detail::next_step_factor(err);
    }
    return GridField(u0.grid(), std::move(y));
}

}  // namespace splitlab
