#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "splitlab/error.hpp"

namespace splitlab {

/// Uniform 1D grid on [x_min, x_max] including both endpoints.
class Grid {
public:
    Grid(double x_min, double x_max, std::size_t n_points)
        : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
        if (!std::isfinite(x_min) || !std::isfinite(x_max))
            throw InvalidArgument("grid bounds must be finite");
        if (!(x_max > x_min)) throw InvalidArgument("grid requires x_max > x_min");
        if (n_points < 3) throw InvalidArgument("grid requires n_points >= 3");
        dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
    }

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_points_; }
    double dx() const noexcept { return dx_; }

    /// Node coordinate; always computed as x_min + i*dx so it is reproducible.
    double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * dx_; }

    std::vector<double> nodes() const {
        std::vector<double> xs(n_points_);
        for (std::size_t i = 0; i < n_points_; ++i) xs[i] = x(i);
        return xs;
    }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.x_min_ == b.x_min_ && a.x_max_ == b.x_max_ && a.n_points_ == b.n_points_;
    }

private:
    double x_min_;
    double x_max_;
    std::size_t n_points_;
    double dx_;
};

inline Grid build_grid(double x_min, double x_max, std::size_t n_points) {
    return Grid(x_min, x_max, n_points);
}

/// Sampled field on a grid. Immutable once built; operations return new fields.
class GridField {
public:
    GridField(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size())
            throw InvalidArgument("field length " + std::to_string(values_.size()) +
                                  " does not match grid size " + std::to_string(grid_.size()));
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!std::isfinite(values_[i]))
                throw InvalidArgument("non-finite field value at node " + std::to_string(i));
    }

    static GridField constant(const Grid& grid, double c) {
        return GridField(grid, std::vector<double>(grid.size(), c));
    }

    static GridField sample(const Grid& grid, const std::function<double(double)>& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.x(i));
        return GridField(grid, std::move(v));
    }

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Moves the storage out; the field is left empty and must not be used.
    std::vector<double> release() && { return std::move(values_); }

private:
    Grid grid_;
    std::vector<double> values_;
};

inline void require_same_grid(const GridField& a, const GridField& b) {
    if (!(a.grid() == b.grid())) throw InvalidArgument("fields live on different grids");
}

/// a - b, node-wise.
inline GridField difference(const GridField& a, const GridField& b) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return GridField(a.grid(), std::move(out));
}

/// alpha*a + beta*b, node-wise.
inline GridField linear_combination(double alpha, const GridField& a, double beta, const GridField& b) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * a[i] + beta * b[i];
    return GridField(a.grid(), std::move(out));
}

/// Mirror image about the domain centre: v_i = u_{N-1-i}.
inline GridField reflect(const GridField& u) {
    std::vector<double> out(u.values().rbegin(), u.values().rend());
    return GridField(u.grid(), std::move(out));
}

struct FieldNorms {
    double l2;
    double linf;
};

/// Trapezoidal quadrature weight of node i (1/2 at the two endpoints).
inline double trapezoid_weight(std::size_t i, std::size_t n) noexcept {
    return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

inline FieldNorms field_norms(const GridField& u) {
    const std::size_t n = u.size();
    double sum = 0.0;
    double linf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = u[i];
        sum += trapezoid_weight(i, n) * v * v;
        linf = std::max(linf, std::abs(v));
    }
    return {std::sqrt(sum * u.grid().dx()), linf};
}

/// Trapezoidal-weighted sum of the field, i.e. its discrete mass.
inline double weighted_mass(std::span<const double> u, double dx) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += trapezoid_weight(i, u.size()) * u[i];
    return sum * dx;
}

/// Centered first differences in the interior, one-sided at the two ends.
inline std::vector<double> gradient_values(const GridField& u) {
    const std::size_t n = u.size();
    const double dx = u.grid().dx();
    std::vector<double> g(n);
    g[0] = (u[1] - u[0]) / dx;
    g[n - 1] = (u[n - 1] - u[n - 2]) / dx;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (u[i + 1] - u[i - 1]) / (2.0 * dx);
    return g;
}

inline double gradient_max(const GridField& u) {
    double m = 0.0;
    for (double g : gradient_values(u)) m = std::max(m, std::abs(g));
    return m;
}

/// Sup norm of the discrete second derivative (mirror-ghost closure at the ends).
inline double second_derivative_max(const GridField& u) {
    const std::size_t n = u.size();
    const double inv_dx2 = 1.0 / (u.grid().dx() * u.grid().dx());
    double m = std::abs(2.0 * (u[1] - u[0]) * inv_dx2);
    m = std::max(m, std::abs(2.0 * (u[n - 2] - u[n - 1]) * inv_dx2));
    for (std::size_t i = 1; i + 1 < n; ++i)
        m = std::max(m, std::abs((u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_dx2));
    return m;
}

/// out = D * L u with homogeneous Neumann closure through mirror ghosts
/// (u_{-1} = u_1, u_N = u_{N-2}).
inline void laplacian_into(std::span<const double> u, double dx, double D, std::span<double> out) {
    const std::size_t n = u.size();
    const double c = D / (dx * dx);
    out[0] = 2.0 * c * (u[1] - u[0]);
    out[n - 1] = 2.0 * c * (u[n - 2] - u[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = c * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
}

inline GridField apply_laplacian(const GridField& u, double D) {
    if (!(D >= 0.0) || !std::isfinite(D)) throw InvalidArgument("diffusion coefficient must be >= 0");
    std::vector<double> out(u.size());
    laplacian_into(u.values(), u.grid().dx(), D, out);
    return GridField(u.grid(), std::move(out));
}

}  // namespace splitlab
