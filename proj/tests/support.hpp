#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "splitlab/grid.hpp"

namespace splitlab::testing {

inline GridField field_from(const Grid& g, std::vector<double> v) { return GridField(g, std::move(v)); }

inline double max_abs_diff(const GridField& a, const GridField& b) { return field_norms(difference(a, b)).linf; }

/// Small random Fourier series: smooth, bounded, Neumann-friendly.
class FieldGenerator {
public:
    explicit FieldGenerator(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    GridField smooth(const Grid& g, double amplitude = 1.0, int modes = 6) {
        std::vector<double> a(modes), phase(modes);
        for (int m = 0; m < modes; ++m) {
            a[m] = uniform(-1.0, 1.0) / (1.0 + m);
            phase[m] = uniform(0.0, 6.283185307179586);
        }
        const double len = g.nodes().back() - g.nodes().front();
        std::vector<double> v(g.size());
        double peak = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double s = (g.x(i) - g.x(0)) / len;
            double sum = 0.0;
            for (int m = 0; m < modes; ++m) sum += a[m] * std::cos(3.141592653589793 * (m + 1) * s + phase[m]);
            v[i] = sum;
            peak = std::max(peak, std::abs(sum));
        }
        for (double& x : v) x *= amplitude / std::max(peak, 1e-300);
        return GridField(g, std::move(v));
    }

    /// Values in [lo, hi], smooth in x.
    GridField smooth_in(const Grid& g, double lo, double hi) {
        GridField s = smooth(g, 1.0);
        std::vector<double> v(s.values().begin(), s.values().end());
        for (double& x : v) x = lo + (hi - lo) * 0.5 * (x + 1.0);
        return GridField(g, std::move(v));
    }

    GridField noise(const Grid& g, double amplitude = 1.0) {
        std::vector<double> v(g.size());
        for (double& x : v) x = uniform(-amplitude, amplitude);
        return GridField(g, std::move(v));
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace splitlab::testing
