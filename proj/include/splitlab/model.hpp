#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "splitlab/error.hpp"

namespace splitlab {

/// Scalar nonlinearity f and its first four derivatives. The flows integrate
/// du/dt = k * f(u); the derivative callbacks are those of the unscaled f.
struct ReactionModel {
    using Fn = std::function<double(double)>;

    double k = 1.0;
    Fn f;
    Fn f1;
    Fn f2;
    Fn f3;
    Fn f4;
    std::string name = "custom";

    /// Derivative of order n in [0, 4].
    double derivative(int n, double u) const {
        switch (n) {
            case 0: return f(u);
            case 1: return f1(u);
            case 2: return f2(u);
            case 3: return f3(u);
            case 4: return f4(u);
            default: throw InvalidArgument("derivative order must be in [0, 4]");
        }
    }

    void validate() const {
        if (!(k >= 0.0) || !std::isfinite(k)) throw InvalidArgument("reaction rate k must be finite and >= 0");
        if (!f || !f1 || !f2 || !f3 || !f4) throw InvalidArgument("reaction model is missing a derivative");
    }
};

/// f(u) = lambda * u. Commutes with diffusion (f'' = 0).
inline ReactionModel linear_model(double lambda, double k = 1.0) {
    ReactionModel m;
    m.k = k;
    m.f = [lambda](double u) { return lambda * u; };
    m.f1 = [lambda](double) { return lambda; };
    m.f2 = [](double) { return 0.0; };
    m.f3 = [](double) { return 0.0; };
    m.f4 = [](double) { return 0.0; };
    m.name = "linear";
    return m;
}

/// f = 0: the reaction sub-flow is the identity.
inline ReactionModel zero_model() {
    ReactionModel m = linear_model(0.0, 0.0);
    m.name = "zero";
    return m;
}

/// Accuracy contract for one sub-flow integration.
struct FlowTolerances {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_substeps = 200000;

    static FlowTolerances uniform(double tol) { return {tol, tol, 200000}; }

    void validate() const {
        if (!(abs_tol > 0.0 && abs_tol < 1.0)) throw InvalidArgument("abs_tol must lie in (0, 1)");
        if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("rel_tol must lie in (0, 1)");
        if (max_substeps <= 0) throw InvalidArgument("max_substeps must be positive");
    }
};

class DiffusionCoefficient {
public:
    explicit DiffusionCoefficient(double D) : D_(D) {
        if (!(D > 0.0) || !std::isfinite(D)) throw InvalidArgument("diffusion coefficient must be finite and > 0");
    }
    double value() const noexcept { return D_; }

private:
    double D_;
};

}  // namespace splitlab
