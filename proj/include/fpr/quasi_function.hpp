#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpr/ext_real.hpp"
#include "fpr/qlattice.hpp"

namespace fpr {

/// An exactly evaluable quasiperiodic function together with its projection.
struct QuasiFunction {
    std::string id;
    ProjectionSpec spec;
    std::function<double(std::span<const ExtReal>)> evaluate;
    /// Parent F on superspace coordinates (unnormalized), for smooth cases.
    std::function<double(std::span<const double>)> parent;
    /// Breakpoints inside [lo, hi) for piecewise-constant cases (d = 1).
    std::function<std::vector<double>(double, double)> discontinuities;
    bool smooth = true;

    double operator()(std::span<const ExtReal> x) const { return evaluate(x); }
    double at(double x) const {
        const ExtReal e(x);
        return evaluate(std::span<const ExtReal>(&e, 1));
    }
};

}  // namespace fpr
