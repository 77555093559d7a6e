#pragma once

// Projection-matrix bookkeeping and the lift / modulo / combination maps.
//
// Superspace coordinates are normalized by the cell lengths at the boundary, so
// the torus is always [0,1)^n and integer lattice steps are unit steps.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpr/errors.hpp"
#include "fpr/ext_real.hpp"

namespace fpr {

enum class IrrationalityTag { Rational, QuadraticIrrational, Transcendental, Unknown };

std::string to_string(IrrationalityTag tag);
IrrationalityTag tag_from_string(const std::string& s);

using PhysPoint = std::vector<ExtReal>;        // R^d
using SuperPoint = std::vector<ExtReal>;       // R^n
using ExtMatrix = std::vector<std::vector<ExtReal>>;

struct ProjectionSpec {
    int d = 0;
    int n = 0;
    ExtMatrix P;                 // d x n
    std::vector<ExtReal> cell;   // n positive lengths
    std::vector<int> t_block;    // d superspace indices (0-based)
    ExtMatrix A;                 // (n-d) x d, normalized slopes: r = A t
    std::vector<std::vector<IrrationalityTag>> tags;  // (n-d) x d

    // Derived by finalize().
    std::vector<int> r_block;    // remaining superspace indices, ascending
    ExtMatrix Pn;                // d x n, P with column j divided by cell[j]
    ExtMatrix lattice_to_phys;   // d x d, x = lattice_to_phys * t

    /// Checks the invariants and fills the derived members. Throws ConfigError.
    void finalize();

    [[nodiscard]] int codim() const { return n - d; }
    /// True when column `j` of A is identically zero (a periodic t-direction).
    [[nodiscard]] bool periodic_t_axis(int j) const;
    /// Stable textual fingerprint, used as a cache key.
    [[nodiscard]] std::string fingerprint() const;
};

/// Normalized torus coordinates, each in [0,1).
struct TorusPoint {
    std::vector<double> coords;
};

/// Axis-aligned box of integer lattice offsets along the t-block, [lo, hi).
struct Region {
    std::vector<std::int64_t> lo;
    std::vector<std::int64_t> hi;

    [[nodiscard]] std::vector<std::int64_t> size() const;
    [[nodiscard]] std::int64_t count() const;
};

SuperPoint lift(std::span<const ExtReal> x, const ProjectionSpec& spec);

TorusPoint torus_reduce(std::span<const ExtReal> s, const ProjectionSpec& spec);

/// torus_reduce(lift(x)). Throws PrecisionExceeded when |x| is large enough that
/// the fractional parts cannot be trusted to `frac_tolerance`.
TorusPoint combine(std::span<const ExtReal> x, const ProjectionSpec& spec,
                   double frac_tolerance = 1e-14);

/// Unreduced normalized superspace coordinates P_n^T x (no modulo).
SuperPoint normalized_lift(std::span<const ExtReal> x, const ProjectionSpec& spec);

/// Physical point whose normalized t-block coordinates equal `t`.
PhysPoint physical_from_lattice(std::span<const ExtReal> t, const ProjectionSpec& spec);

/// Max over axes of the circular distance; always <= 0.5.
double wrapped_dist(const TorusPoint& u, const TorusPoint& v);

/// Signed circular difference a - b mapped into [-0.5, 0.5).
inline double wrap_diff(double a, double b) {
    double d = a - b;
    d -= std::floor(d + 0.5);
    return d;
}

double one_sided_frac(double u, double r0);

nlohmann::json spec_to_json(const ProjectionSpec& spec);
ProjectionSpec spec_from_json(const nlohmann::json& j);

}  // namespace fpr
