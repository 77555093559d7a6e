#pragma once

// Finite points recovery: level search inside a lattice region, interpolation
// elements rectified by a shear, tensor Lagrange evaluation, and precomputed
// node tables for global recovery.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpr/diophantine.hpp"
#include "fpr/parallel.hpp"
#include "fpr/qlattice.hpp"
#include "fpr/quasi_function.hpp"

namespace fpr {

struct FprConfig {
    std::vector<double> theta;  // element size per superspace axis, normalized units
    int k = 1;
    double eps = 0.0;           // 0 selects min_r theta_r / 16
    Strategy strategy = Strategy::Auto;
    std::int64_t t_max = kDefaultTMax;
    std::optional<Region> region;
    Exec exec = Exec::Parallel;

    [[nodiscard]] double effective_eps(const ProjectionSpec& spec) const;
    /// Throws ConfigError when the configuration does not fit `spec`.
    void validate(const ProjectionSpec& spec) const;
    [[nodiscard]] std::string key() const;
};

/// Physical element sizes (one per superspace axis) divided by the cell lengths.
std::vector<double> normalize_theta(const ProjectionSpec& spec, const std::vector<double>& physical);

struct Level {
    std::vector<std::int64_t> offset;  // lattice offset along the t-block
    std::vector<double> beta;          // frac(A offset), unwrapped next to the target on each r-axis
};

struct LevelSet {
    int k = 1;
    double eps = 0.0;
    Region region;
    std::vector<std::vector<Level>> levels;  // [r-axis][0..k]
    std::vector<std::int64_t> scanned;       // offsets examined per r-axis, serial order
};

/// Level target (j - k/2) * theta_r / k.
double level_target(int j, int k, double theta_r);

LevelSet find_levels(const ProjectionSpec& spec, const Region& region, const FprConfig& cfg);

/// Region from cfg (or select_region), doubled on LevelsNotFound until t_max.
LevelSet find_levels_auto(const ProjectionSpec& spec, const FprConfig& cfg);

/// Badly constants, memoized per projection.
const std::vector<std::int64_t>& cached_badly_constants(const ProjectionSpec& spec);

Region plan_region(const ProjectionSpec& spec, const FprConfig& cfg);

/// Sheared coordinates in block order (t..., r...): r-part is
/// frac(s_r - A wrap(s_t - tbar)).
std::vector<double> shear_transform(const TorusPoint& s, std::span<const double> tbar, const ProjectionSpec& spec);

struct InterpolationElement {
    int k = 1;
    std::vector<ExtReal> base;                    // T0 = floor of the t-block lift
    std::vector<double> tbar;                     // fractional remainder of the t-block lift
    std::vector<double> rstar;                    // sheared r-coordinates of the element origin
    std::vector<std::vector<double>> abscissae;   // block order, t axes then r axes
    std::vector<PhysPoint> nodes;                 // (k+1)^n, first axis slowest
    std::vector<TorusPoint> images;
    std::vector<double> sizes;                    // per block axis, normalized

    [[nodiscard]] std::size_t node_count() const { return nodes.size(); }
    /// Element-local sheared coordinates of a torus point (block order).
    [[nodiscard]] std::vector<double> local(const TorusPoint& q, const ProjectionSpec& spec) const;
};

InterpolationElement build_element(const ProjectionSpec& spec, const LevelSet& levels,
                                   std::span<const ExtReal> x_star, const FprConfig& cfg);

/// Barycentric Lagrange basis values at q. Throws DuplicateAbscissa.
std::vector<double> lagrange_basis(std::span<const double> abscissae, double q);

/// Tensor-product interpolation; samples ordered with the first axis slowest.
double tensor_lagrange(const std::vector<std::vector<double>>& abscissae, std::span<const double> q,
                       std::span<const double> samples);

double lagrange_eval(const InterpolationElement& element, const TorusPoint& query, std::span<const double> samples,
                     const ProjectionSpec& spec);

/// Per-point recovery with levels computed once.
class Recoverer {
public:
    Recoverer(QuasiFunction func, FprConfig cfg);

    double operator()(std::span<const ExtReal> x) const;
    double at(double x) const;
    [[nodiscard]] InterpolationElement element(std::span<const ExtReal> x) const;
    [[nodiscard]] const LevelSet& levels() const { return levels_; }
    [[nodiscard]] const FprConfig& config() const { return cfg_; }
    [[nodiscard]] const QuasiFunction& function() const { return func_; }

private:
    QuasiFunction func_;
    FprConfig cfg_;
    LevelSet levels_;
};

/// One-shot recovery; level sets are cached per (projection, config).
double recover(const QuasiFunction& func, std::span<const ExtReal> x, const FprConfig& cfg);

struct TableNode {
    std::vector<std::int64_t> offset;  // lattice part m of the node
    PhysPoint x;
    std::vector<double> r;             // achieved r-coordinates
    double value = 0.0;
};

class NodeTable {
public:
    ProjectionSpec spec;
    int k = 1;
    Region region;
    std::vector<int> cells;            // block order
    std::vector<TableNode> nodes;      // one per slot, first axis slowest

    [[nodiscard]] std::size_t node_count() const { return nodes.size(); }
    [[nodiscard]] int slots(int axis) const { return cells[axis] * k; }
    [[nodiscard]] double interpolate(const TorusPoint& q) const;
    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] std::string to_csv() const;
};

/// Cells per block axis: round(1 / width), width = k * t-spacing or theta_r.
std::vector<int> table_cells(const ProjectionSpec& spec, const FprConfig& cfg);

NodeTable build_node_table(const QuasiFunction& func, const FprConfig& cfg);

std::vector<double> recover_many(const NodeTable& table, const std::vector<PhysPoint>& xs, Exec exec = Exec::Parallel);
std::vector<double> recover_many(const NodeTable& table, const std::vector<double>& xs, Exec exec = Exec::Parallel);

}  // namespace fpr
