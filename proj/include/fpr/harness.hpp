#pragma once

// Error metrics, convergence and filling tables, and traversal-cost profiles.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpr/diophantine.hpp"
#include "fpr/fpr.hpp"

namespace fpr::harness {

/// Box [lo, hi) in physical space.
struct Interval {
    std::vector<double> lo;
    std::vector<double> hi;
};

/// Uniform grid with n points per axis, left endpoints included.
std::vector<PhysPoint> sample_grid(const Interval& box, int n);

struct ErrorReport {
    double sup_error = 0.0;
    double excluded_sup = 0.0;  // error over the samples dropped by the guard
    int samples = 0;
    int excluded = 0;
};

/// Guard band used for non-smooth functions: twice the largest physical element size.
double default_guard(const ProjectionSpec& spec, const FprConfig& cfg);

ErrorReport sup_error(const QuasiFunction& func, const std::vector<PhysPoint>& xs, const std::vector<double>& recovered,
                      double guard);

/// Per-point recovery on sample_grid(box, n). guard < 0 selects default_guard.
ErrorReport sup_error(const QuasiFunction& func, const Interval& box, const FprConfig& cfg, int n = 512,
                      double guard = -1.0);

/// Largest distance from a true breakpoint in [lo, hi) to the nearest midpoint
/// crossing of the recovered trace; +inf when a breakpoint has no crossing.
double jump_localization(const QuasiFunction& func, const std::vector<double>& xs,
                         const std::vector<double>& recovered);

struct ConvergenceRow {
    std::vector<double> theta;  // physical sizes per superspace axis
    double error = 0.0;
    std::optional<double> order;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] double mean_order() const;
};

double observed_order(double coarse_error, double fine_error);

/// `levels` rows, each halving every size of `base`.
std::vector<std::vector<double>> halving(const std::vector<double>& base, int levels);

ConvergenceTable convergence_table(const QuasiFunction& func, const std::vector<std::vector<double>>& thetas, int k,
                                   const Interval& box, int n = 512, Strategy strategy = Strategy::Auto);

/// Published sizes and errors for the built-in examples; empty when unknown.
struct ReferenceRow {
    std::vector<double> theta;
    double error;
};
std::vector<ReferenceRow> reference_rows(const std::string& id, int k);

/// Per-row comparison: error within `factor` of the reference, order within `order_tol`.
nlohmann::json compare(const ConvergenceTable& table, const std::vector<ReferenceRow>& reference, double factor,
                       double order_tol);

/// d = 1, n = 2 projection with P = (1, alpha) and unit cells.
ProjectionSpec alpha_spec(const ExtReal& alpha, IrrationalityTag tag);

FillingTable region_table(const ProjectionSpec& spec, const std::vector<double>& eps_list, Criterion criterion,
                          std::int64_t t_max = kDefaultTMax);

struct CostRow {
    double eps = 0.0;
    std::vector<std::int64_t> scanned;  // per r-axis
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Level-search cost with theta_r = 16 eps on every r-axis.
std::vector<CostRow> traversal_cost(const ProjectionSpec& spec, const std::vector<double>& eps_list, int k = 1);
std::string cost_csv(const std::vector<CostRow>& rows);

}  // namespace fpr::harness
