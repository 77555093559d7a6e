#pragma once

// Continued fractions, approximability classification and least-region searches
// for the irrational rotation t -> frac(alpha t).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fpr/ext_real.hpp"
#include "fpr/parallel.hpp"
#include "fpr/qlattice.hpp"

namespace fpr {

struct ContinuedFraction {
    ExtReal value;
    std::vector<std::int64_t> quotients;  // a_0, a_1, ...
    bool terminated = false;               // value was rational and the expansion ended

    [[nodiscard]] int depth() const { return static_cast<int>(quotients.size()) - 1; }
};

/// Gauss-map expansion up to depth m. Stops early once the propagated error
/// bound no longer certifies the next quotient.
ContinuedFraction continued_fraction(const ExtReal& alpha, int m);

/// Convergents p_k/q_k. Stops before the recurrence overflows int64.
std::vector<std::pair<std::int64_t, std::int64_t>> convergents(const ContinuedFraction& cf);

enum class Verdict { Badly, Good, Unknown };
enum class Evidence { TagBased, BoundedQuotients };

std::string to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Unknown;
    Evidence evidence = Evidence::BoundedQuotients;
    int depth = 0;
    std::int64_t bound = 0;
    std::int64_t max_quotient = 0;
};

Classification classify(const ProjectionSpec& spec, int depth = 40, std::int64_t bound = 100);

constexpr std::int64_t kDefaultTMax = 1'000'000'000;

/// Smallest t >= 1 with frac(alpha t) in [0, eps]. Throws BudgetExceeded past t_max.
std::int64_t least_region_one_sided(const ExtReal& alpha, double eps, std::int64_t t_max = kDefaultTMax,
                                    Exec exec = Exec::Parallel);

/// Smallest T such that every grid point r0 = i*grid_step is within eps
/// (circular distance) of some frac(alpha t), 1 <= t <= T. grid_step <= 0 means eps/10.
std::int64_t least_region_covering(const ExtReal& alpha, double eps, double grid_step = 0.0,
                                   std::int64_t t_max = kDefaultTMax);

/// Badly-strategy constants per t-block axis, in physical units.
std::vector<std::int64_t> badly_constants(const ProjectionSpec& spec,
                                          const std::vector<double>& eps_list = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6},
                                          std::int64_t t_max = kDefaultTMax);

enum class Strategy { Auto, Badly, Good };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& s);

/// Region [0, size) along each t-block axis in lattice units. `constants` may be
/// passed to skip recomputing badly_constants.
Region select_region(const ProjectionSpec& spec, double eps, Strategy strategy,
                     const std::vector<std::int64_t>* constants = nullptr);

/// Distinct circular gap lengths between the sorted points frac(alpha t), t=1..N.
/// Lengths closer than `merge_tol` are reported once.
std::vector<double> three_distance_gaps(const ExtReal& alpha, std::int64_t N, double merge_tol = 1e-9);

enum class Criterion { OneSided, Covering, Computable };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

struct FillingRow {
    double eps = 0.0;
    std::vector<std::int64_t> size;
    Criterion criterion = Criterion::OneSided;
};

struct FillingTable {
    std::vector<FillingRow> rows;

    /// Header, one scientific row per epsilon, a blank line, then the exact integers.
    [[nodiscard]] std::string to_csv() const;
};

/// 3 significant digits, truncated toward zero, e.g. 1136689 -> "1.13e+06".
std::string sci3(double v);

}  // namespace fpr
