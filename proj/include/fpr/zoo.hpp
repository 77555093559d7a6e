#pragma once

// Built-in quasiperiodic functions: cosine sums with irrational frequencies and
// the Fibonacci photonic chain.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fpr/quasi_function.hpp"

namespace fpr::zoo {

/// cos(theta) with theta reduced modulo 2 pi in double-double first.
double cos_reduced(const ExtReal& theta);

/// Symbolic or decimal constant: sqrt2, sqrt3, sqrt5, pi, golden, an integer or a decimal.
struct NamedConstant {
    ExtReal value;
    IrrationalityTag tag = IrrationalityTag::Unknown;
    bool exact = true;  // false for decimals, which carry only their written digits
};
NamedConstant parse_constant(const std::string& text);

QuasiFunction f1();  // cos x + cos sqrt2 x
QuasiFunction f2();  // cos x + cos sqrt2 x + cos sqrt3 x
QuasiFunction f3();  // cos x + cos sqrt2 x + cos y
QuasiFunction f4();  // cos x + cos pi x
QuasiFunction fibonacci();
QuasiFunction constant_function(double value);

QuasiFunction by_id(const std::string& id);
std::vector<std::string> registry_ids();

/// Cosine sum from {"terms":[{"coef":c,"freqs":[...]}], "cell":[...]}.
QuasiFunction custom_from_json(const nlohmann::json& j, const std::string& id = "custom");

struct FibonacciChain {
    double eps_a = 4.84;
    double eps_b = 2.56;
    ExtReal lambda;
    ExtReal gamma;       // 1 / lambda
    ExtReal cell;        // sqrt(1 + lambda^2)
    ExtReal len_a;       // lambda
    ExtReal len_b;       // 1

    FibonacciChain();

    /// Letter of segment n (any integer); true for A.
    [[nodiscard]] bool letter(std::int64_t n) const;
    /// Left end of segment n; segment 0 starts at 0.
    [[nodiscard]] ExtReal start(std::int64_t n) const;
    /// Segment containing x (half-open on the right).
    [[nodiscard]] std::int64_t segment(const ExtReal& x) const;
    [[nodiscard]] double value(const ExtReal& x) const;
    /// Segment boundaries where the letter changes.
    [[nodiscard]] std::vector<double> breakpoints(double lo, double hi) const;
};

const FibonacciChain& chain();

/// First N letters by the substitution A -> AB, B -> A.
std::string fibonacci_word(std::int64_t N);
/// First N letters from the Beatty-type formula.
std::string fibonacci_word_beatty(std::int64_t N);

/// Jump locations of `func` inside [lo, hi); empty for smooth functions.
std::vector<double> discontinuities(const QuasiFunction& func, double lo, double hi);

/// Max |f(x1) - f(x2)| over random pairs whose torus images are within delta,
/// skipping pairs closer than `guard` to a breakpoint.
double consistency_check(const QuasiFunction& func, int pair_count, double delta, double guard,
                         std::uint64_t seed = 1, std::int64_t t_max = 100'000'000);

}  // namespace fpr::zoo
