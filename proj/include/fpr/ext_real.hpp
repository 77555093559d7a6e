#pragma once

// Double-double arithmetic: an unevaluated sum hi + lo with |lo| <= ulp(hi)/2,
// roughly 32 significant decimal digits. Enough to keep frac(alpha * t) exact to
// ~1e-20 for integer t up to 1e12, which plain doubles cannot do.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace fpr {

struct ExtReal {
    double hi = 0.0;
    double lo = 0.0;

    constexpr ExtReal() = default;
    constexpr ExtReal(double h) : hi(h), lo(0.0) {}  // NOLINT: implicit from double is intended
    constexpr ExtReal(double h, double l) : hi(h), lo(l) {}

    static ExtReal from_int(std::int64_t v);
    /// Parses a decimal literal ("1.4142135623730950488016887242096980785697",
    /// "-3.5e-7", "42") keeping every digit the representation can hold.
    static ExtReal parse(std::string_view text);

    [[nodiscard]] double to_double() const { return hi + lo; }
    /// Decimal rendering with `digits` significant digits (max 34).
    [[nodiscard]] std::string to_string(int digits = 34) const;

    ExtReal& operator+=(const ExtReal& o);
    ExtReal& operator-=(const ExtReal& o);
    ExtReal& operator*=(const ExtReal& o);
    ExtReal& operator/=(const ExtReal& o);
};

namespace dd_detail {

inline ExtReal quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline ExtReal two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline ExtReal two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

}  // namespace dd_detail

inline ExtReal operator-(const ExtReal& a) { return {-a.hi, -a.lo}; }

inline ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    ExtReal s = dd_detail::two_sum(a.hi, b.hi);
    ExtReal t = dd_detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd_detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd_detail::quick_two_sum(s.hi, s.lo);
}

inline ExtReal operator-(const ExtReal& a, const ExtReal& b) { return a + (-b); }

inline ExtReal operator*(const ExtReal& a, const ExtReal& b) {
    ExtReal p = dd_detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline ExtReal operator/(const ExtReal& a, const ExtReal& b) {
    const double q1 = a.hi / b.hi;
    ExtReal r = a - b * ExtReal(q1);
    const double q2 = r.hi / b.hi;
    r -= b * ExtReal(q2);
    const double q3 = r.hi / b.hi;
    ExtReal q = dd_detail::quick_two_sum(q1, q2);
    return q + ExtReal(q3);
}

inline ExtReal& ExtReal::operator+=(const ExtReal& o) { return *this = *this + o; }
inline ExtReal& ExtReal::operator-=(const ExtReal& o) { return *this = *this - o; }
inline ExtReal& ExtReal::operator*=(const ExtReal& o) { return *this = *this * o; }
inline ExtReal& ExtReal::operator/=(const ExtReal& o) { return *this = *this / o; }

inline bool operator<(const ExtReal& a, const ExtReal& b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
inline bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
inline bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }
inline bool operator==(const ExtReal& a, const ExtReal& b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(const ExtReal& a, const ExtReal& b) { return !(a == b); }

inline ExtReal ExtReal::from_int(std::int64_t v) {
    const auto h = static_cast<double>(v);
    const auto rest = v - static_cast<std::int64_t>(h);
    return dd_detail::quick_two_sum(h, static_cast<double>(rest));
}

/// Exact product of a double-double by an integer |t| < 2^53.
inline ExtReal mul_int(const ExtReal& a, std::int64_t t) {
    const auto td = static_cast<double>(t);
    ExtReal p = dd_detail::two_prod(a.hi, td);
    p.lo = std::fma(a.lo, td, p.lo);
    return dd_detail::quick_two_sum(p.hi, p.lo);
}

inline ExtReal abs(const ExtReal& a) { return a.hi < 0.0 ? -a : a; }

inline ExtReal floor(const ExtReal& a) {
    const double fh = std::floor(a.hi);
    if (fh != a.hi) return {fh, 0.0};
    return dd_detail::quick_two_sum(fh, std::floor(a.lo));
}

/// Fractional part in [0, 1); negative inputs wrap.
inline ExtReal frac(const ExtReal& a) {
    ExtReal f = a - floor(a);
    if (f.hi >= 1.0) f -= ExtReal(1.0);
    if (f.hi < 0.0) f += ExtReal(1.0);
    return f;
}

/// frac() collapsed to a double that is guaranteed to lie in [0, 1).
inline double frac_double(const ExtReal& a) {
    const double d = frac(a).to_double();
    return d >= 1.0 ? 0.0 : d;
}

ExtReal sqrt(const ExtReal& a);

namespace constants {
const ExtReal& sqrt2();
const ExtReal& sqrt3();
const ExtReal& sqrt5();
const ExtReal& pi();
const ExtReal& two_pi();
/// (1 + sqrt5) / 2
const ExtReal& golden();
}  // namespace constants

}  // namespace fpr
