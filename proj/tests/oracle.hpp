#pragma once

// 100-digit reference arithmetic for checking the double-double code.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "fpr/ext_real.hpp"

namespace oracle {

using big = boost::multiprecision::cpp_bin_float_100;

inline big from(const fpr::ExtReal& v) { return big(v.hi) + big(v.lo); }
inline big sqrt_of(int v) { return boost::multiprecision::sqrt(big(v)); }
inline big pi() { return boost::math::constants::pi<big>(); }
inline big golden() { return (1 + sqrt_of(5)) / 2; }
inline big frac(const big& v) { return v - boost::multiprecision::floor(v); }
inline double to_d(const big& v) { return static_cast<double>(v); }

/// Least t >= 1 with frac(alpha t) <= eps, by plain iteration.
inline std::int64_t one_sided(const big& alpha, double eps, std::int64_t limit) {
    const big e(eps);
    for (std::int64_t t = 1; t <= limit; ++t)
        if (frac(alpha * t) <= e) return t;
    return -1;
}

/// Least T for which the points pts[0..T) leave no circular gap wider than
/// 2 eps. Gap lengths are stored per left endpoint and in a multiset.
inline std::int64_t covering(const std::vector<double>& pts, double eps) {
    std::set<double> s;
    std::map<double, double> gap_of;  // left endpoint -> gap to its successor
    std::multiset<double> gaps;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double p = pts[i];
        if (s.count(p)) continue;
        if (s.empty()) {
            gap_of[p] = 1.0;
            gaps.insert(1.0);
        } else {
            auto hi = s.upper_bound(p);
            const double left = hi == s.begin() ? *s.rbegin() : *std::prev(hi);
            const double right = hi == s.end() ? *s.begin() : *hi;
            gaps.erase(gaps.find(gap_of[left]));
            double a = p - left, b = right - p;
            if (a < 0.0) a += 1.0;
            if (b <= 0.0) b += 1.0;
            gap_of[left] = a;
            gap_of[p] = b;
            gaps.insert(a);
            gaps.insert(b);
        }
        s.insert(p);
        if (*gaps.rbegin() <= 2.0 * eps) return static_cast<std::int64_t>(i + 1);
    }
    return -1;
}

}  // namespace oracle
