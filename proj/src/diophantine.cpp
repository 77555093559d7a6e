#include "fpr/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fpr {

ContinuedFraction continued_fraction(const ExtReal& alpha, int m) {
    if (!(alpha.hi > 0.0)) throw ConfigError("continued_fraction: alpha must be positive");
    if (m < 0 || m > 60) throw ConfigError("continued_fraction: depth must be in [0, 60]");
    ContinuedFraction cf;
    cf.value = alpha;
    ExtReal x = alpha;
    double err = std::abs(alpha.hi) * 0x1p-100;
    for (int i = 0; i <= m; ++i) {
        const ExtReal a = floor(x);
        if (x == a && i > 0) {
            cf.quotients.push_back(static_cast<std::int64_t>(a.to_double()));
            cf.terminated = true;
            break;
        }
        if (floor(x - ExtReal(err)) != a || floor(x + ExtReal(err)) != a) {
            if (i == 0) throw PrecisionExceeded("continued_fraction: leading quotient not certified");
            break;
        }
        if (a.hi > 9.0e15) break;
        cf.quotients.push_back(static_cast<std::int64_t>(a.to_double()));
        const ExtReal f = x - a;
        if (f.hi == 0.0) {
            cf.terminated = true;
            break;
        }
        if (f.hi <= err) break;
        x = ExtReal(1.0) / f;
        const double lo = f.hi - err;
        err = err / (lo * lo) + std::abs(x.hi) * 0x1p-100;
        if (err > 0.25) break;
    }
    return cf;
}

std::vector<std::pair<std::int64_t, std::int64_t>> convergents(const ContinuedFraction& cf) {
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    __int128 p_prev = 1, q_prev = 0;
    __int128 p = 0, q = 1;
    constexpr __int128 limit = static_cast<__int128>(INT64_MAX);
    for (std::size_t k = 0; k < cf.quotients.size(); ++k) {
        const __int128 a = cf.quotients[k];
        __int128 pn, qn;
        if (k == 0) {
            pn = a;
            qn = 1;
        } else {
            pn = a * p + p_prev;
            qn = a * q + q_prev;
        }
        if (pn > limit || qn > limit) break;
        out.emplace_back(static_cast<std::int64_t>(pn), static_cast<std::int64_t>(qn));
        if (k == 0) {
            p_prev = 1;
            q_prev = 0;
        } else {
            p_prev = p;
            q_prev = q;
        }
        p = pn;
        q = qn;
    }
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Badly: return "Badly";
        case Verdict::Good: return "Good";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

Classification classify(const ProjectionSpec& spec, int depth, std::int64_t bound) {
    Classification c;
    c.depth = depth;
    c.bound = bound;
    bool all_quadratic = true;
    bool any_irrational = false;
    bool all_bounded = true;
    bool transcendental_unbounded = false;
    for (int r = 0; r < spec.codim(); ++r) {
        for (int j = 0; j < spec.d; ++j) {
            const ExtReal a = abs(spec.A[r][j]);
            const IrrationalityTag tag = spec.tags[r][j];
            if (tag == IrrationalityTag::Rational || a == ExtReal(0.0)) continue;
            ContinuedFraction cf;
            try {
                cf = continued_fraction(a, std::min(depth, 60));
            } catch (const PrecisionExceeded&) {
                continue;
            }
            if (cf.terminated) continue;
            any_irrational = true;
            if (tag != IrrationalityTag::QuadraticIrrational) all_quadratic = false;
            std::int64_t mx = 0;
            for (std::size_t i = 1; i < cf.quotients.size(); ++i) mx = std::max(mx, cf.quotients[i]);
            c.max_quotient = std::max(c.max_quotient, mx);
            if (mx > bound) {
                all_bounded = false;
                if (tag == IrrationalityTag::Transcendental) transcendental_unbounded = true;
            }
        }
    }
    if (any_irrational && all_quadratic) {
        c.verdict = Verdict::Badly;
        c.evidence = Evidence::TagBased;
    } else if (all_bounded) {
        c.verdict = Verdict::Badly;
    } else if (transcendental_unbounded) {
        c.verdict = Verdict::Good;
    } else {
        c.verdict = Verdict::Unknown;
    }
    return c;
}

std::int64_t least_region_one_sided(const ExtReal& alpha, double eps, std::int64_t t_max, Exec exec) {
    if (!(eps > 0.0 && eps < 0.5)) throw ConfigError("least_region_one_sided: eps must be in (0, 0.5)");
    const ExtReal a = frac(alpha);
    const ExtReal e(eps);
    const std::int64_t hit = first_hit(1, t_max + 1, [&](std::int64_t t) { return frac(mul_int(a, t)) <= e; }, exec);
    if (hit > t_max) throw BudgetExceeded("least_region_one_sided: no t found", t_max);
    return hit;
}

std::int64_t least_region_covering(const ExtReal& alpha, double eps, double grid_step, std::int64_t t_max) {
    if (!(eps > 0.0 && eps <= 0.5)) throw ConfigError("least_region_covering: eps must be in (0, 0.5]");
    if (grid_step <= 0.0) grid_step = eps / 10.0;
    const auto npts = static_cast<std::int64_t>(std::ceil(1.0 / grid_step - 1e-12));
    std::vector<char> covered(static_cast<std::size_t>(npts), 0);
    std::int64_t remaining = npts;
    const ExtReal a = frac(alpha);
    for (std::int64_t t = 1; t <= t_max; ++t) {
        const double p = frac_double(mul_int(a, t));
        const auto first = static_cast<std::int64_t>(std::floor((p - eps) / grid_step)) - 1;
        const auto last = static_cast<std::int64_t>(std::ceil((p + eps) / grid_step)) + 1;
        for (std::int64_t i = first; i <= last; ++i) {
            const std::int64_t idx = ((i % npts) + npts) % npts;
            if (covered[idx]) continue;
            const double r0 = static_cast<double>(idx) * grid_step;
            if (std::abs(wrap_diff(p, r0)) <= eps) {
                covered[idx] = 1;
                --remaining;
            }
        }
        if (remaining == 0) return t;
    }
    throw BudgetExceeded("least_region_covering: torus grid not covered", t_max);
}

std::vector<std::int64_t> badly_constants(const ProjectionSpec& spec, const std::vector<double>& eps_list,
                                          std::int64_t t_max) {
    std::vector<std::int64_t> out(spec.d, 1);
    for (int j = 0; j < spec.d; ++j) {
        if (spec.periodic_t_axis(j)) continue;
        const double cell = spec.cell[spec.t_block[j]].to_double();
        double worst = 0.0;
        for (double eps : eps_list) {
            std::int64_t size = 0;
            for (int r = 0; r < spec.codim(); ++r) {
                if (spec.A[r][j] == ExtReal(0.0)) continue;
                size = std::max(size, least_region_one_sided(spec.A[r][j], eps, t_max));
            }
            worst = std::max(worst, static_cast<double>(size) * cell * eps);
        }
        out[j] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(worst)));
    }
    return out;
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Auto: return "auto";
        case Strategy::Badly: return "badly";
        case Strategy::Good: return "good";
    }
    return "auto";
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "auto") return Strategy::Auto;
    if (s == "badly") return Strategy::Badly;
    if (s == "good") return Strategy::Good;
    throw ConfigError("unknown strategy: " + s);
}

Region select_region(const ProjectionSpec& spec, double eps, Strategy strategy,
                     const std::vector<std::int64_t>* constants) {
    if (!(eps > 0.0 && eps < 0.5)) throw ConfigError("select_region: eps must be in (0, 0.5)");
    if (strategy == Strategy::Auto)
        strategy = classify(spec).verdict == Verdict::Badly ? Strategy::Badly : Strategy::Good;
    const double scale = std::pow(eps, -static_cast<double>(spec.codim()));
    std::vector<std::int64_t> computed;
    if (strategy == Strategy::Badly && constants == nullptr) {
        computed = badly_constants(spec);
        constants = &computed;
    }
    Region g;
    g.lo.assign(spec.d, 0);
    g.hi.assign(spec.d, 1);
    for (int j = 0; j < spec.d; ++j) {
        if (spec.periodic_t_axis(j)) continue;
        double cells;
        if (strategy == Strategy::Badly)
            cells = static_cast<double>((*constants)[j]) * scale / spec.cell[spec.t_block[j]].to_double();
        else
            cells = 0.5 * scale;
        g.hi[j] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(cells - 1e-9)));
    }
    return g;
}

std::vector<double> three_distance_gaps(const ExtReal& alpha, std::int64_t N, double merge_tol) {
    if (N < 1) throw ConfigError("three_distance_gaps: N must be positive");
    const ExtReal a = frac(alpha);
    std::vector<double> pts(static_cast<std::size_t>(N));
    for (std::int64_t t = 1; t <= N; ++t) pts[t - 1] = frac_double(mul_int(a, t));
    std::sort(pts.begin(), pts.end());
    std::vector<double> gaps;
    gaps.reserve(pts.size());
    for (std::size_t i = 1; i < pts.size(); ++i) gaps.push_back(pts[i] - pts[i - 1]);
    gaps.push_back(1.0 - pts.back() + pts.front());
    std::sort(gaps.begin(), gaps.end());
    std::vector<double> distinct;
    for (double g : gaps)
        if (distinct.empty() || g - distinct.back() > merge_tol) distinct.push_back(g);
    return distinct;
}

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::OneSided: return "one-sided";
        case Criterion::Covering: return "covering";
        case Criterion::Computable: return "computable";
    }
    return "one-sided";
}

Criterion criterion_from_string(const std::string& s) {
    if (s == "one-sided") return Criterion::OneSided;
    if (s == "covering") return Criterion::Covering;
    if (s == "computable") return Criterion::Computable;
    throw ConfigError("unknown criterion: " + s);
}

std::string sci3(double v) {
    if (v == 0.0) return "0.00e+00";
    const bool neg = v < 0.0;
    v = std::abs(v);
    int e = static_cast<int>(std::floor(std::log10(v)));
    auto mant = static_cast<long long>(std::floor(v / std::pow(10.0, e - 2) * (1.0 + 1e-12)));
    if (mant >= 1000) {
        mant /= 10;
        ++e;
    } else if (mant < 100) {
        mant = static_cast<long long>(std::floor(v / std::pow(10.0, e - 3) * (1.0 + 1e-12)));
        --e;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld%c%c%02d", neg ? "-" : "", mant / 100, mant % 100, 'e',
                  e < 0 ? '-' : '+', std::abs(e));
    return buf;
}

std::string FillingTable::to_csv() const {
    std::ostringstream os;
    const std::size_t d = rows.empty() ? 1 : rows.front().size.size();
    auto header = [&] {
        os << "epsilon";
        for (std::size_t i = 1; i <= d; ++i) os << ",size_" << i;
        os << ",criterion\n";
    };
    header();
    for (const auto& r : rows) {
        os << sci3(r.eps);
        for (auto s : r.size) os << ',' << sci3(static_cast<double>(s));
        os << ',' << to_string(r.criterion) << '\n';
    }
    os << '\n';
    header();
    for (const auto& r : rows) {
        os << sci3(r.eps);
        for (auto s : r.size) os << ',' << s;
        os << ',' << to_string(r.criterion) << '\n';
    }
    return os.str();
}

}  // namespace fpr
