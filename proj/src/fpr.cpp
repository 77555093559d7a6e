#include "fpr/fpr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>

namespace fpr {

double FprConfig::effective_eps(const ProjectionSpec& spec) const {
    if (eps > 0.0) return eps;
    double h = 0.5;
    for (int r : spec.r_block) h = std::min(h, theta.at(r));
    return h / 16.0;
}

void FprConfig::validate(const ProjectionSpec& spec) const {
    if (static_cast<int>(theta.size()) != spec.n)
        throw ConfigError("element sizes: expected " + std::to_string(spec.n) + " values");
    for (double t : theta)
        if (!(t > 0.0 && t < 0.5)) throw ConfigError("element sizes must lie in (0, 0.5) cell units");
    if (k < 1 || k > 12) throw ConfigError("degree k must be in [1, 12]");
    if (t_max < 1) throw ConfigError("tmax must be positive");
    const double e = effective_eps(spec);
    double h = 0.5;
    for (int r : spec.r_block) h = std::min(h, theta[r]);
    if (!(e > 0.0) || e > h / 10.0 * (1.0 + 1e-12)) throw ConfigError("filling precision must satisfy eps < h/10");
    if (region) {
        if (static_cast<int>(region->lo.size()) != spec.d || static_cast<int>(region->hi.size()) != spec.d)
            throw ConfigError("region must have d axes");
        for (int a = 0; a < spec.d; ++a)
            if (region->hi[a] <= region->lo[a]) throw ConfigError("region must be non-empty on every axis");
    }
}

std::string FprConfig::key() const {
    std::ostringstream os;
    os.precision(17);
    for (double t : theta) os << t << ',';
    os << "k" << k << "e" << eps << "s" << to_string(strategy) << "T" << t_max;
    if (region) {
        os << "G";
        for (std::size_t a = 0; a < region->lo.size(); ++a) os << region->lo[a] << ':' << region->hi[a] << ',';
    }
    return os.str();
}

std::vector<double> normalize_theta(const ProjectionSpec& spec, const std::vector<double>& physical) {
    if (static_cast<int>(physical.size()) != spec.n)
        throw ConfigError("element sizes: expected " + std::to_string(spec.n) + " values");
    std::vector<double> out(physical.size());
    for (int j = 0; j < spec.n; ++j) out[j] = physical[j] / spec.cell[j].to_double();
    return out;
}

double level_target(int j, int k, double theta_r) {
    return (static_cast<double>(j) - 0.5 * k) * theta_r / k;
}

namespace {

struct RegionIndexer {
    std::vector<std::int64_t> lo, size, stride;
    std::int64_t count = 1;

    explicit RegionIndexer(const Region& g) : lo(g.lo), size(g.size()), stride(g.lo.size()) {
        for (int a = static_cast<int>(lo.size()) - 1; a >= 0; --a) {
            stride[a] = count;
            count *= size[a];
        }
    }
    void offset(std::int64_t idx, std::int64_t* out) const {
        for (std::size_t a = 0; a < lo.size(); ++a) out[a] = lo[a] + (idx / stride[a]) % size[a];
    }
};

// frac(sum_a A[row][a] * m[a]) in double-double, then collapsed.
double orbit_coord(const ProjectionSpec& spec, int row, const std::int64_t* m) {
    ExtReal acc;
    for (int a = 0; a < spec.d; ++a)
        if (m[a] != 0) acc += mul_int(spec.A[row][a], m[a]);
    return frac_double(acc);
}

}  // namespace

LevelSet find_levels(const ProjectionSpec& spec, const Region& region, const FprConfig& cfg) {
    cfg.validate(spec);
    if (spec.d > 8) throw ConfigError("level search: d > 8 is not supported");
    const int c = spec.codim();
    const int k = cfg.k;
    const double eps = cfg.effective_eps(spec);
    const RegionIndexer ix(region);

    LevelSet ls;
    ls.k = k;
    ls.eps = eps;
    ls.region = region;
    ls.levels.assign(c, std::vector<Level>(k + 1));
    ls.scanned.assign(c, 0);

    for (int i = 0; i < c; ++i) {
        const double theta_r = cfg.theta[spec.r_block[i]];
        for (int j = 0; j <= k; ++j) {
            const double target = level_target(j, k, theta_r);
            auto pred = [&](std::int64_t idx) {
                std::int64_t m[8];
                ix.offset(idx, m);
                for (int q = 0; q < c; ++q) {
                    const double v = orbit_coord(spec, q, m);
                    if (q == i) {
                        if (std::abs(wrap_diff(v, target)) > eps / 2) return false;
                    } else if (std::abs(wrap_diff(v, 0.0)) > eps / (2.0 * c)) {
                        return false;
                    }
                }
                return true;
            };
            const std::int64_t hit = first_hit(0, ix.count, pred, cfg.exec);
            if (hit >= ix.count) throw LevelsNotFound(i, j, region.hi[0] - 1);
            Level& lv = ls.levels[i][j];
            lv.offset.resize(spec.d);
            ix.offset(hit, lv.offset.data());
            lv.beta.resize(c);
            for (int q = 0; q < c; ++q) {
                const double v = orbit_coord(spec, q, lv.offset.data());
                lv.beta[q] = q == i ? target + wrap_diff(v, target) : wrap_diff(v, 0.0);
            }
            ls.scanned[i] = std::max(ls.scanned[i], hit + 1);
        }
    }
    return ls;
}

const std::vector<std::int64_t>& cached_badly_constants(const ProjectionSpec& spec) {
    static std::mutex mu;
    static std::map<std::string, std::vector<std::int64_t>> cache;
    const std::string key = spec.fingerprint();
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto value = badly_constants(spec);
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(key, std::move(value)).first->second;
}

Region plan_region(const ProjectionSpec& spec, const FprConfig& cfg) {
    if (cfg.region) return *cfg.region;
    Strategy s = cfg.strategy;
    if (s == Strategy::Auto) s = classify(spec).verdict == Verdict::Badly ? Strategy::Badly : Strategy::Good;
    const double eps = cfg.effective_eps(spec);
    if (s == Strategy::Badly) return select_region(spec, eps, s, &cached_badly_constants(spec));
    return select_region(spec, eps, s);
}

LevelSet find_levels_auto(const ProjectionSpec& spec, const FprConfig& cfg) {
    Region g = plan_region(spec, cfg);
    for (;;) {
        try {
            return find_levels(spec, g, cfg);
        } catch (const LevelsNotFound&) {
            if (cfg.region) throw;
            bool grown = false;
            for (int a = 0; a < spec.d; ++a) {
                if (spec.periodic_t_axis(a)) continue;
                if (g.hi[a] * 2 > cfg.t_max) continue;
                g.hi[a] *= 2;
                grown = true;
            }
            if (!grown) throw;
        }
    }
}

std::vector<double> shear_transform(const TorusPoint& s, std::span<const double> tbar, const ProjectionSpec& spec) {
    std::vector<double> out(spec.n);
    std::vector<double> dt(spec.d);
    for (int a = 0; a < spec.d; ++a) {
        out[a] = s.coords[spec.t_block[a]];
        dt[a] = wrap_diff(out[a], tbar[a]);
    }
    for (int i = 0; i < spec.codim(); ++i) {
        double v = s.coords[spec.r_block[i]];
        for (int a = 0; a < spec.d; ++a) v -= spec.A[i][a].to_double() * dt[a];
        v -= std::floor(v);
        out[spec.d + i] = v >= 1.0 ? 0.0 : v;
    }
    return out;
}

std::vector<double> InterpolationElement::local(const TorusPoint& q, const ProjectionSpec& spec) const {
    std::vector<double> w = shear_transform(q, tbar, spec);
    for (int a = 0; a < spec.d; ++a) w[a] = wrap_diff(w[a], tbar[a]);
    for (int i = 0; i < spec.codim(); ++i) w[spec.d + i] = wrap_diff(w[spec.d + i], rstar[i]);
    return w;
}

InterpolationElement build_element(const ProjectionSpec& spec, const LevelSet& levels,
                                   std::span<const ExtReal> x_star, const FprConfig& cfg) {
    const int d = spec.d;
    const int c = spec.codim();
    const int k = cfg.k;
    if (levels.k != k || static_cast<int>(levels.levels.size()) != c)
        throw ConfigError("build_element: level set does not match the configuration");

    InterpolationElement el;
    el.k = k;
    const SuperPoint s = normalized_lift(x_star, spec);
    std::vector<ExtReal> frac_part(d);
    for (int a = 0; a < d; ++a) {
        const ExtReal st = s[spec.t_block[a]];
        el.base.push_back(floor(st));
        frac_part[a] = st - el.base[a];
        el.tbar.push_back(frac_double(frac_part[a]));
    }
    for (int i = 0; i < c; ++i) el.rstar.push_back(frac_double(s[spec.r_block[i]]));

    el.abscissae.resize(d + c);
    for (int a = 0; a < d; ++a) {
        const double spacing = 2.0 * cfg.theta[spec.t_block[a]] / (k + 1);
        for (int j = 0; j <= k; ++j) el.abscissae[a].push_back((j - 0.5 * k) * spacing);
        el.sizes.push_back(cfg.theta[spec.t_block[a]]);
    }
    for (int i = 0; i < c; ++i) {
        for (int j = 0; j <= k; ++j) el.abscissae[d + i].push_back(levels.levels[i][j].beta[i]);
        el.sizes.push_back(el.abscissae[d + i].back() - el.abscissae[d + i].front());
    }

    const int axes = d + c;
    std::size_t total = 1;
    for (int a = 0; a < axes; ++a) total *= static_cast<std::size_t>(k + 1);
    el.nodes.reserve(total);
    el.images.reserve(total);
    std::vector<int> jidx(axes, 0);
    std::vector<ExtReal> t(d);
    for (std::size_t n = 0; n < total; ++n) {
        std::size_t rem = n;
        for (int a = axes - 1; a >= 0; --a) {
            jidx[a] = static_cast<int>(rem % (k + 1));
            rem /= (k + 1);
        }
        for (int a = 0; a < d; ++a) {
            std::int64_t off = 0;
            for (int i = 0; i < c; ++i) off += levels.levels[i][jidx[d + i]].offset[a];
            t[a] = el.base[a] + ExtReal::from_int(off) + frac_part[a] + ExtReal(el.abscissae[a][jidx[a]]);
        }
        PhysPoint x = physical_from_lattice(t, spec);
        el.images.push_back(combine(x, spec));
        el.nodes.push_back(std::move(x));
    }
    return el;
}

std::vector<double> lagrange_basis(std::span<const double> xs, double q) {
    const std::size_t m = xs.size();
    std::vector<double> w(m, 1.0);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (i == j) continue;
            const double diff = xs[j] - xs[i];
            if (std::abs(diff) < 1e-14) throw DuplicateAbscissa("interpolation abscissae coincide");
            w[j] /= diff;
        }
    }
    std::vector<double> out(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        if (q == xs[j]) {
            out[j] = 1.0;
            return out;
        }
    }
    double denom = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        out[j] = w[j] / (q - xs[j]);
        denom += out[j];
    }
    for (auto& v : out) v /= denom;
    return out;
}

double tensor_lagrange(const std::vector<std::vector<double>>& abscissae, std::span<const double> q,
                       std::span<const double> samples) {
    const std::size_t axes = abscissae.size();
    std::vector<std::vector<double>> basis(axes);
    std::size_t total = 1;
    for (std::size_t a = 0; a < axes; ++a) {
        basis[a] = lagrange_basis(abscissae[a], q[a]);
        total *= basis[a].size();
    }
    if (samples.size() != total) throw ConfigError("tensor_lagrange: sample count does not match the grid");
    double acc = 0.0;
    for (std::size_t n = 0; n < total; ++n) {
        std::size_t rem = n;
        double w = 1.0;
        for (std::size_t a = axes; a-- > 0;) {
            const std::size_t len = basis[a].size();
            w *= basis[a][rem % len];
            rem /= len;
        }
        acc += w * samples[n];
    }
    return acc;
}

double lagrange_eval(const InterpolationElement& element, const TorusPoint& query, std::span<const double> samples,
                     const ProjectionSpec& spec) {
    const std::vector<double> q = element.local(query, spec);
    return tensor_lagrange(element.abscissae, q, samples);
}

Recoverer::Recoverer(QuasiFunction func, FprConfig cfg) : func_(std::move(func)), cfg_(std::move(cfg)) {
    cfg_.validate(func_.spec);
    levels_ = find_levels_auto(func_.spec, cfg_);
}

InterpolationElement Recoverer::element(std::span<const ExtReal> x) const {
    return build_element(func_.spec, levels_, x, cfg_);
}

double Recoverer::operator()(std::span<const ExtReal> x) const {
    const InterpolationElement el = element(x);
    std::vector<double> samples(el.nodes.size());
    for (std::size_t i = 0; i < el.nodes.size(); ++i) samples[i] = func_.evaluate(el.nodes[i]);
    return lagrange_eval(el, combine(x, func_.spec), samples, func_.spec);
}

double Recoverer::at(double x) const {
    const ExtReal e(x);
    return (*this)(std::span<const ExtReal>(&e, 1));
}

double recover(const QuasiFunction& func, std::span<const ExtReal> x, const FprConfig& cfg) {
    static std::mutex mu;
    static std::map<std::string, LevelSet> cache;
    cfg.validate(func.spec);
    const std::string key = func.spec.fingerprint() + "|" + cfg.key();
    LevelSet levels;
    bool hit = false;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) {
            levels = it->second;
            hit = true;
        }
    }
    if (!hit) {
        levels = find_levels_auto(func.spec, cfg);
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(key, levels);
    }
    const InterpolationElement el = build_element(func.spec, levels, x, cfg);
    std::vector<double> samples(el.nodes.size());
    for (std::size_t i = 0; i < el.nodes.size(); ++i) samples[i] = func.evaluate(el.nodes[i]);
    return lagrange_eval(el, combine(x, func.spec), samples, func.spec);
}

}  // namespace fpr
