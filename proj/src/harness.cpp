#include "fpr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>

namespace fpr::harness {

std::vector<PhysPoint> sample_grid(const Interval& box, int n) {
    if (n < 1) throw ConfigError("sample count must be positive");
    const auto d = box.lo.size();
    if (box.hi.size() != d || d == 0) throw ConfigError("interval dimensions do not match");
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) total *= static_cast<std::size_t>(n);
    std::vector<PhysPoint> out;
    out.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        PhysPoint x(d);
        std::size_t rem = idx;
        for (std::size_t a = d; a-- > 0;) {
            const auto i = static_cast<double>(rem % static_cast<std::size_t>(n));
            rem /= static_cast<std::size_t>(n);
            x[a] = ExtReal(box.lo[a]) + ExtReal((box.hi[a] - box.lo[a]) * i / n);
        }
        out.push_back(std::move(x));
    }
    return out;
}

double default_guard(const ProjectionSpec& spec, const FprConfig& cfg) {
    double h = 0.0;
    for (int j = 0; j < spec.n; ++j) h = std::max(h, cfg.theta[j] * spec.cell[j].to_double());
    return 2.0 * h;
}

ErrorReport sup_error(const QuasiFunction& func, const std::vector<PhysPoint>& xs, const std::vector<double>& recovered,
                      double guard) {
    ErrorReport rep;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double err = std::abs(recovered[i] - func.evaluate(xs[i]));
        bool near = false;
        if (!func.smooth && func.discontinuities && guard > 0.0) {
            const double x = xs[i][0].to_double();
            near = !func.discontinuities(x - guard, x + guard).empty();
        }
        if (near) {
            ++rep.excluded;
            rep.excluded_sup = std::max(rep.excluded_sup, err);
        } else {
            ++rep.samples;
            rep.sup_error = std::max(rep.sup_error, err);
        }
    }
    return rep;
}

ErrorReport sup_error(const QuasiFunction& func, const Interval& box, const FprConfig& cfg, int n, double guard) {
    const Recoverer rec(func, cfg);
    const auto xs = sample_grid(box, n);
    std::vector<double> values(xs.size());
    const auto count = static_cast<std::int64_t>(xs.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) if (cfg.exec == Exec::Parallel)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            values[i] = rec(xs[i]);
        } catch (...) {
#pragma omp critical(fpr_sup_error)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    if (guard < 0.0) guard = default_guard(func.spec, rec.config());
    return sup_error(func, xs, values, guard);
}

double jump_localization(const QuasiFunction& func, const std::vector<double>& xs,
                         const std::vector<double>& recovered) {
    if (xs.size() < 2 || !func.discontinuities) return 0.0;
    double lo_v = std::numeric_limits<double>::infinity(), hi_v = -lo_v;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = func.at(xs[i]);
        lo_v = std::min(lo_v, f);
        hi_v = std::max(hi_v, f);
    }
    const double mid = 0.5 * (lo_v + hi_v);
    std::vector<double> crossings;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double a = recovered[i - 1] - mid;
        const double b = recovered[i] - mid;
        if ((a < 0.0) != (b < 0.0)) crossings.push_back(xs[i - 1] + (xs[i] - xs[i - 1]) * a / (a - b));
    }
    double worst = 0.0;
    for (double bp : func.discontinuities(xs.front(), xs.back())) {
        double best = std::numeric_limits<double>::infinity();
        for (double c : crossings) best = std::min(best, std::abs(c - bp));
        worst = std::max(worst, best);
    }
    return worst;
}

double observed_order(double coarse_error, double fine_error) { return std::log2(coarse_error / fine_error); }

std::vector<std::vector<double>> halving(const std::vector<double>& base, int levels) {
    std::vector<std::vector<double>> out;
    for (int l = 0; l < levels; ++l) {
        std::vector<double> row(base);
        for (auto& v : row) v = std::ldexp(v, -l);
        out.push_back(std::move(row));
    }
    return out;
}

std::string ConvergenceTable::to_csv() const {
    std::ostringstream os;
    const std::size_t n = rows.empty() ? 0 : rows.front().theta.size();
    for (std::size_t i = 1; i <= n; ++i) os << "theta_" << i << ',';
    os << "error,order\n";
    char buf[64];
    for (const auto& r : rows) {
        for (double t : r.theta) {
            std::snprintf(buf, sizeof buf, "%.6g,", t);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "%.4e,", r.error);
        os << buf;
        if (r.order) {
            std::snprintf(buf, sizeof buf, "%.2f", *r.order);
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

double ConvergenceTable::mean_order() const {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : rows)
        if (r.order) {
            sum += *r.order;
            ++count;
        }
    return count ? sum / count : 0.0;
}

ConvergenceTable convergence_table(const QuasiFunction& func, const std::vector<std::vector<double>>& thetas, int k,
                                   const Interval& box, int n, Strategy strategy) {
    if (thetas.size() < 2) throw ConfigError("convergence table needs at least two levels");
    ConvergenceTable table;
    for (const auto& theta : thetas) {
        FprConfig cfg;
        cfg.k = k;
        cfg.theta = normalize_theta(func.spec, theta);
        cfg.strategy = strategy;
        ConvergenceRow row;
        row.theta = theta;
        row.error = sup_error(func, box, cfg, n).sup_error;
        if (!table.rows.empty()) row.order = observed_order(table.rows.back().error, row.error);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::vector<ReferenceRow> reference_rows(const std::string& id, int k) {
    if (id == "f1" && k == 1)
        return {{{0.4, 0.3}, 2.8035e-02}, {{0.2, 0.15}, 7.0599e-03}, {{0.1, 0.075}, 1.7681e-03},
                {{0.05, 0.0375}, 4.4219e-04}};
    if (id == "f1" && k == 3)
        return {{{0.8, 0.3}, 2.6990e-03}, {{0.4, 0.15}, 1.7661e-04}, {{0.2, 0.075}, 1.1204e-05},
                {{0.1, 0.0375}, 7.0414e-07}};
    if (id == "f1" && k == 5)
        return {{{1.2, 0.3}, 9.6976e-05}, {{0.6, 0.15}, 1.6192e-06}, {{0.3, 0.075}, 2.5909e-08},
                {{0.15, 0.0375}, 4.0196e-10}};
    if (id == "f2" && k == 1)
        return {{{0.4, 0.4, 0.3}, 1.1214e-01}, {{0.2, 0.2, 0.15}, 2.7964e-02}, {{0.1, 0.1, 0.075}, 6.9445e-03},
                {{0.05, 0.05, 0.0375}, 1.7093e-03}};
    if (id == "f3" && k == 1)
        return {{{0.8, 0.3, 0.3}, 1.1654e-01}, {{0.4, 0.15, 0.15}, 2.6666e-02}, {{0.2, 0.075, 0.075}, 5.8759e-03}};
    if (id == "f4" && k == 1)
        return {{{0.4048, 0.3}, 1.1717e-01}, {{0.2024, 0.15}, 2.0538e-02}, {{0.1012, 0.075}, 5.1695e-03},
                {{0.0667, 0.0375}, 1.6952e-03}, {{0.0328, 0.0188}, 4.2629e-04}};
    return {};
}

nlohmann::json compare(const ConvergenceTable& table, const std::vector<ReferenceRow>& reference, double factor,
                       double order_tol) {
    using nlohmann::json;
    json rows = json::array();
    bool all = true;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        json row = {{"theta", r.theta}, {"error", r.error}};
        if (r.order) row["order"] = *r.order;
        if (i < reference.size()) {
            const double ref = reference[i].error;
            const bool err_ok = r.error <= ref * factor && r.error >= ref / factor;
            bool ord_ok = true;
            if (r.order && i > 0) {
                const double ref_order = observed_order(reference[i - 1].error, ref);
                row["reference_order"] = ref_order;
                ord_ok = std::abs(*r.order - ref_order) <= order_tol;
            }
            row["reference_error"] = ref;
            row["pass"] = err_ok && ord_ok;
            all = all && err_ok && ord_ok;
        }
        rows.push_back(row);
    }
    return {{"rows", rows}, {"factor", factor}, {"order_tolerance", order_tol}, {"pass", all}};
}

ProjectionSpec alpha_spec(const ExtReal& alpha, IrrationalityTag tag) {
    ProjectionSpec spec;
    spec.d = 1;
    spec.n = 2;
    spec.P = {{ExtReal(1.0), alpha}};
    spec.cell = {ExtReal(1.0), ExtReal(1.0)};
    spec.t_block = {0};
    spec.A = {{alpha}};
    spec.tags = {{tag}};
    spec.finalize();
    return spec;
}

FillingTable region_table(const ProjectionSpec& spec, const std::vector<double>& eps_list, Criterion criterion,
                          std::int64_t t_max) {
    FillingTable table;
    for (double eps : eps_list) {
        FillingRow row;
        row.eps = eps;
        row.criterion = criterion;
        for (int j = 0; j < spec.d; ++j) {
            std::int64_t size = 1;
            if (!spec.periodic_t_axis(j)) {
                if (criterion == Criterion::Computable) {
                    size = static_cast<std::int64_t>(std::ceil(0.5 * std::pow(eps, -spec.codim()) - 1e-9));
                } else {
                    size = 0;
                    for (int r = 0; r < spec.codim(); ++r) {
                        if (spec.A[r][j] == ExtReal(0.0)) continue;
                        const std::int64_t s = criterion == Criterion::OneSided
                                                   ? least_region_one_sided(spec.A[r][j], eps, t_max)
                                                   : least_region_covering(spec.A[r][j], eps, 0.0, t_max);
                        size = std::max(size, s);
                    }
                }
            }
            row.size.push_back(size);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LinearFit fit;
    const double den = n * sxx - sx * sx;
    if (den == 0.0) return fit;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double mean = sy / n;
    double ss_tot = 0, ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = fit.slope * x[i] + fit.intercept;
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

std::vector<CostRow> traversal_cost(const ProjectionSpec& spec, const std::vector<double>& eps_list, int k) {
    std::vector<CostRow> rows;
    for (double eps : eps_list) {
        FprConfig cfg;
        cfg.k = k;
        cfg.eps = eps;
        cfg.theta.assign(spec.n, std::min(0.4, 16.0 * eps));
        const LevelSet ls = find_levels_auto(spec, cfg);
        rows.push_back({eps, ls.scanned});
    }
    return rows;
}

std::string cost_csv(const std::vector<CostRow>& rows) {
    std::ostringstream os;
    os << "epsilon";
    const std::size_t c = rows.empty() ? 0 : rows.front().scanned.size();
    for (std::size_t i = 1; i <= c; ++i) os << ",scanned_" << i;
    os << '\n';
    for (const auto& r : rows) {
        os << sci3(r.eps);
        for (auto s : r.scanned) os << ',' << s;
        os << '\n';
    }
    return os.str();
}

}  // namespace fpr::harness
