#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>

#include "fpr/fpr.hpp"

namespace fpr {

std::vector<int> table_cells(const ProjectionSpec& spec, const FprConfig& cfg) {
    std::vector<int> cells;
    for (int a = 0; a < spec.d; ++a) {
        const double width = cfg.k * 2.0 * cfg.theta[spec.t_block[a]] / (cfg.k + 1);
        cells.push_back(std::max(1, static_cast<int>(std::lround(1.0 / width))));
    }
    for (int r : spec.r_block) cells.push_back(std::max(1, static_cast<int>(std::lround(1.0 / cfg.theta[r]))));
    return cells;
}

namespace {

struct Grid {
    std::vector<int> extent;
    std::vector<std::size_t> stride;
    std::size_t total = 1;

    explicit Grid(std::vector<int> e) : extent(std::move(e)), stride(extent.size()) {
        for (int a = static_cast<int>(extent.size()) - 1; a >= 0; --a) {
            stride[a] = total;
            total *= static_cast<std::size_t>(extent[a]);
        }
    }
    void unpack(std::size_t idx, std::vector<int>& out) const {
        for (std::size_t a = 0; a < extent.size(); ++a) out[a] = static_cast<int>((idx / stride[a]) % extent[a]);
    }
};

struct OrbitEntry {
    double v;
    std::int64_t idx;
    bool operator<(const OrbitEntry& o) const { return v < o.v || (v == o.v && idx < o.idx); }
};

}  // namespace

namespace {

// Fills every slot from `region`; returns the table and throws LevelsNotFound
// when some node misses its target r by more than eps.
NodeTable fill_table(const QuasiFunction& func, const FprConfig& cfg, const Region& region) {
    const ProjectionSpec& spec = func.spec;
    const int d = spec.d;
    const int c = spec.codim();

    NodeTable table;
    table.spec = spec;
    table.k = cfg.k;
    table.region = region;
    table.cells = table_cells(spec, cfg);

    std::vector<int> slots(d + c);
    for (int a = 0; a < d + c; ++a) slots[a] = table.cells[a] * cfg.k;
    const Grid grid(slots);

    const Region& g = table.region;
    const auto gsize = g.size();
    std::vector<std::int64_t> gstride(d);
    std::int64_t gcount = 1;
    for (int a = d - 1; a >= 0; --a) {
        gstride[a] = gcount;
        gcount *= gsize[a];
    }
    auto unpack_region = [&](std::int64_t idx, std::int64_t* m) {
        for (int a = 0; a < d; ++a) m[a] = g.lo[a] + (idx / gstride[a]) % gsize[a];
    };

    // frac(A_i m) for every lattice offset in the region.
    std::vector<std::vector<double>> orbit(c, std::vector<double>(static_cast<std::size_t>(gcount)));
#pragma omp parallel for schedule(static) if (cfg.exec == Exec::Parallel)
    for (std::int64_t idx = 0; idx < gcount; ++idx) {
        std::int64_t m[8];
        unpack_region(idx, m);
        for (int i = 0; i < c; ++i) {
            ExtReal acc;
            for (int a = 0; a < d; ++a) acc += mul_int(spec.A[i][a], m[a]);
            orbit[i][idx] = frac_double(acc);
        }
    }
    std::vector<OrbitEntry> sorted;
    if (c == 1) {
        sorted.resize(static_cast<std::size_t>(gcount));
        for (std::int64_t idx = 0; idx < gcount; ++idx) sorted[idx] = {orbit[0][idx], idx};
        std::sort(sorted.begin(), sorted.end());
    }

    table.nodes.resize(grid.total);
    const auto total = static_cast<std::int64_t>(grid.total);
#pragma omp parallel for schedule(dynamic, 4) if (cfg.exec == Exec::Parallel)
    for (std::int64_t s = 0; s < total; ++s) {
        std::vector<int> slot(d + c);
        grid.unpack(static_cast<std::size_t>(s), slot);
        std::vector<ExtReal> gt(d);
        for (int a = 0; a < d; ++a) gt[a] = ExtReal::from_int(slot[a]) / ExtReal(static_cast<double>(slots[a]));
        std::vector<double> shift(c), target(c);
        for (int i = 0; i < c; ++i) {
            ExtReal acc;
            for (int a = 0; a < d; ++a) acc += spec.A[i][a] * gt[a];
            shift[i] = frac_double(acc);
            target[i] = static_cast<double>(slot[d + i]) / slots[d + i];
        }

        std::int64_t best = 0;
        if (c == 1) {
            double want = target[0] - shift[0];
            want -= std::floor(want);
            auto pos = std::lower_bound(sorted.begin(), sorted.end(), OrbitEntry{want, -1});
            const auto n = static_cast<std::ptrdiff_t>(sorted.size());
            std::ptrdiff_t hi = pos - sorted.begin();
            if (hi == n) hi = 0;
            std::ptrdiff_t lo = (pos - sorted.begin()) - 1;
            if (lo < 0) lo = n - 1;
            lo = std::lower_bound(sorted.begin(), sorted.end(), OrbitEntry{sorted[lo].v, -1}) - sorted.begin();
            const double dh = std::abs(wrap_diff(sorted[hi].v, want));
            const double dl = std::abs(wrap_diff(sorted[lo].v, want));
            if (dh < dl || (dh == dl && sorted[hi].idx < sorted[lo].idx))
                best = sorted[hi].idx;
            else
                best = sorted[lo].idx;
        } else {
            double best_dev = std::numeric_limits<double>::infinity();
            for (std::int64_t idx = 0; idx < gcount; ++idx) {
                double dev = 0.0;
                for (int i = 0; i < c; ++i)
                    dev = std::max(dev, std::abs(wrap_diff(orbit[i][idx] + shift[i], target[i])));
                if (dev < best_dev) {
                    best_dev = dev;
                    best = idx;
                }
            }
        }

        TableNode& node = table.nodes[s];
        node.offset.resize(d);
        unpack_region(best, node.offset.data());
        std::vector<ExtReal> t(d);
        for (int a = 0; a < d; ++a) t[a] = ExtReal::from_int(node.offset[a]) + gt[a];
        node.x = physical_from_lattice(t, spec);
        node.r.resize(c);
        for (int i = 0; i < c; ++i) {
            ExtReal acc;
            for (int a = 0; a < d; ++a) acc += spec.A[i][a] * t[a];
            node.r[i] = frac_double(acc);
        }
        node.value = func.evaluate(node.x);
    }

    const double eps = cfg.effective_eps(spec);
    for (std::size_t s = 0; s < grid.total; ++s) {
        std::vector<int> slot(d + c);
        grid.unpack(s, slot);
        for (int i = 0; i < c; ++i) {
            const double target = static_cast<double>(slot[d + i]) / slots[d + i];
            if (std::abs(wrap_diff(table.nodes[s].r[i], target)) > eps)
                throw LevelsNotFound(i, slot[d + i], region.hi[0] - 1);
        }
    }
    return table;
}

}  // namespace

NodeTable build_node_table(const QuasiFunction& func, const FprConfig& cfg) {
    const ProjectionSpec& spec = func.spec;
    cfg.validate(spec);
    if (spec.d > 8) throw ConfigError("node table: d > 8 is not supported");
    Region g = plan_region(spec, cfg);
    for (;;) {
        try {
            return fill_table(func, cfg, g);
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

double NodeTable::interpolate(const TorusPoint& q) const {
    const int d = spec.d;
    const int c = spec.codim();
    const int axes = d + c;
    std::vector<int> cell(axes), nslots(axes);
    std::vector<double> rel(axes);
    for (int a = 0; a < axes; ++a) {
        const double coord = a < d ? q.coords[spec.t_block[a]] : q.coords[spec.r_block[a - d]];
        nslots[a] = slots(a);
        cell[a] = std::min(static_cast<int>(std::floor(coord * cells[a])), cells[a] - 1);
        rel[a] = coord - static_cast<double>(cell[a]) / cells[a];
    }
    std::vector<std::size_t> stride(axes);
    std::size_t acc = 1;
    for (int a = axes - 1; a >= 0; --a) {
        stride[a] = acc;
        acc *= static_cast<std::size_t>(nslots[a]);
    }
    auto slot_index = [&](const std::vector<int>& j) {
        std::size_t idx = 0;
        for (int a = 0; a < axes; ++a) idx += static_cast<std::size_t>((cell[a] * k + j[a]) % nslots[a]) * stride[a];
        return idx;
    };
    std::vector<std::vector<double>> nominal(axes);
    for (int a = 0; a < axes; ++a)
        for (int j = 0; j <= k; ++j) nominal[a].push_back(static_cast<double>(j) / nslots[a]);

    std::size_t tcount = 1;
    for (int a = 0; a < axes; ++a) tcount *= static_cast<std::size_t>(k + 1);
    std::vector<int> j(axes);

    if (c != 1) {
        std::vector<double> samples(tcount);
        for (std::size_t n = 0; n < tcount; ++n) {
            std::size_t rem = n;
            for (int a = axes - 1; a >= 0; --a) {
                j[a] = static_cast<int>(rem % (k + 1));
                rem /= (k + 1);
            }
            samples[n] = nodes[slot_index(j)].value;
        }
        return tensor_lagrange(nominal, rel, samples);
    }

    // One r-axis: interpolate each t-column in r on the achieved levels, then in t.
    std::size_t columns = tcount / (k + 1);
    std::vector<double> colvals(columns);
    std::vector<double> rabs(k + 1), rvals(k + 1);
    for (std::size_t col = 0; col < columns; ++col) {
        std::size_t rem = col;
        for (int a = d - 1; a >= 0; --a) {
            j[a] = static_cast<int>(rem % (k + 1));
            rem /= (k + 1);
        }
        for (int jr = 0; jr <= k; ++jr) {
            j[d] = jr;
            const TableNode& node = nodes[slot_index(j)];
            const double nominal_abs =
                static_cast<double>((cell[d] * k + jr) % nslots[d]) / nslots[d];
            rabs[jr] = nominal[d][jr] + wrap_diff(node.r[0], nominal_abs);
            rvals[jr] = node.value;
        }
        const auto w = lagrange_basis(rabs, rel[d]);
        double v = 0.0;
        for (int jr = 0; jr <= k; ++jr) v += w[jr] * rvals[jr];
        colvals[col] = v;
    }
    std::vector<std::vector<double>> tabs(nominal.begin(), nominal.begin() + d);
    return tensor_lagrange(tabs, std::span<const double>(rel.data(), d), colvals);
}

nlohmann::json NodeTable::to_json() const {
    using nlohmann::json;
    json j;
    j["spec"] = spec_to_json(spec);
    j["k"] = k;
    j["cells"] = cells;
    j["region"] = {{"lo", region.lo}, {"hi", region.hi}};
    j["count"] = nodes.size();
    json arr = json::array();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        json x = json::array();
        for (const auto& v : n.x) x.push_back(v.to_string(20));
        arr.push_back({{"slot", i}, {"offset", n.offset}, {"x", x}, {"r", n.r}, {"f", n.value}});
    }
    j["nodes"] = arr;

    // element e covers slots cell*k .. cell*k+k on every axis (cyclic)
    const int axes = static_cast<int>(cells.size());
    std::vector<int> nslots(axes);
    std::vector<std::size_t> stride(axes);
    std::size_t acc = 1;
    for (int a = axes - 1; a >= 0; --a) {
        nslots[a] = slots(a);
        stride[a] = acc;
        acc *= static_cast<std::size_t>(nslots[a]);
    }
    const Grid eg(cells);
    std::size_t per = 1;
    for (int a = 0; a < axes; ++a) per *= static_cast<std::size_t>(k + 1);
    json elements = json::array();
    std::vector<int> cell(axes);
    for (std::size_t e = 0; e < eg.total; ++e) {
        eg.unpack(e, cell);
        json ids = json::array();
        for (std::size_t n = 0; n < per; ++n) {
            std::size_t rem = n, idx = 0;
            for (int a = axes - 1; a >= 0; --a) {
                const int jj = static_cast<int>(rem % (k + 1));
                rem /= (k + 1);
                idx += static_cast<std::size_t>((cell[a] * k + jj) % nslots[a]) * stride[a];
            }
            ids.push_back(idx);
        }
        elements.push_back({{"cell", cell}, {"nodes", ids}});
    }
    j["elements"] = elements;
    return j;
}

std::string NodeTable::to_csv() const {
    std::ostringstream os;
    for (int a = 0; a < spec.d; ++a) os << "x_" << (a + 1) << ',';
    os << "f\n";
    char buf[40];
    for (const auto& n : nodes) {
        for (const auto& v : n.x) os << v.to_string(20) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        os << buf << '\n';
    }
    return os.str();
}

std::vector<double> recover_many(const NodeTable& table, const std::vector<PhysPoint>& xs, Exec exec) {
    std::vector<double> out(xs.size());
    const auto n = static_cast<std::int64_t>(xs.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            out[i] = table.interpolate(combine(xs[i], table.spec));
        } catch (...) {
#pragma omp critical(fpr_recover_many)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<double> recover_many(const NodeTable& table, const std::vector<double>& xs, Exec exec) {
    std::vector<PhysPoint> pts;
    pts.reserve(xs.size());
    for (double x : xs) pts.push_back(PhysPoint{ExtReal(x)});
    return recover_many(table, pts, exec);
}

}  // namespace fpr
