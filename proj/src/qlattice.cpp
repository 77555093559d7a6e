#include "fpr/qlattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fpr {

std::string to_string(IrrationalityTag tag) {
    switch (tag) {
        case IrrationalityTag::Rational: return "Rational";
        case IrrationalityTag::QuadraticIrrational: return "QuadraticIrrational";
        case IrrationalityTag::Transcendental: return "Transcendental";
        case IrrationalityTag::Unknown: return "Unknown";
    }
    return "Unknown";
}

IrrationalityTag tag_from_string(const std::string& s) {
    if (s == "Rational") return IrrationalityTag::Rational;
    if (s == "QuadraticIrrational") return IrrationalityTag::QuadraticIrrational;
    if (s == "Transcendental") return IrrationalityTag::Transcendental;
    if (s == "Unknown") return IrrationalityTag::Unknown;
    throw ConfigError("unknown irrationality tag: " + s);
}

namespace {

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> m) {
    const auto dim = m.size();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < dim; ++p)
            for (std::size_t q = p + 1; q < dim; ++q) off += m[p][q] * m[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                if (m[p][q] == 0.0) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < dim; ++k) {
                    const double mkp = m[k][p];
                    const double mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    const double mpk = m[p][k];
                    const double mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> ev(dim);
    for (std::size_t i = 0; i < dim; ++i) ev[i] = m[i][i];
    return ev;
}

// Inverse of a small matrix by Gauss-Jordan with partial pivoting.
ExtMatrix invert(ExtMatrix a) {
    const auto dim = a.size();
    ExtMatrix inv(dim, std::vector<ExtReal>(dim));
    for (std::size_t i = 0; i < dim; ++i) inv[i][i] = ExtReal(1.0);
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < dim; ++r)
            if (std::abs(a[r][col].hi) > std::abs(a[piv][col].hi)) piv = r;
        if (std::abs(a[piv][col].hi) < 1e-300) throw ConfigError("singular t-block in projection matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        const ExtReal p = a[col][col];
        for (std::size_t k = 0; k < dim; ++k) {
            a[col][k] /= p;
            inv[col][k] /= p;
        }
        for (std::size_t r = 0; r < dim; ++r) {
            if (r == col) continue;
            const ExtReal f = a[r][col];
            if (f == ExtReal(0.0)) continue;
            for (std::size_t k = 0; k < dim; ++k) {
                a[r][k] -= f * a[col][k];
                inv[r][k] -= f * inv[col][k];
            }
        }
    }
    return inv;
}

}  // namespace

void ProjectionSpec::finalize() {
    if (d < 1) throw ConfigError("projection spec: d must be positive");
    if (n <= d) throw ConfigError("projection spec: n must exceed d");
    if (static_cast<int>(P.size()) != d) throw ConfigError("projection spec: P must have d rows");
    for (const auto& row : P)
        if (static_cast<int>(row.size()) != n) throw ConfigError("projection spec: P must have n columns");
    if (static_cast<int>(cell.size()) != n) throw ConfigError("projection spec: cell must have n entries");
    for (const auto& c : cell)
        if (!(c.hi > 0.0) || !std::isfinite(c.hi)) throw ConfigError("projection spec: cell lengths must be positive");
    if (static_cast<int>(t_block.size()) != d) throw ConfigError("projection spec: tBlock must have d entries");
    {
        auto sorted = t_block;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ConfigError("projection spec: tBlock indices must be distinct");
        for (int idx : t_block)
            if (idx < 0 || idx >= n) throw ConfigError("projection spec: tBlock index out of range");
    }
    if (static_cast<int>(A.size()) != n - d) throw ConfigError("projection spec: A must have n-d rows");
    for (const auto& row : A) {
        if (static_cast<int>(row.size()) != d) throw ConfigError("projection spec: A must have d columns");
        for (const auto& v : row)
            if (!std::isfinite(v.hi)) throw ConfigError("projection spec: A entries must be finite");
    }
    if (tags.empty()) tags.assign(n - d, std::vector<IrrationalityTag>(d, IrrationalityTag::Unknown));
    if (static_cast<int>(tags.size()) != n - d) throw ConfigError("projection spec: tags must match A");
    for (const auto& row : tags)
        if (static_cast<int>(row.size()) != d) throw ConfigError("projection spec: tags must match A");

    r_block.clear();
    for (int j = 0; j < n; ++j)
        if (std::find(t_block.begin(), t_block.end(), j) == t_block.end()) r_block.push_back(j);

    Pn.assign(d, std::vector<ExtReal>(n));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < n; ++j) Pn[i][j] = P[i][j] / cell[j];

    // rank_R(P) = d: singular values of P are square roots of eig(P P^T).
    std::vector<std::vector<double>> gram(d, std::vector<double>(d, 0.0));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < n; ++j) gram[i][k] += P[i][j].to_double() * P[k][j].to_double();
    for (double ev : symmetric_eigenvalues(gram))
        if (!(std::sqrt(std::max(ev, 0.0)) > 1e-10)) throw ConfigError("projection spec: P is rank deficient");

    // t-block of the normalized lift: t = M^T x with M the t-block columns of Pn.
    ExtMatrix mt(d, std::vector<ExtReal>(d));
    for (int a = 0; a < d; ++a)
        for (int i = 0; i < d; ++i) mt[a][i] = Pn[i][t_block[a]];
    lattice_to_phys = invert(mt);

    // Q = (I, A)^T must reproduce the slice: r-columns = A * t-columns.
    for (int r = 0; r < n - d; ++r) {
        for (int i = 0; i < d; ++i) {
            ExtReal acc = Pn[i][r_block[r]];
            double scale = std::abs(acc.hi);
            for (int a = 0; a < d; ++a) {
                acc -= A[r][a] * Pn[i][t_block[a]];
                scale = std::max(scale, std::abs((A[r][a] * Pn[i][t_block[a]]).hi));
            }
            if (std::abs(acc.hi) > 1e-20 * std::max(scale, 1.0))
                throw ConfigError("projection spec: A does not reproduce P on the t-block");
        }
    }
}

bool ProjectionSpec::periodic_t_axis(int j) const {
    for (int r = 0; r < n - d; ++r)
        if (A[r][j] != ExtReal(0.0)) return false;
    return true;
}

std::string ProjectionSpec::fingerprint() const {
    std::ostringstream os;
    os << d << ';' << n << ';';
    for (const auto& row : P)
        for (const auto& v : row) os << v.hi << ',' << v.lo << ',';
    for (const auto& c : cell) os << c.hi << ',' << c.lo << ',';
    for (int t : t_block) os << t << ',';
    return os.str();
}

std::vector<std::int64_t> Region::size() const {
    std::vector<std::int64_t> s(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) s[i] = hi[i] - lo[i];
    return s;
}

std::int64_t Region::count() const {
    std::int64_t c = 1;
    for (auto s : size()) c *= s;
    return c;
}

SuperPoint lift(std::span<const ExtReal> x, const ProjectionSpec& spec) {
    SuperPoint s(spec.n);
    for (int j = 0; j < spec.n; ++j) {
        ExtReal acc;
        for (int i = 0; i < spec.d; ++i) acc += spec.P[i][j] * x[i];
        s[j] = acc;
    }
    return s;
}

SuperPoint normalized_lift(std::span<const ExtReal> x, const ProjectionSpec& spec) {
    SuperPoint s(spec.n);
    for (int j = 0; j < spec.n; ++j) {
        ExtReal acc;
        for (int i = 0; i < spec.d; ++i) acc += spec.Pn[i][j] * x[i];
        s[j] = acc;
    }
    return s;
}

TorusPoint torus_reduce(std::span<const ExtReal> s, const ProjectionSpec& spec) {
    TorusPoint p;
    p.coords.resize(spec.n);
    for (int j = 0; j < spec.n; ++j) p.coords[j] = frac_double(s[j] / spec.cell[j]);
    return p;
}

TorusPoint combine(std::span<const ExtReal> x, const ProjectionSpec& spec, double frac_tolerance) {
    const SuperPoint s = normalized_lift(x, spec);
    TorusPoint p;
    p.coords.resize(spec.n);
    for (int j = 0; j < spec.n; ++j) {
        // double-double keeps ~2^-104 relative accuracy in the product
        if (std::abs(s[j].hi) * 0x1p-100 > frac_tolerance)
            throw PrecisionExceeded("combine: |x| too large for extended-precision fractional part");
        p.coords[j] = frac_double(s[j]);
    }
    return p;
}

PhysPoint physical_from_lattice(std::span<const ExtReal> t, const ProjectionSpec& spec) {
    PhysPoint x(spec.d);
    for (int i = 0; i < spec.d; ++i) {
        ExtReal acc;
        for (int a = 0; a < spec.d; ++a) acc += spec.lattice_to_phys[i][a] * t[a];
        x[i] = acc;
    }
    return x;
}

double wrapped_dist(const TorusPoint& u, const TorusPoint& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.coords.size(); ++i) {
        const double a = std::abs(u.coords[i] - v.coords[i]);
        m = std::max(m, std::min(a, 1.0 - a));
    }
    return m;
}

double one_sided_frac(double u, double r0) {
    const double d = u - r0;
    const double f = d - std::floor(d);
    return f >= 1.0 ? 0.0 : f;
}

nlohmann::json spec_to_json(const ProjectionSpec& spec) {
    using nlohmann::json;
    json j;
    j["d"] = spec.d;
    j["n"] = spec.n;
    json p = json::array();
    for (const auto& row : spec.P) {
        json r = json::array();
        for (const auto& v : row) r.push_back(v.to_string());
        p.push_back(r);
    }
    j["P"] = p;
    json c = json::array();
    for (const auto& v : spec.cell) c.push_back(v.to_string());
    j["cell"] = c;
    json tb = json::array();
    for (int t : spec.t_block) tb.push_back(t + 1);
    j["tBlock"] = tb;
    json a = json::array();
    for (const auto& row : spec.A) {
        json r = json::array();
        for (const auto& v : row) r.push_back(v.to_string());
        a.push_back(r);
    }
    j["A"] = a;
    json tg = json::array();
    for (const auto& row : spec.tags) {
        json r = json::array();
        for (auto t : row) r.push_back(to_string(t));
        tg.push_back(r);
    }
    j["tags"] = tg;
    return j;
}

namespace {

ExtReal ext_from_json(const nlohmann::json& v) {
    if (v.is_string()) return ExtReal::parse(v.get<std::string>());
    if (v.is_number()) return ExtReal(v.get<double>());
    throw ConfigError("expected a decimal string or number in projection spec");
}

}  // namespace

ProjectionSpec spec_from_json(const nlohmann::json& j) {
    ProjectionSpec spec;
    try {
        spec.d = j.at("d").get<int>();
        spec.n = j.at("n").get<int>();
        for (const auto& row : j.at("P")) {
            std::vector<ExtReal> r;
            for (const auto& v : row) r.push_back(ext_from_json(v));
            spec.P.push_back(std::move(r));
        }
        for (const auto& v : j.at("cell")) spec.cell.push_back(ext_from_json(v));
        for (const auto& v : j.at("tBlock")) spec.t_block.push_back(v.get<int>() - 1);
        for (const auto& row : j.at("A")) {
            std::vector<ExtReal> r;
            for (const auto& v : row) r.push_back(ext_from_json(v));
            spec.A.push_back(std::move(r));
        }
        if (j.contains("tags")) {
            for (const auto& row : j.at("tags")) {
                std::vector<IrrationalityTag> r;
                for (const auto& v : row) r.push_back(tag_from_string(v.get<std::string>()));
                spec.tags.push_back(std::move(r));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed projection spec JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("malformed projection spec JSON: ") + e.what());
    }
    spec.finalize();
    return spec;
}

}  // namespace fpr
