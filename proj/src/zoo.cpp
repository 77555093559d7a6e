#include "fpr/zoo.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

#include "fpr/parallel.hpp"

namespace fpr::zoo {

double cos_reduced(const ExtReal& theta) {
    double u = frac_double(theta / constants::two_pi());
    if (u >= 0.5) u -= 1.0;
    return std::cos(constants::two_pi().hi * u);
}

NamedConstant parse_constant(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(static_cast<char>(std::tolower(ch)));
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    NamedConstant c;
    if (s == "sqrt2") {
        c = {constants::sqrt2(), IrrationalityTag::QuadraticIrrational};
    } else if (s == "sqrt3") {
        c = {constants::sqrt3(), IrrationalityTag::QuadraticIrrational};
    } else if (s == "sqrt5") {
        c = {constants::sqrt5(), IrrationalityTag::QuadraticIrrational};
    } else if (s == "golden" || s == "phi") {
        c = {constants::golden(), IrrationalityTag::QuadraticIrrational};
    } else if (s == "pi") {
        c = {constants::pi(), IrrationalityTag::Transcendental};
    } else {
        try {
            c.value = ExtReal::parse(s);
        } catch (const std::invalid_argument&) {
            throw ConfigError("unrecognized constant: " + text);
        }
        const bool integer = s.find_first_of(".eE") == std::string::npos;
        c.tag = integer ? IrrationalityTag::Rational : IrrationalityTag::Unknown;
        c.exact = integer;
    }
    if (neg) c.value = -c.value;
    return c;
}

namespace {

QuasiFunction cosine_sum(std::string id, ProjectionSpec spec, std::vector<double> coefs) {
    spec.finalize();
    QuasiFunction f;
    f.id = std::move(id);
    f.spec = spec;
    f.smooth = true;
    f.evaluate = [spec, coefs](std::span<const ExtReal> x) {
        const SuperPoint s = lift(x, spec);
        double acc = 0.0;
        for (int j = 0; j < spec.n; ++j) acc += coefs[j] * cos_reduced(s[j]);
        return acc;
    };
    f.parent = [coefs](std::span<const double> s) {
        double acc = 0.0;
        for (std::size_t j = 0; j < coefs.size(); ++j) acc += coefs[j] * std::cos(s[j]);
        return acc;
    };
    return f;
}

ProjectionSpec one_dim_spec(const std::vector<NamedConstant>& freqs) {
    ProjectionSpec spec;
    spec.d = 1;
    spec.n = static_cast<int>(freqs.size()) + 1;
    spec.P = {{ExtReal(1.0)}};
    spec.cell.assign(spec.n, constants::two_pi());
    spec.t_block = {0};
    for (const auto& f : freqs) {
        spec.P[0].push_back(f.value);
        spec.A.push_back({f.value});
        spec.tags.push_back({f.tag});
    }
    return spec;
}

}  // namespace

QuasiFunction f1() { return cosine_sum("f1", one_dim_spec({parse_constant("sqrt2")}), {1.0, 1.0}); }

QuasiFunction f2() {
    return cosine_sum("f2", one_dim_spec({parse_constant("sqrt2"), parse_constant("sqrt3")}), {1.0, 1.0, 1.0});
}

QuasiFunction f3() {
    ProjectionSpec spec;
    spec.d = 2;
    spec.n = 3;
    spec.P = {{ExtReal(1.0), constants::sqrt2(), ExtReal(0.0)}, {ExtReal(0.0), ExtReal(0.0), ExtReal(1.0)}};
    spec.cell.assign(3, constants::two_pi());
    spec.t_block = {0, 2};
    spec.A = {{constants::sqrt2(), ExtReal(0.0)}};
    spec.tags = {{IrrationalityTag::QuadraticIrrational, IrrationalityTag::Rational}};
    return cosine_sum("f3", spec, {1.0, 1.0, 1.0});
}

QuasiFunction f4() { return cosine_sum("f4", one_dim_spec({parse_constant("pi")}), {1.0, 1.0}); }

QuasiFunction constant_function(double value) {
    QuasiFunction f = f1();
    f.id = "const";
    f.evaluate = [value](std::span<const ExtReal>) { return value; };
    f.parent = [value](std::span<const double>) { return value; };
    return f;
}

FibonacciChain::FibonacciChain()
    : lambda(constants::golden()),
      gamma(ExtReal(1.0) / constants::golden()),
      cell(sqrt(ExtReal(1.0) + constants::golden() * constants::golden())),
      len_a(constants::golden()),
      len_b(1.0) {}

bool FibonacciChain::letter(std::int64_t n) const {
    const ExtReal a = floor(mul_int(gamma, n + 2));
    const ExtReal b = floor(mul_int(gamma, n + 1));
    return (a - b) == ExtReal(1.0);
}

ExtReal FibonacciChain::start(std::int64_t n) const {
    const auto q = static_cast<std::int64_t>(floor(mul_int(gamma, n + 1)).to_double());
    return mul_int(len_a, q) + mul_int(len_b, n - q);
}

std::int64_t FibonacciChain::segment(const ExtReal& x) const {
    const double mean = (len_a * gamma + len_b * (ExtReal(1.0) - gamma)).to_double();
    auto n = static_cast<std::int64_t>(std::floor(x.to_double() / mean));
    while (start(n) > x) --n;
    while (start(n + 1) <= x) ++n;
    return n;
}

double FibonacciChain::value(const ExtReal& x) const { return letter(segment(x)) ? eps_a : eps_b; }

std::vector<double> FibonacciChain::breakpoints(double lo, double hi) const {
    std::vector<double> out;
    if (!(hi > lo)) return out;
    std::int64_t n = segment(ExtReal(lo));
    if (start(n) < ExtReal(lo)) ++n;
    for (;; ++n) {
        const double s = start(n).to_double();
        if (s >= hi) break;
        if (letter(n) != letter(n - 1)) out.push_back(s);
    }
    return out;
}

std::string fibonacci_word(std::int64_t N) {
    if (N < 1) throw ConfigError("fibonacci_word: N must be positive");
    std::string word = "A";
    while (static_cast<std::int64_t>(word.size()) < N) {
        std::string next;
        next.reserve(word.size() * 2);
        for (char ch : word) next += ch == 'A' ? "AB" : "A";
        word.swap(next);
    }
    word.resize(static_cast<std::size_t>(N));
    return word;
}

std::string fibonacci_word_beatty(std::int64_t N) {
    if (N < 1) throw ConfigError("fibonacci_word: N must be positive");
    const FibonacciChain& fc = chain();
    std::string word(static_cast<std::size_t>(N), 'B');
    for (std::int64_t n = 0; n < N; ++n)
        if (fc.letter(n)) word[n] = 'A';
    return word;
}

const FibonacciChain& chain() {
    static const FibonacciChain c;
    return c;
}

QuasiFunction fibonacci() {
    const FibonacciChain& fc = chain();
    const ExtReal sin_phi = fc.lambda / fc.cell;
    const ExtReal cos_phi = ExtReal(1.0) / fc.cell;
    ProjectionSpec spec;
    spec.d = 1;
    spec.n = 2;
    spec.P = {{sin_phi, cos_phi}};
    spec.cell = {fc.cell, fc.cell};
    spec.t_block = {0};
    spec.A = {{fc.gamma}};
    spec.tags = {{IrrationalityTag::QuadraticIrrational}};
    spec.finalize();

    QuasiFunction f;
    f.id = "fib";
    f.spec = spec;
    f.smooth = false;
    f.evaluate = [](std::span<const ExtReal> x) { return chain().value(x[0]); };
    f.discontinuities = [](double lo, double hi) { return chain().breakpoints(lo, hi); };
    return f;
}

std::vector<std::string> registry_ids() { return {"f1", "f2", "f3", "f4", "fib"}; }

QuasiFunction by_id(const std::string& id) {
    if (id == "f1") return f1();
    if (id == "f2") return f2();
    if (id == "f3") return f3();
    if (id == "f4") return f4();
    if (id == "fib") return fibonacci();
    throw UnknownFunction(id);
}

QuasiFunction custom_from_json(const nlohmann::json& j, const std::string& id) {
    std::vector<std::vector<NamedConstant>> cols;
    std::vector<double> coefs;
    try {
        for (const auto& term : j.at("terms")) {
            std::vector<NamedConstant> freq;
            for (const auto& v : term.at("freqs"))
                freq.push_back(parse_constant(v.is_string() ? v.get<std::string>() : v.dump()));
            const double coef = term.value("coef", 1.0);
            cols.push_back(std::move(freq));
            coefs.push_back(coef);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed custom function: ") + e.what());
    }
    if (cols.empty()) throw ConfigError("custom function needs at least one term");
    const int d = static_cast<int>(cols.front().size());
    const int n = static_cast<int>(cols.size());
    for (const auto& c : cols)
        if (static_cast<int>(c.size()) != d) throw ConfigError("custom function: frequency vectors differ in length");

    ProjectionSpec spec;
    spec.d = d;
    spec.n = n;
    spec.P.assign(d, std::vector<ExtReal>(n));
    for (int col = 0; col < n; ++col)
        for (int i = 0; i < d; ++i) spec.P[i][col] = cols[col][i].value;
    if (j.contains("cell")) {
        for (const auto& v : j.at("cell"))
            spec.cell.push_back(parse_constant(v.is_string() ? v.get<std::string>() : v.dump()).value);
    } else {
        spec.cell.assign(n, constants::two_pi());
    }
    if (static_cast<int>(spec.cell.size()) != n) throw ConfigError("custom function: cell needs one entry per term");

    // t-block: the first d linearly independent normalized columns.
    std::vector<std::vector<double>> basis;
    for (int col = 0; col < n && static_cast<int>(spec.t_block.size()) < d; ++col) {
        std::vector<double> v(d);
        for (int i = 0; i < d; ++i) v[i] = (spec.P[i][col] / spec.cell[col]).to_double();
        for (const auto& b : basis) {
            double dot = 0.0, nb = 0.0;
            for (int i = 0; i < d; ++i) {
                dot += v[i] * b[i];
                nb += b[i] * b[i];
            }
            for (int i = 0; i < d; ++i) v[i] -= dot / nb * b[i];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (std::sqrt(norm) > 1e-10) {
            basis.push_back(v);
            spec.t_block.push_back(col);
        }
    }
    if (static_cast<int>(spec.t_block.size()) < d) throw ConfigError("custom function: frequencies have rank < d");

    // A solves Pn_r = sum_a A_a Pn_{t_a}; Gauss-Jordan in double-double.
    std::vector<std::vector<ExtReal>> m(d, std::vector<ExtReal>(d));
    for (int i = 0; i < d; ++i)
        for (int a = 0; a < d; ++a) m[i][a] = spec.P[i][spec.t_block[a]] / spec.cell[spec.t_block[a]];
    for (int col = 0; col < n; ++col) {
        if (std::find(spec.t_block.begin(), spec.t_block.end(), col) != spec.t_block.end()) continue;
        auto mm = m;
        std::vector<ExtReal> rhs(d);
        for (int i = 0; i < d; ++i) rhs[i] = spec.P[i][col] / spec.cell[col];
        for (int p = 0; p < d; ++p) {
            int piv = p;
            for (int r = p + 1; r < d; ++r)
                if (std::abs(mm[r][p].hi) > std::abs(mm[piv][p].hi)) piv = r;
            std::swap(mm[p], mm[piv]);
            std::swap(rhs[p], rhs[piv]);
            for (int r = 0; r < d; ++r) {
                if (r == p) continue;
                const ExtReal f = mm[r][p] / mm[p][p];
                for (int q = p; q < d; ++q) mm[r][q] -= f * mm[p][q];
                rhs[r] -= f * rhs[p];
            }
        }
        std::vector<ExtReal> row(d);
        std::vector<IrrationalityTag> tags(d);
        IrrationalityTag coltag = IrrationalityTag::Rational;
        for (const auto& c : cols[col]) {
            if (c.tag == IrrationalityTag::Transcendental) coltag = c.tag;
            else if (c.tag == IrrationalityTag::Unknown && coltag != IrrationalityTag::Transcendental) coltag = c.tag;
            else if (c.tag == IrrationalityTag::QuadraticIrrational && coltag == IrrationalityTag::Rational) coltag = c.tag;
        }
        for (int a = 0; a < d; ++a) {
            row[a] = rhs[a] / mm[a][a];
            if (std::abs(row[a].hi) < 1e-28) row[a] = ExtReal(0.0);
            tags[a] = row[a] == ExtReal(0.0) ? IrrationalityTag::Rational : coltag;
        }
        spec.A.push_back(row);
        spec.tags.push_back(tags);
    }
    return cosine_sum(id, spec, coefs);
}

std::vector<double> discontinuities(const QuasiFunction& func, double lo, double hi) {
    if (!func.discontinuities) return {};
    return func.discontinuities(lo, hi);
}

double consistency_check(const QuasiFunction& func, int pair_count, double delta, double guard, std::uint64_t seed,
                         std::int64_t t_max) {
    const ProjectionSpec& spec = func.spec;
    std::vector<std::int64_t> m(spec.d, 0);
    if (delta > 0.0) {
        int axis = 0;
        while (axis < spec.d && spec.periodic_t_axis(axis)) ++axis;
        if (axis == spec.d) axis = 0;
        const std::int64_t hit = first_hit(
            1, t_max + 1,
            [&](std::int64_t t) {
                for (int r = 0; r < spec.codim(); ++r)
                    if (std::abs(wrap_diff(frac_double(mul_int(spec.A[r][axis], t)), 0.0)) > delta) return false;
                return true;
            },
            Exec::Parallel);
        if (hit > t_max) throw BudgetExceeded("consistency_check: no lattice shift within delta", t_max);
        m[axis] = hit;
    }
    std::vector<ExtReal> mt(spec.d);
    for (int a = 0; a < spec.d; ++a) mt[a] = ExtReal::from_int(m[a]);
    const PhysPoint shift = physical_from_lattice(mt, spec);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1e5, 1e5);
    double worst = 0.0;
    int accepted = 0;
    for (int attempt = 0; accepted < pair_count && attempt < 100 * pair_count; ++attempt) {
        PhysPoint x1(spec.d), x2(spec.d);
        for (int i = 0; i < spec.d; ++i) {
            x1[i] = ExtReal(dist(rng));
            x2[i] = x1[i] + shift[i];
        }
        if (func.discontinuities && guard > 0.0) {
            const double a = x1[0].to_double(), b = x2[0].to_double();
            if (!func.discontinuities(a - guard, a + guard).empty()) continue;
            if (!func.discontinuities(b - guard, b + guard).empty()) continue;
        }
        ++accepted;
        worst = std::max(worst, std::abs(func.evaluate(x1) - func.evaluate(x2)));
    }
    return worst;
}

}  // namespace fpr::zoo
