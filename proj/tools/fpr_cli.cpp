// fpr: command-line front end for recovery, tables, classification and node export.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fpr/fpr.hpp"
#include "fpr/harness.hpp"
#include "fpr/zoo.hpp"

using namespace fpr;
using nlohmann::json;

namespace {

struct Globals {
    std::string format = "csv";
    std::string out;
    int threads = 0;
    std::int64_t tmax = kDefaultTMax;
    std::uint64_t seed = 1;
};

struct FnArgs {
    std::string fn = "f1";
    std::string custom;
    std::vector<double> theta;
    std::vector<double> h;
    int k = 1;
    double eps = 0.0;
    std::string strategy = "auto";
    std::string region;
    std::int64_t region_cells = 0;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// "1e6+80" style sums of decimal terms
ExtReal parse_sum(const std::string& text) {
    if (text.empty()) throw ConfigError("empty number");
    ExtReal acc;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= text.size(); ++i) {
        const bool cut = i == text.size() ||
                         ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E');
        if (!cut) continue;
        const std::string term = text.substr(start, i - start);
        try {
            acc += ExtReal::parse(term);
        } catch (const std::exception&) {
            throw ConfigError("bad number: " + text);
        }
        start = i;
    }
    return acc;
}

std::pair<ExtReal, ExtReal> parse_interval(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ConfigError("interval must look like a:b, got " + text);
    const ExtReal lo = parse_sum(text.substr(0, colon));
    const ExtReal hi = parse_sum(text.substr(colon + 1));
    if (!std::isfinite(lo.hi) || !std::isfinite(hi.hi) || hi < lo) throw ConfigError("bad interval: " + text);
    return {lo, hi};
}

QuasiFunction load_function(const FnArgs& a) {
    if (!a.custom.empty()) {
        std::ifstream in(a.custom);
        if (!in) throw ConfigError("cannot open " + a.custom);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("custom function: ") + e.what());
        }
        return zoo::custom_from_json(j);
    }
    return zoo::by_id(a.fn);
}

FprConfig make_config(const QuasiFunction& f, const FnArgs& a, const Globals& g) {
    FprConfig cfg;
    if (!a.h.empty() && !a.theta.empty()) throw ConfigError("give either --theta or --hnorm");
    if (!a.h.empty()) {
        cfg.theta = a.h;
    } else if (!a.theta.empty()) {
        if (static_cast<int>(a.theta.size()) != f.spec.n)
            throw ConfigError("--theta needs " + std::to_string(f.spec.n) + " values");
        cfg.theta = normalize_theta(f.spec, a.theta);
    } else {
        cfg.theta = normalize_theta(f.spec, std::vector<double>(f.spec.n, 0.3));
    }
    cfg.k = a.k;
    cfg.eps = a.eps;
    cfg.strategy = strategy_from_string(a.strategy);
    cfg.t_max = g.tmax;
    const int d = f.spec.d;
    if (a.region_cells > 0) {
        Region r;
        r.lo.assign(d, 0);
        r.hi.assign(d, 1);
        for (int j = 0; j < d; ++j)
            if (!f.spec.periodic_t_axis(j)) r.hi[j] = a.region_cells;
        cfg.region = r;
    } else if (!a.region.empty()) {
        const auto [lo, hi] = parse_interval(a.region);
        Region r;
        for (int j = 0; j < d; ++j) {
            if (f.spec.periodic_t_axis(j)) {
                r.lo.push_back(0);
                r.hi.push_back(1);
                continue;
            }
            const double cell = f.spec.cell[f.spec.t_block[j]].to_double();
            r.lo.push_back(static_cast<std::int64_t>(std::floor(lo.to_double() / cell)));
            r.hi.push_back(std::max(r.lo.back() + 1, static_cast<std::int64_t>(std::ceil(hi.to_double() / cell))));
        }
        cfg.region = r;
    }
    cfg.validate(f.spec);
    return cfg;
}

void add_fn_options(CLI::App* sub, FnArgs& a) {
    sub->add_option("--fn", a.fn, "built-in function: f1 f2 f3 f4 fib");
    sub->add_option("--custom", a.custom, "JSON file describing a cosine sum");
    sub->add_option("--theta", a.theta, "physical element sizes, one per superspace axis")->delimiter(',');
    sub->add_option("--hnorm", a.h, "normalized element sizes, one per superspace axis")->delimiter(',');
    sub->add_option("--k", a.k, "interpolation degree")->check(CLI::Range(1, 12));
    sub->add_option("--eps", a.eps, "filling precision (0: theta_r/16)");
    sub->add_option("--strategy", a.strategy, "auto, badly or good");
    sub->add_option("--region", a.region, "lattice region as a physical range a:b");
    sub->add_option("--region-cells", a.region_cells, "lattice region [0,N) in cells");
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw ConfigError("cannot write " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

int cmd_recover(const FnArgs& a, const Globals& g, const std::string& interval, const std::string& mode, int samples,
                double guard) {
    const QuasiFunction f = load_function(a);
    const FprConfig cfg = make_config(f, a, g);
    const auto [lo, hi] = parse_interval(interval);
    if (f.spec.d != 1) throw ConfigError("recover traces one-dimensional functions; use convergence for d > 1");
    Output out(g.out);
    if (!(lo < hi)) return 0;
    if (samples < 1) throw ConfigError("--samples must be positive");

    const double len = (hi - lo).to_double();
    std::vector<PhysPoint> xs;
    xs.reserve(samples);
    for (int i = 0; i < samples; ++i) xs.push_back({lo + ExtReal(len * i / samples)});

    std::vector<double> rec;
    if (mode == "table") {
        const NodeTable table = build_node_table(f, cfg);
        rec = recover_many(table, xs);
        std::fprintf(stderr, "nodes %zu\n", table.node_count());
    } else if (mode == "point") {
        const Recoverer r(f, cfg);
        rec.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) rec[i] = r(xs[i]);
    } else {
        throw ConfigError("--mode must be table or point");
    }

    if (guard < 0.0) guard = harness::default_guard(f.spec, cfg);
    const auto rep = harness::sup_error(f, xs, rec, f.smooth ? 0.0 : guard);

    if (g.format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double exact = f.evaluate(xs[i]);
            rows.push_back({{"x", num(xs[i][0].to_double())}, {"exact", exact}, {"recovered", rec[i]},
                            {"abs_diff", std::abs(exact - rec[i])}});
        }
        json j = {{"function", f.id}, {"mode", mode}, {"sup_error", rep.sup_error}, {"rows", rows}};
        if (!f.smooth) {
            j["guard"] = guard;
            j["excluded"] = rep.excluded;
            j["excluded_sup_error"] = rep.excluded_sup;
        }
        out.os() << j.dump(1) << '\n';
    } else {
        out.os() << "x,exact,recovered,abs_diff\n";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double exact = f.evaluate(xs[i]);
            out.os() << num(xs[i][0].to_double()) << ',' << num(exact) << ',' << num(rec[i]) << ','
                     << num(std::abs(exact - rec[i])) << '\n';
        }
    }
    std::fprintf(stderr, "sup error %.6e\n", rep.sup_error);
    if (!f.smooth) std::fprintf(stderr, "excluded %d samples within %.4g of a jump\n", rep.excluded, guard);
    return 0;
}

int cmd_convergence(const FnArgs& a, const Globals& g, const std::string& interval, int levels, int samples,
                    double factor, double order_tol) {
    const QuasiFunction f = load_function(a);
    const auto [lo, hi] = parse_interval(interval);
    if (!(lo < hi)) throw ConfigError("convergence needs a non-empty interval");
    harness::Interval box;
    box.lo.assign(f.spec.d, lo.to_double());
    box.hi.assign(f.spec.d, hi.to_double());

    const auto ref = harness::reference_rows(f.id, a.k);
    std::vector<std::vector<double>> thetas;
    if (!a.theta.empty()) {
        thetas = harness::halving(a.theta, levels);
    } else if (!ref.empty()) {
        for (int i = 0; i < levels && i < static_cast<int>(ref.size()); ++i) thetas.push_back(ref[i].theta);
    } else {
        thetas = harness::halving(std::vector<double>(f.spec.n, 0.3), levels);
    }
    const auto table =
        harness::convergence_table(f, thetas, a.k, box, samples, strategy_from_string(a.strategy));

    Output out(g.out);
    if (g.format == "json") {
        json j = harness::compare(table, ref, factor, order_tol);
        j["function"] = f.id;
        j["k"] = a.k;
        j["mean_order"] = table.mean_order();
        out.os() << j.dump(1) << '\n';
    } else {
        out.os() << table.to_csv();
    }
    return 0;
}

int cmd_regions(const Globals& g, const std::string& alpha, const std::string& criterion, std::vector<double> eps) {
    const auto c = zoo::parse_constant(alpha);
    if (!c.exact) std::fprintf(stderr, "warning: %s carries only its written digits\n", alpha.c_str());
    if (eps.empty()) eps = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const ProjectionSpec spec = harness::alpha_spec(c.value, c.tag);
    const FillingTable table = harness::region_table(spec, eps, criterion_from_string(criterion), g.tmax);
    Output out(g.out);
    if (g.format == "json") {
        json rows = json::array();
        for (const auto& r : table.rows) {
            json sci = json::array();
            for (auto s : r.size) sci.push_back(sci3(static_cast<double>(s)));
            rows.push_back({{"epsilon", r.eps}, {"size", r.size}, {"size_sci", sci}});
        }
        out.os() << json{{"alpha", alpha}, {"criterion", criterion}, {"rows", rows}}.dump(1) << '\n';
    } else {
        out.os() << table.to_csv();
    }
    return 0;
}

int cmd_classify(const Globals& g, const std::string& alpha, const FnArgs& a, int depth, std::int64_t bound,
                 int probe_pairs) {
    ProjectionSpec spec;
    std::string label;
    std::vector<std::int64_t> quotients;
    QuasiFunction f;
    if (!alpha.empty()) {
        const auto c = zoo::parse_constant(alpha);
        spec = harness::alpha_spec(c.value, c.tag);
        label = alpha;
        try {
            quotients = continued_fraction(abs(c.value), std::min(depth, 60)).quotients;
        } catch (const PrecisionExceeded&) {
        }
    } else {
        f = load_function(a);
        spec = f.spec;
        label = f.id;
    }
    const Classification cl = classify(spec, depth, bound);
    json j = {{"input", label},
              {"verdict", to_string(cl.verdict)},
              {"evidence", cl.evidence == Evidence::TagBased ? "tag" : "quotients"},
              {"depth", cl.depth},
              {"bound", cl.bound},
              {"max_quotient", cl.max_quotient}};
    if (!quotients.empty()) j["quotients"] = quotients;
    if (alpha.empty() && probe_pairs > 0)
        j["consistency"] = zoo::consistency_check(f, probe_pairs, 1e-6, 1e-3, g.seed, g.tmax);

    Output out(g.out);
    if (g.format == "json") {
        out.os() << j.dump(1) << '\n';
    } else {
        out.os() << "input,verdict,evidence,max_quotient\n"
                 << label << ',' << to_string(cl.verdict) << ',' << j["evidence"].get<std::string>() << ','
                 << cl.max_quotient << '\n';
    }
    std::fprintf(stderr, "%s\n", to_string(cl.verdict).c_str());
    return 0;
}

int cmd_nodes(const FnArgs& a, const Globals& g) {
    const QuasiFunction f = load_function(a);
    const FprConfig cfg = make_config(f, a, g);
    const NodeTable table = build_node_table(f, cfg);
    Output out(g.out);
    if (g.format == "csv")
        out.os() << table.to_csv();
    else
        out.os() << table.to_json().dump(1) << '\n';
    std::fprintf(stderr, "nodes %zu\n", table.node_count());
    return 0;
}

int cmd_fib_word(const Globals& g, std::int64_t n, const std::string& method) {
    std::string w;
    if (method == "substitution")
        w = zoo::fibonacci_word(n);
    else if (method == "beatty")
        w = zoo::fibonacci_word_beatty(n);
    else
        throw ConfigError("--method must be substitution or beatty");
    Output out(g.out);
    if (g.format == "json")
        out.os() << json{{"n", n}, {"method", method}, {"word", w}}.dump() << '\n';
    else
        out.os() << w << '\n';
    return 0;
}

int cmd_profile(const FnArgs& a, const Globals& g, const std::vector<double>& eps) {
    const QuasiFunction f = load_function(a);
    const auto rows = harness::traversal_cost(f.spec, eps, a.k);
    std::vector<double> x, y;
    for (const auto& r : rows) {
        x.push_back(std::pow(r.eps, -static_cast<double>(f.spec.codim())));
        y.push_back(static_cast<double>(r.scanned.empty() ? 0 : r.scanned[0]));
    }
    const auto fit = harness::linear_fit(x, y);
    Output out(g.out);
    if (g.format == "json") {
        json jr = json::array();
        for (const auto& r : rows) jr.push_back({{"epsilon", r.eps}, {"scanned", r.scanned}});
        out.os() << json{{"rows", jr}, {"slope", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2}}.dump(1)
                 << '\n';
    } else {
        out.os() << harness::cost_csv(rows);
    }
    std::fprintf(stderr, "fit slope %.4g r2 %.4f\n", fit.slope, fit.r2);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite points recovery of quasiperiodic functions"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    auto* format_opt = app.add_option("--format", g.format, "csv or json (nodes defaults to json)")
                           ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_option("--threads", g.threads, "worker threads (0: all)");
    app.add_option("--tmax", g.tmax, "scan budget for lattice searches");
    app.add_option("--seed", g.seed, "seed for probe sampling");

    FnArgs rec_args;
    std::string rec_interval = "1e6:1e6+80", rec_mode = "table";
    int rec_samples = 512;
    double rec_guard = -1.0;
    auto* rec = app.add_subcommand("recover", "recover f on an interval and compare with the exact values");
    add_fn_options(rec, rec_args);
    rec->add_option("--interval", rec_interval, "physical interval a:b");
    rec->add_option("--mode", rec_mode, "table (node table) or point (element per sample)");
    rec->add_option("--samples", rec_samples, "uniform samples, left endpoint included");
    rec->add_option("--guard", rec_guard, "jump guard for piecewise functions (default 2hL)");

    FnArgs conv_args;
    std::string conv_interval = "6284:6286";
    int conv_levels = 4, conv_samples = 512;
    double conv_factor = 3.0, conv_order_tol = 0.2;
    auto* conv = app.add_subcommand("convergence", "error and observed order under halving");
    add_fn_options(conv, conv_args);
    conv->add_option("--interval", conv_interval, "sampling interval, same on every axis");
    conv->add_option("--levels", conv_levels, "number of rows")->check(CLI::Range(2, 12));
    conv->add_option("--samples", conv_samples, "samples per axis");
    conv->add_option("--factor", conv_factor, "allowed error ratio against the reference");
    conv->add_option("--order-tol", conv_order_tol, "allowed order deviation against the reference");

    std::string reg_alpha = "sqrt2", reg_criterion = "one-sided";
    std::vector<double> reg_eps;
    auto* reg = app.add_subcommand("regions", "least-region filling table for frac(alpha t)");
    reg->add_option("--alpha", reg_alpha, "sqrt2, sqrt3, sqrt5, golden, pi or a number");
    reg->add_option("--criterion", reg_criterion, "one-sided, covering or computable");
    reg->add_option("--eps", reg_eps, "filling precisions")->delimiter(',');

    std::string cls_alpha;
    FnArgs cls_args;
    int cls_depth = 40, cls_probe = 0;
    std::int64_t cls_bound = 100;
    auto* cls = app.add_subcommand("classify", "badly or good approximable");
    cls->add_option("--alpha", cls_alpha, "single constant");
    cls->add_option("--fn", cls_args.fn, "built-in function");
    cls->add_option("--custom", cls_args.custom, "JSON file describing a cosine sum");
    cls->add_option("--depth", cls_depth, "continued fraction depth");
    cls->add_option("--bound", cls_bound, "largest quotient still counted as bounded");
    cls->add_option("--probe", cls_probe, "random pairs for the torus consistency probe");

    FnArgs node_args;
    auto* nodes = app.add_subcommand("nodes", "build and export the node table");
    add_fn_options(nodes, node_args);

    std::int64_t fw_n = 20;
    std::string fw_method = "substitution";
    auto* fw = app.add_subcommand("fib-word", "first letters of the Fibonacci word");
    fw->add_option("--n", fw_n, "number of letters")->check(CLI::PositiveNumber);
    fw->add_option("--method", fw_method, "substitution or beatty");

    FnArgs prof_args;
    std::vector<double> prof_eps{1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
    auto* prof = app.add_subcommand("profile", "level-search cost against the filling precision");
    prof->add_option("--fn", prof_args.fn, "built-in function");
    prof->add_option("--custom", prof_args.custom, "JSON file describing a cosine sum");
    prof->add_option("--k", prof_args.k, "interpolation degree");
    prof->add_option("--eps", prof_eps, "filling precisions")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (g.threads > 0) set_threads(g.threads);
        if (*rec) return cmd_recover(rec_args, g, rec_interval, rec_mode, rec_samples, rec_guard);
        if (*conv)
            return cmd_convergence(conv_args, g, conv_interval, conv_levels, conv_samples, conv_factor,
                                   conv_order_tol);
        if (*reg) return cmd_regions(g, reg_alpha, reg_criterion, reg_eps);
        if (*cls) return cmd_classify(g, cls_alpha, cls_args, cls_depth, cls_bound, cls_probe);
        if (*nodes) {
            if (format_opt->count() == 0) g.format = "json";
            return cmd_nodes(node_args, g);
        }
        if (*fw) return cmd_fib_word(g, fw_n, fw_method);
        if (*prof) return cmd_profile(prof_args, g, prof_eps);
    } catch (const FprError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
