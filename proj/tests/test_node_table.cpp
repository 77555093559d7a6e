#include <cstring>

#include "doctest.h"

#include "fpr/fpr.hpp"
#include "fpr/zoo.hpp"

using namespace fpr;

namespace {

FprConfig f1_table_config() {
    FprConfig cfg;
    cfg.theta = normalize_theta(zoo::f1().spec, {0.4, 0.3});
    cfg.region = Region{{0}, {1274}};
    return cfg;
}

}  // namespace

TEST_SUITE("node_table") {

TEST_CASE("cell counts") {
    const auto f = zoo::f1();
    CHECK(table_cells(f.spec, f1_table_config()) == std::vector<int>{16, 21});
    const auto fib = zoo::fibonacci();
    FprConfig cfg;
    cfg.theta = normalize_theta(fib.spec, {0.08, 0.08});
    CHECK(table_cells(fib.spec, cfg) == std::vector<int>{24, 24});
}

TEST_CASE("f1 table on [0, 8000) recovers far away") {
    const auto f = zoo::f1();
    const NodeTable t = build_node_table(f, f1_table_config());
    CHECK(t.node_count() == 336);
    std::vector<double> xs;
    for (int i = 0; i < 1024; ++i) xs.push_back(1.0e6 + 80.0 * i / 1024);
    const auto v = recover_many(t, xs);
    double err = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) err = std::max(err, std::abs(v[i] - f.at(xs[i])));
    CHECK(err <= 5e-2);
}

TEST_CASE("nodes stay within eps of their slots") {
    const auto f = zoo::f1();
    const FprConfig cfg = f1_table_config();
    const NodeTable t = build_node_table(f, cfg);
    const int ns = t.slots(1);
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const double target = static_cast<double>(i % ns) / ns;
        CHECK(std::abs(wrap_diff(t.nodes[i].r[0], target)) <= cfg.effective_eps(f.spec));
        CHECK(t.nodes[i].value == f.evaluate(t.nodes[i].x));
    }
}

TEST_CASE("tables are deterministic across runs and execution modes") {
    const auto f = zoo::fibonacci();
    FprConfig cfg;
    cfg.theta = normalize_theta(f.spec, {0.08, 0.08});
    cfg.region = Region{{0}, {500}};
    cfg.exec = Exec::Parallel;
    const NodeTable a = build_node_table(f, cfg);
    const NodeTable b = build_node_table(f, cfg);
    cfg.exec = Exec::Serial;
    const NodeTable c = build_node_table(f, cfg);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_json().dump() == c.to_json().dump());
    CHECK(a.to_csv() == c.to_csv());

    std::vector<double> xs;
    for (int i = 0; i < 2000; ++i) xs.push_back(1000.0 + 0.01 * i);
    const auto p = recover_many(a, xs, Exec::Parallel);
    const auto s = recover_many(a, xs, Exec::Serial);
    CHECK(std::memcmp(p.data(), s.data(), p.size() * sizeof(double)) == 0);
}

TEST_CASE("elements with equal node values reproduce the value") {
    const auto f = zoo::fibonacci();
    FprConfig cfg;
    cfg.theta = normalize_theta(f.spec, {0.08, 0.08});
    cfg.region = Region{{0}, {500}};
    const NodeTable t = build_node_table(f, cfg);
    const int n0 = t.slots(0), n1 = t.slots(1);
    int uniform = 0;
    for (double lo : {1000.0, 1.0e6}) {
        for (int i = 0; i < 4000; ++i) {
            const ExtReal x(lo + 0.02 * i);
            const TorusPoint q = combine(std::span<const ExtReal>(&x, 1), f.spec);
            const int c0 = std::min(static_cast<int>(q.coords[0] * t.cells[0]), t.cells[0] - 1);
            const int c1 = std::min(static_cast<int>(q.coords[1] * t.cells[1]), t.cells[1] - 1);
            const double v = t.nodes[static_cast<std::size_t>(c0 * n1 + c1)].value;
            bool same = true;
            for (int a = 0; a <= 1; ++a)
                for (int b = 0; b <= 1; ++b) same &= t.nodes[static_cast<std::size_t>(((c0 + a) % n0) * n1 + (c1 + b) % n1)].value == v;
            if (!same) continue;
            ++uniform;
            CHECK(std::abs(t.interpolate(q) - v) <= 1e-12);
        }
    }
    CHECK(uniform > 6000);
}

TEST_CASE("json export lists nodes and elements") {
    const NodeTable t = build_node_table(zoo::f1(), f1_table_config());
    const auto j = t.to_json();
    CHECK(j.at("count") == 336);
    CHECK(j.at("nodes").size() == 336);
    CHECK(j.at("elements").size() == 336);
    CHECK(j.at("elements")[0].at("nodes").size() == 4);
    const std::string csv = t.to_csv();
    CHECK(csv.rfind("x_1,f\n", 0) == 0);
}

TEST_CASE("explicit region too small for the table") {
    FprConfig cfg;
    cfg.theta = normalize_theta(zoo::f4().spec, {0.05, 0.01});
    cfg.region = Region{{0}, {10}};
    CHECK_THROWS_AS(build_node_table(zoo::f4(), cfg), LevelsNotFound);
}

}
