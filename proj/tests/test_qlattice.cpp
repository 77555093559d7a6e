#include <random>

#include "doctest.h"
#include "oracle.hpp"

#include "fpr/qlattice.hpp"
#include "fpr/zoo.hpp"

using namespace fpr;

namespace {

ProjectionSpec sqrt2_spec() { return zoo::f1().spec; }

TorusPoint at(double x, const ProjectionSpec& spec) {
    const ExtReal e(x);
    return combine(std::span<const ExtReal>(&e, 1), spec);
}

}  // namespace

TEST_SUITE("qlattice") {

TEST_CASE("finalize derives blocks") {
    const ProjectionSpec s = sqrt2_spec();
    CHECK(s.codim() == 1);
    CHECK(s.r_block == std::vector<int>{1});
    CHECK(!s.periodic_t_axis(0));
    const ProjectionSpec f3 = zoo::f3().spec;
    CHECK(f3.t_block == std::vector<int>{0, 2});
    CHECK(f3.periodic_t_axis(1));
}

TEST_CASE("finalize rejects bad input") {
    ProjectionSpec s = sqrt2_spec();
    s.cell[1] = ExtReal(-1.0);
    CHECK_THROWS_AS(s.finalize(), ConfigError);

    s = sqrt2_spec();
    s.A[0][0] = ExtReal(1.5);  // no longer matches P
    CHECK_THROWS_AS(s.finalize(), ConfigError);

    s = sqrt2_spec();
    s.t_block = {5};
    CHECK_THROWS_AS(s.finalize(), ConfigError);

    ProjectionSpec rank;
    rank.d = 2;
    rank.n = 3;
    rank.P = {{ExtReal(1.0), ExtReal(2.0), ExtReal(3.0)}, {ExtReal(2.0), ExtReal(4.0), ExtReal(6.0)}};
    rank.cell.assign(3, ExtReal(1.0));
    rank.t_block = {0, 1};
    rank.A = {{ExtReal(0.0), ExtReal(0.0)}};
    CHECK_THROWS_AS(rank.finalize(), ConfigError);
}

TEST_CASE("combine(6285) for the sqrt2 example against the oracle") {
    const TorusPoint q = at(6285.0, sqrt2_spec());
    const oracle::big tp = 2 * oracle::pi();
    CHECK(std::abs(q.coords[0] - oracle::to_d(oracle::frac(oracle::big(6285) / tp))) < 1e-15);
    CHECK(std::abs(q.coords[1] - oracle::to_d(oracle::frac(oracle::sqrt_of(2) * 6285 / tp))) < 1e-15);
}

TEST_CASE("combine at 1e6 keeps r-precision") {
    const TorusPoint q = at(1.0e6 + 0.125, sqrt2_spec());
    const oracle::big x = oracle::big(1000000) + oracle::big(0.125);
    CHECK(std::abs(q.coords[1] - oracle::to_d(oracle::frac(oracle::sqrt_of(2) * x / (2 * oracle::pi())))) < 1e-14);
}

TEST_CASE("combine refuses when fractions cannot be trusted") {
    CHECK_THROWS_AS(at(1e17, sqrt2_spec()), PrecisionExceeded);
}

TEST_CASE("lift is linear") {
    const ProjectionSpec s = zoo::f2().spec;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e4, 1e4);
    for (int i = 0; i < 100; ++i) {
        const double a = u(rng), b = u(rng);
        const int c = static_cast<int>(u(rng) / 1000);
        const ExtReal xa(a), xb(b), xs = ExtReal(a) * ExtReal(static_cast<double>(c)) + ExtReal(b);
        const auto la = lift(std::span<const ExtReal>(&xa, 1), s);
        const auto lb = lift(std::span<const ExtReal>(&xb, 1), s);
        const auto ls = lift(std::span<const ExtReal>(&xs, 1), s);
        for (int j = 0; j < s.n; ++j) {
            const ExtReal expect = la[j] * ExtReal(static_cast<double>(c)) + lb[j];
            CHECK(std::abs((ls[j] - expect).to_double()) <= 1e-24 * (1.0 + std::abs(expect.hi)));
        }
    }
}

TEST_CASE("wrapped distance is a metric on the torus") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto pt = [&] { return TorusPoint{{u(rng), u(rng), u(rng)}}; };
    for (int i = 0; i < 2000; ++i) {
        const TorusPoint a = pt(), b = pt(), c = pt();
        CHECK(wrapped_dist(a, a) == 0.0);
        CHECK(wrapped_dist(a, b) == wrapped_dist(b, a));
        CHECK(wrapped_dist(a, b) <= 0.5);
        CHECK(wrapped_dist(a, c) <= wrapped_dist(a, b) + wrapped_dist(b, c) + 1e-15);
    }
    CHECK(wrapped_dist(TorusPoint{{0.01}}, TorusPoint{{0.99}}) == doctest::Approx(0.02));
    CHECK(wrap_diff(0.99, 0.01) == doctest::Approx(-0.02));
}

TEST_CASE("physical_from_lattice inverts the t-block") {
    const ProjectionSpec s = zoo::f3().spec;
    const ExtReal t[2] = {ExtReal(12.25), ExtReal(0.5)};
    const PhysPoint x = physical_from_lattice(t, s);
    const SuperPoint n = normalized_lift(x, s);
    CHECK(std::abs((n[0] - t[0]).to_double()) < 1e-25);
    CHECK(std::abs((n[2] - t[1]).to_double()) < 1e-25);
}

TEST_CASE("region size and count") {
    const Region g{{0, 2}, {10, 5}};
    CHECK(g.size() == std::vector<std::int64_t>{10, 3});
    CHECK(g.count() == 30);
}

TEST_CASE("spec json round trip") {
    const ProjectionSpec s = zoo::f3().spec;
    const auto j = spec_to_json(s);
    CHECK(j.at("tBlock") == nlohmann::json::array({1, 3}));
    const ProjectionSpec back = spec_from_json(j);
    CHECK(back.fingerprint() == s.fingerprint());
    CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"d", 1}}), ConfigError);
}

TEST_CASE("tags round trip") {
    for (auto t : {IrrationalityTag::Rational, IrrationalityTag::QuadraticIrrational, IrrationalityTag::Transcendental,
                   IrrationalityTag::Unknown})
        CHECK(tag_from_string(to_string(t)) == t);
}

}
