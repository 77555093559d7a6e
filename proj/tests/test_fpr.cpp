#include <random>

#include "doctest.h"

#include "fpr/fpr.hpp"
#include "fpr/zoo.hpp"

using namespace fpr;

namespace {

FprConfig config_for(const QuasiFunction& f, std::vector<double> physical, int k = 1) {
    FprConfig cfg;
    cfg.theta = normalize_theta(f.spec, physical);
    cfg.k = k;
    return cfg;
}

std::vector<double> sorted_abscissae(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a;
    while (static_cast<int>(a.size()) < count) {
        const double v = u(rng);
        bool close = false;
        for (double w : a) close |= std::abs(v - w) < 0.05;
        if (!close) a.push_back(v);
    }
    std::sort(a.begin(), a.end());
    return a;
}

}  // namespace

TEST_SUITE("fpr") {

TEST_CASE("partition of unity") {
    // element-like abscissae: equispaced, each moved by up to 1/16 of the spacing
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0), jitter(-1.0, 1.0);
    for (int k = 1; k <= 12; ++k) {
        for (int rep = 0; rep < 50; ++rep) {
            std::vector<double> a;
            for (int j = 0; j <= k; ++j) a.push_back((j + jitter(rng) / 16.0) / k);
            const auto w = lagrange_basis(a, u(rng));
            double s = 0.0;
            for (double v : w) s += v;
            CHECK(std::abs(s - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("basis is cardinal at the nodes") {
    const std::vector<double> a{0.0, 0.3, 0.7, 1.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto w = lagrange_basis(a, a[i]);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(w[j] == (i == j ? 1.0 : 0.0));
    }
}

TEST_CASE("coincident abscissae are rejected") {
    const std::vector<double> a{0.0, 0.5, 0.5};
    CHECK_THROWS_AS(lagrange_basis(a, 0.2), DuplicateAbscissa);
}

TEST_CASE("tensor interpolation reproduces per-axis polynomials of degree k") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 1; k <= 4; ++k) {
        const int axes = 3;
        std::vector<std::vector<double>> abs(axes);
        for (auto& a : abs) a = sorted_abscissae(rng, k + 1);
        std::vector<std::vector<double>> coef(axes, std::vector<double>(k + 1));
        for (auto& c : coef)
            for (auto& v : c) v = u(rng);
        auto poly = [&](const std::vector<double>& x) {
            double prod = 1.0;
            for (int ax = 0; ax < axes; ++ax) {
                double p = 0.0, xp = 1.0;
                for (int e = 0; e <= k; ++e, xp *= x[ax]) p += coef[ax][e] * xp;
                prod *= p;
            }
            return prod;
        };
        std::vector<double> samples;
        const int m = k + 1;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                for (int l = 0; l < m; ++l) samples.push_back(poly({abs[0][i], abs[1][j], abs[2][l]}));
        for (int rep = 0; rep < 20; ++rep) {
            const std::vector<double> q{u(rng), u(rng), u(rng)};
            CHECK(tensor_lagrange(abs, q, samples) == doctest::Approx(poly(q)).epsilon(1e-9));
        }
    }
}

TEST_CASE("level targets are symmetric") {
    CHECK(level_target(0, 1, 0.2) == doctest::Approx(-0.1));
    CHECK(level_target(1, 1, 0.2) == doctest::Approx(0.1));
    CHECK(level_target(1, 2, 0.2) == doctest::Approx(0.0));
}

TEST_CASE("levels land within eps of their targets") {
    const auto f = zoo::f2();
    const FprConfig cfg = config_for(f, {0.4, 0.4, 0.3}, 3);
    const LevelSet ls = find_levels_auto(f.spec, cfg);
    REQUIRE(ls.levels.size() == 2);
    for (int i = 0; i < 2; ++i) {
        const double th = cfg.theta[f.spec.r_block[i]];
        for (int j = 0; j <= cfg.k; ++j)
            CHECK(std::abs(ls.levels[i][j].beta[i] - level_target(j, cfg.k, th)) <= ls.eps + 1e-15);
    }
}

TEST_CASE("serial and parallel level searches agree") {
    const auto f = zoo::f2();
    FprConfig cfg = config_for(f, {0.2, 0.2, 0.15});
    const Region g = find_levels_auto(f.spec, cfg).region;
    cfg.exec = Exec::Serial;
    const LevelSet a = find_levels(f.spec, g, cfg);
    cfg.exec = Exec::Parallel;
    const LevelSet b = find_levels(f.spec, g, cfg);
    for (std::size_t i = 0; i < a.levels.size(); ++i)
        for (std::size_t j = 0; j < a.levels[i].size(); ++j) CHECK(a.levels[i][j].offset == b.levels[i][j].offset);
    CHECK(a.scanned == b.scanned);
}

TEST_CASE("explicit region that is too small") {
    const auto f = zoo::f4();
    FprConfig cfg = config_for(f, {0.05, 0.01});
    cfg.region = Region{{0}, {10}};
    CHECK_THROWS_AS(Recoverer(f, cfg), LevelsNotFound);
    cfg.region.reset();
    CHECK_NOTHROW(Recoverer(f, cfg));
}

TEST_CASE("config validation") {
    const auto f = zoo::f1();
    FprConfig cfg = config_for(f, {0.4, 0.3});
    CHECK_NOTHROW(cfg.validate(f.spec));
    FprConfig bad = cfg;
    bad.theta = {0.1};
    CHECK_THROWS_AS(bad.validate(f.spec), ConfigError);
    bad = cfg;
    bad.k = 13;
    CHECK_THROWS_AS(bad.validate(f.spec), ConfigError);
    bad = cfg;
    bad.eps = 0.1;
    CHECK_THROWS_AS(bad.validate(f.spec), ConfigError);
    bad = cfg;
    bad.theta[0] = 0.6;
    CHECK_THROWS_AS(bad.validate(f.spec), ConfigError);
}

TEST_CASE("constant function is reproduced") {
    const auto f = zoo::constant_function(2.5);
    const Recoverer rec(f, config_for(f, {0.4, 0.3}, 3));
    for (double x : {0.0, 17.3, 6285.0, 1.0e6 + 0.7}) CHECK(std::abs(rec.at(x) - 2.5) <= 1e-12);
}

TEST_CASE("element structure") {
    const auto f = zoo::f1();
    const FprConfig cfg = config_for(f, {0.4, 0.3}, 2);
    const Recoverer rec(f, cfg);
    const ExtReal x(6285.0);
    const auto el = rec.element(std::span<const ExtReal>(&x, 1));
    CHECK(el.node_count() == 9);
    CHECK(el.abscissae.size() == 2);
    // sheared node images sit on the tensor abscissae (r within eps)
    for (std::size_t n = 0; n < el.node_count(); ++n) {
        const auto w = el.local(el.images[n], f.spec);
        const int i = static_cast<int>(n / 3), j = static_cast<int>(n % 3);
        CHECK(std::abs(w[0] - el.abscissae[0][i]) <= 1e-12);
        CHECK(std::abs(w[1] - el.abscissae[1][j]) <= rec.levels().eps);
    }
}

TEST_CASE("f1 accuracy and order at k = 1") {
    const auto f = zoo::f1();
    double prev = 0.0;
    for (double s : {1.0, 0.5}) {
        const Recoverer rec(f, config_for(f, {0.4 * s, 0.3 * s}));
        double err = 0.0;
        for (int i = 0; i < 256; ++i) {
            const double x = 6284.0 + 2.0 * i / 256;
            err = std::max(err, std::abs(rec.at(x) - f.at(x)));
        }
        if (s == 1.0) {
            CHECK(err < 3 * 2.8035e-2);
        } else {
            CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.1));
        }
        prev = err;
    }
}

TEST_CASE("one-shot recovery matches the recoverer") {
    const auto f = zoo::f1();
    const FprConfig cfg = config_for(f, {0.4, 0.3});
    const Recoverer rec(f, cfg);
    const ExtReal x(7000.25);
    CHECK(recover(f, std::span<const ExtReal>(&x, 1), cfg) == rec(std::span<const ExtReal>(&x, 1)));
}

TEST_CASE("periodic axis needs a single cell") {
    const auto f = zoo::f3();
    const Recoverer rec(f, config_for(f, {0.8, 0.3, 0.3}));
    const Region& g = rec.levels().region;
    CHECK(g.hi[1] - g.lo[1] == 1);
}

TEST_CASE("shear removes the slope") {
    const auto f = zoo::f1();
    const ExtReal x(100.0);
    const TorusPoint s = combine(std::span<const ExtReal>(&x, 1), f.spec);
    const std::vector<double> tbar{s.coords[0]};
    const auto w = shear_transform(s, tbar, f.spec);
    CHECK(w[0] == s.coords[0]);
    CHECK(w[1] == doctest::Approx(s.coords[1]));
}

}
