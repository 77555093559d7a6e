#include <random>

#include "doctest.h"
#include "oracle.hpp"

#include "fpr/ext_real.hpp"

using namespace fpr;
using oracle::big;

namespace {

double rel_err(const ExtReal& v, const big& ref) {
    return oracle::to_d(boost::multiprecision::abs((oracle::from(v) - ref) / ref));
}

}  // namespace

TEST_SUITE("ext_real") {

TEST_CASE("constants carry about 32 digits") {
    CHECK(rel_err(constants::sqrt2(), oracle::sqrt_of(2)) < 1e-31);
    CHECK(rel_err(constants::sqrt3(), oracle::sqrt_of(3)) < 1e-31);
    CHECK(rel_err(constants::sqrt5(), oracle::sqrt_of(5)) < 1e-31);
    CHECK(rel_err(constants::pi(), oracle::pi()) < 1e-31);
    CHECK(rel_err(constants::two_pi(), 2 * oracle::pi()) < 1e-31);
    CHECK(rel_err(constants::golden(), oracle::golden()) < 1e-31);
}

TEST_CASE("sqrt and division") {
    CHECK(rel_err(sqrt(ExtReal(7.0)), oracle::sqrt_of(7)) < 1e-30);
    CHECK(rel_err(ExtReal(1.0) / ExtReal(3.0), big(1) / 3) < 1e-31);
}

TEST_CASE("frac(sqrt2 * 1136689) against the oracle") {
    const ExtReal f = frac(mul_int(constants::sqrt2(), 1136689));
    const big ref = oracle::frac(oracle::sqrt_of(2) * 1136689);
    CHECK(std::abs(f.to_double() - oracle::to_d(ref)) < 1e-24);
    CHECK(f.to_double() <= 1e-6);
}

TEST_CASE("mul_int is exact") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> t(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t k = t(rng);
        const ExtReal p = mul_int(constants::pi(), k);
        const big ref = oracle::from(constants::pi()) * k;
        CHECK(oracle::to_d(boost::multiprecision::abs(oracle::from(p) - ref)) <= std::abs(p.hi) * 0x1p-104);
    }
}

TEST_CASE("frac stays in [0,1) and wraps negatives") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> t(-1'000'000'000'000, 1'000'000'000'000);
    for (int i = 0; i < 500; ++i) {
        const std::int64_t k = t(rng);
        const ExtReal f = frac(mul_int(constants::sqrt3(), k));
        CHECK(f.hi >= 0.0);
        CHECK(f.hi < 1.0);
        const big ref = oracle::frac(oracle::sqrt_of(3) * k);
        CHECK(std::abs(f.to_double() - oracle::to_d(ref)) < 1e-15);
    }
    CHECK(frac(ExtReal(-0.25)).to_double() == 0.75);
    CHECK(frac_double(ExtReal(3.0)) == 0.0);
}

TEST_CASE("parse keeps digits beyond double") {
    const ExtReal v = ExtReal::parse("1.4142135623730950488016887242096980785697");
    CHECK(rel_err(v, oracle::sqrt_of(2)) < 1e-31);
    CHECK(ExtReal::parse("-3.5e-7").to_double() == -3.5e-7);
    CHECK(ExtReal::parse("42") == ExtReal(42.0));
    CHECK_THROWS(ExtReal::parse("abc"));
}

TEST_CASE("to_string round trip") {
    const ExtReal v = constants::pi();
    CHECK(rel_err(ExtReal::parse(v.to_string(34)), oracle::pi()) < 1e-31);
    CHECK(ExtReal(1.0e6).to_string(10).find('1') != std::string::npos);
}

}
