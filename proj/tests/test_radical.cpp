#include "friendsim/radical.hpp"

#include "friendsim/error.hpp"
#include "support/properties.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace friendsim;

namespace {

RadicalScalar r(long long p, long long q = 1) { return RadicalScalar(Rational(p, q)); }
RadicalScalar root(long long q_num, long long q_den, std::uint64_t n) {
    return RadicalScalar::monomial(Rational(q_num, q_den), n);
}

ErrorCode code_of(auto &&fn) {
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::SyntaxError;
}

}  // namespace

TEST_SUITE("radical") {

TEST_CASE("canonical text") {
    CHECK(r(0).str() == "0");
    CHECK(r(-3, 6).str() == "-1/2");
    CHECK(sqrt_int(2).str() == "sqrt(2)");
    CHECK(root(-1, 6, 3).str() == "-1/6*sqrt(3)");
    CHECK((r(1, 2) + root(-1, 6, 3)).str() == "1/2 - 1/6*sqrt(3)");
    CHECK((root(1, 2, 2) + r(1)).str() == "1 + 1/2*sqrt(2)");
}

TEST_CASE("radicands reduce to squarefree form") {
    CHECK(sqrt_int(8) == root(2, 1, 2));
    CHECK(sqrt_int(12) == root(2, 1, 3));
    CHECK(sqrt_int(49) == r(7));
    CHECK(sqrt_int(0).is_zero());
    CHECK(sqrt_int(1) == r(1));
    CHECK(RadicalScalar::monomial(Rational(1, 3), 18) == sqrt_int(2));
    const auto s = split_square(360);  // 360 = 6^2 * 10
    CHECK(s.root == 6);
    CHECK(s.squarefree == 10);
    CHECK(is_squarefree(30));
    CHECK_FALSE(is_squarefree(12));
}

TEST_CASE("sqrt(n) squared is n") {
    for (std::uint64_t n = 0; n <= 10000; ++n) {
        const auto s = sqrt_int(n);
        REQUIRE_MESSAGE(s * s == r(static_cast<long long>(n)), "n = " << n);
        REQUIRE(std::abs(s.to_double() - std::sqrt(static_cast<double>(n))) < 1e-9);
    }
}

TEST_CASE("products of radicals") {
    CHECK(sqrt_int(6) * sqrt_int(10) == root(2, 1, 15));
    CHECK(sqrt_int(2) * sqrt_int(2) == r(2));
    CHECK(sqrt_int(3) * sqrt_int(5) == sqrt_int(15));
    // (1 + sqrt 2)(1 - sqrt 2) = -1
    CHECK((r(1) + sqrt_int(2)) * (r(1) - sqrt_int(2)) == r(-1));
    CHECK(mul(sqrt_int(2), sqrt_int(3)) == sqrt_int(6));
    CHECK(add(sqrt_int(2), sqrt_int(2)) == root(2, 1, 2));
}

TEST_CASE("distinct radicals stay independent") {
    const auto x = sqrt_int(2) + sqrt_int(3);
    CHECK(x.terms().size() == 2);
    CHECK_FALSE(x.is_monomial());
    CHECK_FALSE(x.is_rational());
    CHECK_FALSE(x.rational_value().has_value());
    CHECK(r(3, 4).rational_value() == Rational(3, 4));
}

TEST_CASE("square roots of rationals") {
    CHECK(RadicalScalar::sqrt_rational(Rational(2, 3)) == root(1, 3, 6));
    CHECK(RadicalScalar::sqrt_rational(Rational(1, 4)) == r(1, 2));
    CHECK(RadicalScalar::sqrt_rational(Rational(1, 12)) == root(1, 6, 3));
    CHECK(code_of([] { RadicalScalar::sqrt_rational(Rational(-1)); }) == ErrorCode::NonMonomialNorm);
}

TEST_CASE("monomial inversion") {
    CHECK(invert_monomial(root(1, 3, 3)) == sqrt_int(3));  // (1/sqrt 3)^-1
    CHECK(root(2, 5, 6).invert_monomial() * root(2, 5, 6) == r(1));
    CHECK(r(-4).invert_monomial() == r(-1, 4));
    CHECK(code_of([] { (r(1) + sqrt_int(2)).invert_monomial(); }) == ErrorCode::NotMonomial);
    CHECK(code_of([] { RadicalScalar().invert_monomial(); }) == ErrorCode::NotMonomial);
}

TEST_CASE("radicand overflow is reported") {
    // Two primes just above 2^32; their product exceeds 64 bits.
    const auto a = sqrt_int(4294967311ULL);
    const auto b = sqrt_int(4294967357ULL);
    CHECK(code_of([&] { (void)(a * b); }) == ErrorCode::Overflow);
    // Shared factors cancel through the gcd and stay in range.
    CHECK(a * a == r(4294967311LL));
}

TEST_CASE("float conversion") {
    CHECK(to_float(root(1, 6, 3)) == doctest::Approx(std::sqrt(3.0) / 6));
    CHECK((r(1, 2) - root(1, 6, 3)).to_double() == doctest::Approx(0.5 - std::sqrt(3.0) / 6));
    CHECK(rational_str(Rational(-7, 21)) == "-1/3");
}

TEST_CASE("rationals past 64 bits") {
    const Rational big(std::numeric_limits<std::int64_t>::max());
    const Rational huge = big * big;
    CHECK(huge.str() == "85070591730234615847396907784232501249");
    CHECK(huge / big == big);
    CHECK(huge - huge == Rational(0));
    CHECK((huge + 1) - huge == Rational(1));
    CHECK(Rational(1) / huge < Rational(1, std::numeric_limits<std::int64_t>::max()));
    CHECK(-huge < Rational(0));
    CHECK(Rational(std::numeric_limits<std::int64_t>::min()).str() == "-9223372036854775808");
    CHECK(Rational(std::numeric_limits<std::uint64_t>::max()).str() == "18446744073709551615");
    CHECK(Rational(BigInt(6), BigInt(-4)) == Rational(-3, 2));
    CHECK(huge.to_double() == doctest::Approx(8.507059173023462e37));
    // Doubling 3*2^61 leaves int64; dividing by 4 comes back.
    const Rational x(std::int64_t{3} << 61);
    CHECK((x + x).str() == "13835058055282163712");
    CHECK((x + x) / 4 == Rational(std::int64_t{3} << 60));
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("ring axioms on random scalars") {
    const auto report = oracle::check_ring_axioms(20000, 0xF00D);
    CHECK_MESSAGE(report.ok(), report.first_failure);
    CHECK(report.cases == 20000);
}

}
