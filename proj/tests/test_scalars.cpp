#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmspec/bigfloat.hpp"
#include "cmspec/rational.hpp"

#include <random>

using namespace cmspec;

namespace {

Rational rand_rational(std::mt19937_64& rng, int span = 50) {
    long num = long(rng() % (2 * unsigned(span) + 1)) - span;
    long den = long(rng() % 23) + 1;
    return Rational(num, den);
}

} // namespace

TEST_CASE("rational arithmetic canonical examples") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK((Rational(3, 2) - Rational(3, 2)).to_string() == "0/1");
    CHECK(Rational(-2, 4).to_string() == "-1/2");
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2)); // sign moves to the numerator
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("rational string round trip") {
    CHECK(Rational::from_string("5/6") == Rational(5, 6));
    CHECK(Rational::from_string("-7") == Rational(-7));
    CHECK(Rational::from_string("4/6") == Rational(2, 3));
    CHECK(Rational(22, 7).to_string() == "22/7");
    CHECK_THROWS(Rational::from_string("not-a-number"));
}

TEST_CASE("rational field axioms on random triples") {
    std::mt19937_64 rng(20240901);
    for (int i = 0; i < 500; ++i) {
        Rational a = rand_rational(rng), b = rand_rational(rng), c = rand_rational(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK(a - a == Rational(0));
        if (!a.is_zero()) CHECK(a * a.inv() == Rational(1));
    }
}

TEST_CASE("rational pow") {
    CHECK(Rational(-2, 3).pow_ui(3) == Rational(-8, 27));
    CHECK(Rational(5).pow_ui(0) == Rational(1));
}

TEST_CASE("bigcomplex arithmetic examples") {
    const mpfr_prec_t bits = 256;
    BigComplex one_i = BigComplex::from_doubles(1, 1, bits);
    BigComplex one_mi = BigComplex::from_doubles(1, -1, bits);
    BigComplex prod = one_i * one_mi;
    CHECK(prod.re.to_double() == doctest::Approx(2.0));
    CHECK(prod.im.is_zero());

    BigComplex z = BigComplex::from_doubles(0.25, -1.5, bits);
    CHECK((z - z).is_zero());

    BigComplex p = BigComplex::from_doubles(3, 4, bits);
    CHECK(p.abs().to_double() == doctest::Approx(5.0));

    CHECK_THROWS_AS(one_i / BigComplex(bits), std::domain_error);
}

TEST_CASE("bigcomplex precision discipline") {
    BigComplex a(128), b(256);
    CHECK_THROWS_AS(a + b, std::invalid_argument);
    BigComplex c = BigComplex::from_rational(Rational(1, 3), 192);
    CHECK(c.precision() == 192);
    CHECK((c + c).precision() == 192);
}

TEST_CASE("conversion is correctly rounded") {
    // exact dyadic rationals convert exactly
    BigFloat four = BigFloat::from_rational(Rational(4), 256);
    CHECK(four.to_double() == 4.0);
    BigFloat third = BigFloat::from_rational(Rational(1, 3), 128);
    CHECK(third.to_double() == doctest::Approx(1.0 / 3.0));
    BigComplex zero = BigComplex::from_rational(Rational(0), 256);
    CHECK(zero.is_zero());
}

TEST_CASE("convert-then-add vs add-then-convert within 2 ulp") {
    std::mt19937_64 rng(7);
    const mpfr_prec_t bits = 192;
    for (int i = 0; i < 300; ++i) {
        Rational a = rand_rational(rng, 1000), b = rand_rational(rng, 1000);
        BigFloat fa = BigFloat::from_rational(a, bits), fb = BigFloat::from_rational(b, bits);
        BigFloat s1 = fa + fb;
        BigFloat s2 = BigFloat::from_rational(a + b, bits);
        BigFloat diff = (s1 - s2).abs();
        if (a.is_zero() && b.is_zero()) {
            CHECK(diff.is_zero());
        } else {
            // 2 ulp at the scale of the inputs (cancellation can make the
            // result arbitrarily smaller than the operands)
            mpfr_exp_t scale = s2.is_zero() ? 0 : s2.exponent();
            if (!fa.is_zero()) scale = std::max(scale, fa.exponent());
            if (!fb.is_zero()) scale = std::max(scale, fb.exponent());
            BigFloat two_ulp(bits);
            mpfr_set_ui_2exp(two_ulp.raw(), 1, scale - bits + 1, MPFR_RNDN);
            CHECK(diff <= two_ulp);
        }
    }
}
