#include "cmspec/bigfloat.hpp"

#include <cstdio>
#include <vector>

namespace cmspec {

BigFloat& BigFloat::operator=(const BigFloat& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat BigFloat::from_rational(const Rational& q, mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_set_q(r.v_, q.raw().get_mpq_t(), MPFR_RNDN);
    return r;
}

BigFloat BigFloat::from_double(double d, mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_set_d(r.v_, d, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::from_long(long n, mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_set_si(r.v_, n, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::operator-() const {
    BigFloat r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::binop(const BigFloat& a, const BigFloat& b, mpfr_binop fn) {
    a.check_prec(b);
    BigFloat r(a.precision());
    fn(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    a.check_prec(b);
    if (b.is_zero()) throw std::domain_error("BigFloat: division by zero");
    BigFloat r(a.precision());
    mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

BigFloat BigFloat::abs() const {
    BigFloat r(precision());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::sqrt() const {
    BigFloat r(precision());
    mpfr_sqrt(r.v_, v_, MPFR_RNDN);
    return r;
}

std::string BigFloat::to_string(size_t digits) const {
    if (digits == 0) digits = size_t(precision() * 0.30103) + 2;
    std::vector<char> buf(digits + 32);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", int(digits), v_);
    return std::string(buf.data());
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
    BigFloat n = b.re * b.re + b.im * b.im;
    if (n.is_zero()) throw std::domain_error("BigComplex: division by zero");
    return BigComplex((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
}

BigFloat BigComplex::abs() const {
    BigFloat r(precision());
    mpfr_hypot(r.raw(), re.raw(), im.raw(), MPFR_RNDN);
    return r;
}

BigComplex BigComplex::pow_ui(unsigned e) const {
    BigComplex acc(precision());
    acc.re = BigFloat::from_long(1, precision());
    BigComplex base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1u;
    }
    return acc;
}

} // namespace cmspec
