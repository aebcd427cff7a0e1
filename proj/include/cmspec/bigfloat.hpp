// Arbitrary-precision floating scalars over MPFR, plus rectangular complex
// values. Precision is explicit per value; arithmetic requires matching
// precision and never reduces it.
#pragma once

#include <mpfr.h>

#include "cmspec/rational.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace cmspec {

class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits = 64) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
    BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(const BigFloat& o);
    BigFloat& operator=(BigFloat&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~BigFloat() { mpfr_clear(v_); }

    static BigFloat from_rational(const Rational& q, mpfr_prec_t bits);
    static BigFloat from_double(double d, mpfr_prec_t bits);
    static BigFloat from_long(long n, mpfr_prec_t bits);

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    bool is_zero() const { return mpfr_zero_p(v_); }
    int sign() const { return mpfr_sgn(v_); }

    BigFloat operator-() const;
    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) { return binop(a, b, mpfr_add); }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return binop(a, b, mpfr_sub); }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) { return binop(a, b, mpfr_mul); }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
    BigFloat& operator+=(const BigFloat& o) { check_prec(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { check_prec(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { check_prec(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }

    BigFloat abs() const;
    BigFloat sqrt() const;

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // Exponent e with |x| in [2^(e-1), 2^e); only valid for nonzero values.
    mpfr_exp_t exponent() const { return mpfr_get_exp(v_); }
    std::string to_string(size_t digits = 0) const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    using mpfr_binop = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    static BigFloat binop(const BigFloat& a, const BigFloat& b, mpfr_binop fn);
    void check_prec(const BigFloat& o) const {
        if (precision() != o.precision())
            throw std::invalid_argument("BigFloat: mixed precision arithmetic");
    }
    mpfr_t v_;
};

struct BigComplex {
    BigFloat re, im;

    explicit BigComplex(mpfr_prec_t bits = 64) : re(bits), im(bits) {}
    BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {
        if (re.precision() != im.precision())
            throw std::invalid_argument("BigComplex: parts carry different precision");
    }

    static BigComplex from_rational(const Rational& q, mpfr_prec_t bits) {
        return BigComplex(BigFloat::from_rational(q, bits), BigFloat(bits));
    }
    static BigComplex from_doubles(double r, double i, mpfr_prec_t bits) {
        return BigComplex(BigFloat::from_double(r, bits), BigFloat::from_double(i, bits));
    }

    mpfr_prec_t precision() const { return re.precision(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }

    BigComplex operator-() const { return BigComplex(-re, -im); }
    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re + b.re, a.im + b.im);
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re - b.re, a.im - b.im);
    }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b);
    BigComplex& operator+=(const BigComplex& o) { re += o.re; im += o.im; return *this; }
    BigComplex& operator-=(const BigComplex& o) { re -= o.re; im -= o.im; return *this; }

    BigFloat abs() const;
    BigComplex pow_ui(unsigned e) const;

    std::string to_string() const { return re.to_string() + (im.sign() < 0 ? "" : "+") + im.to_string() + "i"; }
};

} // namespace cmspec
