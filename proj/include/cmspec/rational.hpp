// Exact rational scalars over GMP. Canonical form (reduced, positive
// denominator, zero as 0/1) is enforced at construction so equality is
// structural everywhere above this layer.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cmspec {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    static Rational from_string(const std::string& text);

    const mpq_class& raw() const { return v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    Rational pow_ui(unsigned long e) const;
    Rational abs() const { return Rational(mpq_class(::abs(v_))); }
    Rational inv() const;

    // Canonical text form "num/den", e.g. "-1/2", "0/1".
    std::string to_string() const;

    double to_double() const { return v_.get_d(); }

private:
    mpq_class v_;
};

// Deterministic total order usable as a map comparator.
struct RationalLess {
    bool operator()(const Rational& a, const Rational& b) const { return a < b; }
};

} // namespace cmspec
