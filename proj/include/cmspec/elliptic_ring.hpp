// Normal-form polynomials in Weierstrass symbols P(a) = wp(a), Pp(a) = wp'(a)
// over integer linear arguments a, with invariant generators g2, g3.
//
// Normal form: Pp-exponents stay <= 1 (Pp^2 rewrites to 4P^3 - g2 P - g3) and
// second and higher derivatives of wp never appear (constructors rewrite
// wp'' as 6P^2 - g2/2). Equality is structural modulo these rules; identities
// that additionally need addition theorems are certified numerically.
#pragma once

#include "cmspec/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmspec {

using ArgVec = std::vector<int>;
using ArgId = std::uint8_t;

// Canonical sign: first nonzero entry positive. Returned parity is -1 when
// the vector was negated (callers flip Pp coefficients; P is even).
std::pair<ArgVec, int> canonicalize_argument(const ArgVec& raw);

// Process-wide intern table for canonical argument vectors.
ArgId intern_argument(const ArgVec& canonical);
const ArgVec& argument_vec(ArgId id);
bool argument_content_less(ArgId a, ArgId b);
std::string argument_to_string(ArgId id);

// One multiplicative term: product of P(arg)^p, Pp(arg)^{0|1} over at most
// kMaxArgs distinct arguments, times g2^g2e g3^g3e. 16 bytes, trivially
// copyable; slot order is ascending ArgId and unused slots are zero so the
// default lexicographic comparison is a valid total order.
struct Monomial {
    static constexpr int kMaxArgs = 6;

    std::array<std::uint8_t, kMaxArgs> arg{};
    std::array<std::uint8_t, kMaxArgs> p{};
    std::uint8_t ppmask = 0;
    std::uint8_t nargs = 0;
    std::uint8_t g2e = 0, g3e = 0;

    auto operator<=>(const Monomial&) const = default;

    bool is_constant() const { return nargs == 0; }
    int weight() const;
    int max_vars() const;

    std::string to_string() const;
};

class EllipticPoly;
using GExp = std::array<std::int16_t, 2>; // (g2 exponent, g3 exponent)

// Commutative polynomial in g2, g3 with rational coefficients.
class GPoly {
public:
    GPoly() = default;
    static GPoly constant(const Rational& c);
    static GPoly g2(int e = 1);
    static GPoly g3(int e = 1);

    void add_term(const GExp& m, const Rational& c);
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<GExp, Rational>& terms() const { return terms_; }

    GPoly operator-() const;
    friend GPoly operator+(const GPoly& a, const GPoly& b);
    friend GPoly operator-(const GPoly& a, const GPoly& b);
    friend GPoly operator*(const GPoly& a, const GPoly& b);
    GPoly scaled(const Rational& c) const;
    GPoly pow(unsigned e) const;
    friend bool operator==(const GPoly& a, const GPoly& b) { return a.terms_ == b.terms_; }

    EllipticPoly to_elliptic() const;
    Rational eval(const Rational& g2v, const Rational& g3v) const;
    std::string to_string() const;

private:
    std::map<GExp, Rational> terms_;
};

// Polynomial in the half-period values e1, e2, e3 and g2, g3.
// Key layout: (e1, e2, e3, g2, g3) exponents.
using EExp = std::array<std::int16_t, 5>;

class EPoly {
public:
    EPoly() = default;
    static EPoly e(int which, int exp = 1); // which in {0,1,2}
    static EPoly constant(const Rational& c);

    void add_term(const EExp& m, const Rational& c);
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<EExp, Rational>& terms() const { return terms_; }

    EPoly operator-() const;
    friend EPoly operator+(const EPoly& a, const EPoly& b);
    friend EPoly operator-(const EPoly& a, const EPoly& b);
    friend EPoly operator*(const EPoly& a, const EPoly& b);
    EPoly scaled(const Rational& c) const;
    EPoly pow(unsigned e) const;
    friend bool operator==(const EPoly& a, const EPoly& b) { return a.terms_ == b.terms_; }

    EPoly permuted(const std::array<int, 3>& perm) const; // e_i -> e_perm[i]
    bool is_symmetric() const;
    // p - (1/6) * sum over all six permutations; structurally zero iff symmetric.
    EPoly asymmetric_part() const;

    std::optional<int> weighted_degree() const; // e:2, g2:4, g3:6; nullopt = inhomogeneous

    std::string to_string() const;

private:
    std::map<EExp, Rational> terms_;
};

struct NonSymmetricError : std::runtime_error {
    explicit NonSymmetricError(EPoly rem)
        : std::runtime_error("EPoly not symmetric under permutations of e1,e2,e3"),
          remainder(std::move(rem)) {}
    EPoly remainder;
};

// Rewrites a structurally symmetric EPoly through elementary symmetric
// polynomials with sigma1 = 0, sigma2 = -g2/4, sigma3 = g3/4 (Vieta for
// 4z^3 - g2 z - g3). Throws NonSymmetricError otherwise.
GPoly reduce_symmetric(const EPoly& p);

// Normal form in the splitting algebra of 4z^3 - g2 z - g3 with labelled
// roots: e3 := -(e1+e2), e2^2 := g2/4 - e1^2 - e1 e2, e1^3 := (g2 e1 + g3)/4.
// The result involves only e1^a e2^b with a <= 2, b <= 1.
EPoly splitting_normal_form(const EPoly& p);

// Constant extraction: returns the g2/g3 polynomial when the splitting
// normal form carries no residual root dependence.
std::optional<GPoly> extract_invariant(const EPoly& p);

// Argument -> which root (0,1,2) it takes at the chosen half-period point.
using HalfPeriodAssignment = std::map<ArgId, int>;

class EllipticPoly {
public:
    EllipticPoly() = default;

    static EllipticPoly zero() { return {}; }
    static EllipticPoly constant(const Rational& c);
    static EllipticPoly g2(int e = 1);
    static EllipticPoly g3(int e = 1);
    // wp(raw) and wp'(raw); raw is canonicalized, Pp picks up parity.
    static EllipticPoly P(const ArgVec& raw, int exp = 1);
    static EllipticPoly Pp(const ArgVec& raw);
    // wp''(raw) rewritten at construction: 6 P(raw)^2 - g2/2.
    static EllipticPoly wp2(const ArgVec& raw);
    static EllipticPoly from_gpoly(const GPoly& g) { return g.to_elliptic(); }

    void add_term(const Monomial& m, const Rational& c);
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    // nullptr when absent
    const Rational* coeff(const Monomial& m) const;

    EllipticPoly operator-() const;
    friend EllipticPoly operator+(const EllipticPoly& a, const EllipticPoly& b);
    friend EllipticPoly operator-(const EllipticPoly& a, const EllipticPoly& b);
    friend EllipticPoly operator*(const EllipticPoly& a, const EllipticPoly& b);
    EllipticPoly& operator+=(const EllipticPoly& o);
    EllipticPoly& operator-=(const EllipticPoly& o);
    EllipticPoly scaled(const Rational& c) const;
    EllipticPoly pow(unsigned e) const;
    friend bool operator==(const EllipticPoly& a, const EllipticPoly& b) {
        return a.terms_ == b.terms_;
    }

    // d/dx_var with the chain rule; wp'' arising from d(Pp) is rewritten.
    EllipticPoly differentiate(int var) const;

    // Relabels variables: x_i -> x_{perm[i]}. Arguments re-canonicalize and
    // Pp factors pick up parity signs.
    EllipticPoly permute_variables(const std::vector<int>& perm) const;

    // Pp factors vanish, P(a) -> e_{hp[a]}; throws on uncovered arguments.
    EPoly specialize_half_periods(const HalfPeriodAssignment& hp) const;

    // True when no P/Pp factor appears (g2, g3 and rationals are constants).
    bool is_structurally_constant() const;
    // Valid only when is_structurally_constant().
    GPoly constant_part() const;

    std::optional<int> weighted_degree() const; // P:2, Pp:3, g2:4, g3:6
    std::vector<std::pair<Monomial, int>> inhomogeneous_witness() const;

    // Largest variable index mentioned by any argument (-1 for constants).
    int max_var() const;
    std::vector<ArgId> arguments() const;

    // Canonical text form, one term per line, content-ordered.
    std::string to_text() const;
    static EllipticPoly from_text(const std::string& text);

    std::string to_string() const; // single-line human form

private:
    std::map<Monomial, Rational> terms_;
};

// All distinct arguments used by a set of polynomials.
std::vector<ArgId> collect_arguments(const std::vector<const EllipticPoly*>& polys);

} // namespace cmspec
