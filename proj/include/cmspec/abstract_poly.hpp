// Commutative polynomials in named generators (L1, L2, L3, I, ... plus g2,
// g3) with exact rational coefficients: the language in which relation
// coefficients like A1 or B2 are written, derived and compared.
#pragma once

#include "cmspec/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cmspec {

class AbstractPoly {
public:
    AbstractPoly() = default;
    explicit AbstractPoly(std::vector<std::string> gens) : gens_(std::move(gens)) {}

    static AbstractPoly constant(const std::vector<std::string>& gens, const Rational& c);
    static AbstractPoly generator(const std::vector<std::string>& gens, const std::string& name,
                                  int exp = 1);

    const std::vector<std::string>& generators() const { return gens_; }
    int generator_index(const std::string& name) const; // -1 when absent
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    const std::map<std::vector<int>, Rational>& terms() const { return terms_; }
    void add_term(const std::vector<int>& m, const Rational& c);
    Rational coeff(const std::vector<int>& m) const;

    AbstractPoly operator-() const;
    friend AbstractPoly operator+(const AbstractPoly& a, const AbstractPoly& b);
    friend AbstractPoly operator-(const AbstractPoly& a, const AbstractPoly& b);
    friend AbstractPoly operator*(const AbstractPoly& a, const AbstractPoly& b);
    AbstractPoly scaled(const Rational& c) const;
    AbstractPoly pow(unsigned e) const;
    friend bool operator==(const AbstractPoly& a, const AbstractPoly& b) {
        return a.gens_ == b.gens_ && a.terms_ == b.terms_;
    }

    // Replaces every occurrence of the generator by a polynomial on the same
    // generator list.
    AbstractPoly substituted(const std::string& name, const AbstractPoly& value) const;
    // Requires the generator to occur in even powers only; each squared
    // occurrence becomes `square_value`. Throws std::domain_error otherwise.
    AbstractPoly substituted_square(const std::string& name, const AbstractPoly& square_value) const;
    // Re-expresses the polynomial on another generator list (by names); the
    // target must contain every generator this polynomial actually uses.
    AbstractPoly on_generators(const std::vector<std::string>& gens) const;

    std::optional<int> weighted_degree(const std::map<std::string, int>& weights) const;
    std::vector<std::pair<std::vector<int>, int>> weight_census(
        const std::map<std::string, int>& weights) const;

    std::string to_string() const;
    // Canonical one-term-per-line form used for golden files.
    std::string to_text() const;
    static AbstractPoly from_text(const std::vector<std::string>& gens, const std::string& text);

private:
    std::vector<std::string> gens_;
    std::map<std::vector<int>, Rational> terms_;

    void check_compatible(const AbstractPoly& o) const;
};

// Term-level difference: monomials whose coefficients differ between a and b,
// rendered as "monomial: lhs vs rhs" lines. Empty means exact equality.
std::vector<std::string> abstract_diff(const AbstractPoly& a, const AbstractPoly& b);

// Generator name lists and grading weights for the two systems.
std::vector<std::string> a2_generators(); // L1 L2 L3 I J g2 g3
std::vector<std::string> b2_generators(); // L M I J g2 g3
std::map<std::string, int> a2_weights();
std::map<std::string, int> b2_weights();

struct A2Coefficients {
    AbstractPoly X, Y, A1, A2, A3;
};
// Expanded polynomials in L1, L2, L3, g2, g3 (on the a2 generator list).
A2Coefficients build_A_coefficients();

struct B2Coefficients {
    AbstractPoly B1, B2;
    // rows of B2 that break weight-20 homogeneity, as printed
    std::vector<std::string> inhomogeneous_terms;
};
B2Coefficients build_B_coefficients();

// Relation polynomials, fully expanded on the system generator lists.
AbstractPoly a2_cubic_relation(const A2Coefficients& A);                // I^3 + A1 I^2 + A2 I + A3
AbstractPoly a2_pair_relation(const A2Coefficients& A);                 // I^2 + IJ + J^2 + A1(I+J) + A2
AbstractPoly b2_quartic_relation(const AbstractPoly& B1, const AbstractPoly& B2); // I^4 + B1 I^2 + B2
AbstractPoly b2_sum_relation(const AbstractPoly& B1);                   // I^2 + J^2 + B1

} // namespace cmspec
