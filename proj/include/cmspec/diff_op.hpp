// Linear differential operators in n variables with EllipticPoly
// coefficients: composition by the generalized Leibniz rule, commutators,
// powers, principal symbols, canonical text serialization.
#pragma once

#include "cmspec/elliptic_ring.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cmspec {

using MultiIndex = std::vector<int>;

int multi_order(const MultiIndex& a);
std::string multi_to_string(const MultiIndex& a);

// Polynomial in the covariables xi_1..xi_n (commutative); the principal part
// of an operator, and the arithmetic used by symbol matching.
class SymbolPoly {
public:
    explicit SymbolPoly(int n = 0) : n_(n) {}

    int vars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<MultiIndex, EllipticPoly>& terms() const { return terms_; }
    void add_term(const MultiIndex& m, const EllipticPoly& c);
    int degree() const; // max total degree

    friend SymbolPoly operator+(const SymbolPoly& a, const SymbolPoly& b);
    friend SymbolPoly operator-(const SymbolPoly& a, const SymbolPoly& b);
    friend SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b);
    SymbolPoly scaled(const Rational& c) const;
    SymbolPoly pow(unsigned e) const;
    friend bool operator==(const SymbolPoly& a, const SymbolPoly& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    // Requires structurally constant coefficients.
    Rational eval(const std::vector<Rational>& xi, const Rational& g2v, const Rational& g3v) const;
    SymbolPoly differentiate(int var) const;

    std::string to_string(const std::string& var = "xi") const;

private:
    int n_;
    std::map<MultiIndex, EllipticPoly> terms_;
};

class DiffOp {
public:
    explicit DiffOp(int n = 0) : n_(n) {}

    static DiffOp identity(int n);
    // c * d^order/dx_var^order
    static DiffOp partial(int n, int var, int order = 1);

    int vars() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    int order() const; // max |alpha|; -1 for the zero operator
    size_t term_count() const { return terms_.size(); }
    const std::map<MultiIndex, EllipticPoly>& terms() const { return terms_; }
    const EllipticPoly* coeff(const MultiIndex& m) const;

    void add_term(const MultiIndex& m, const EllipticPoly& c);

    DiffOp operator-() const;
    friend DiffOp operator+(const DiffOp& a, const DiffOp& b);
    friend DiffOp operator-(const DiffOp& a, const DiffOp& b);
    DiffOp scaled(const Rational& c) const;
    DiffOp scaled(const EllipticPoly& c) const; // left multiplication by a function
    friend bool operator==(const DiffOp& a, const DiffOp& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

    DiffOp permute_variables(const std::vector<int>& perm) const;

    SymbolPoly principal_symbol() const; // throws on the zero operator

    std::optional<int> weighted_degree() const; // d/dx: 1, P: 2, Pp: 3, g2: 4, g3: 6
    std::vector<ArgId> arguments() const;

    // Canonical serialization: header, sorted term lines, integrity hash.
    std::string serialize(const std::vector<std::string>& var_names = {}) const;
    static DiffOp deserialize(const std::string& text);

    std::string to_string() const;

private:
    int n_ = 0;
    std::map<MultiIndex, EllipticPoly> terms_;
};

// (f d^a) o (g d^b) = sum_{c <= a} binom(a,c) f (d^c g) d^(a-c+b).
// Parallelizes over right-operand terms; results are exact, hence identical
// for every thread count.
DiffOp op_compose(const DiffOp& a, const DiffOp& b, int threads = 1);

DiffOp op_commutator(const DiffOp& a, const DiffOp& b, int threads = 1);

// Left fold a o a o ... o a.
DiffOp op_power(const DiffOp& a, unsigned k, int threads = 1);

struct SymbolConstancy {
    bool constant = false;
    bool structural = false; // true when every coefficient is already P/Pp-free
    std::string witness;     // offending coefficient, when not constant
};

// Structural test only; the numeric path lives with the relation machinery,
// which owns an oracle environment.
SymbolConstancy symbol_is_constant_structural(const SymbolPoly& s);

// Progress callback for long compositions: (done, total) term blocks.
void set_compose_progress(std::function<void(size_t, size_t)> cb);

} // namespace cmspec
