// High-precision numeric evaluation of Weierstrass wp/wp' from (g2, g3) via
// the Laurent recurrence, e-root extraction, deterministic sample points, and
// the vanishing oracle that certifies identities the normal form cannot close
// (addition-theorem cancellations).
//
// Periods are never computed: everything is evaluated on a small disc around
// the origin where the Laurent series converges, which suffices for analytic
// identities. Convergence is certified empirically per point and cross-checked
// by the defining ODE residual.
#pragma once

#include "cmspec/bigfloat.hpp"
#include "cmspec/elliptic_ring.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cmspec {

struct NonConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class EllipticContext {
public:
    EllipticContext(Rational g2, Rational g3, long precision_bits,
                    int series_terms = 260, double sample_scale = 0.2);

    const Rational& g2() const { return g2_; }
    const Rational& g3() const { return g3_; }
    long precision_bits() const { return bits_; }
    double sample_scale() const { return scale_; }
    const BigComplex& g2c() const { return g2c_; }
    const BigComplex& g3c() const { return g3c_; }

    // Laurent coefficient c_k of wp = z^-2 + sum_{k>=2} c_k z^(2k-2).
    const Rational& laurent_coeff(size_t k) const { return coeffs_.at(k); }
    size_t series_terms() const { return coeffs_.size(); }

    // wp(z) and wp'(z); throws NonConvergenceError when the tail fails to
    // pass the decay test within the precomputed budget.
    BigComplex wp(const BigComplex& z) const;
    BigComplex wp_prime(const BigComplex& z) const;

    // |wp'^2 - 4wp^3 + g2 wp + g3| / witness at z; used for certification.
    double ode_residual_ratio(const BigComplex& z) const;

    std::string describe() const;

private:
    struct WpPair {
        BigComplex wp, wpp;
    };
    WpPair eval_series(const BigComplex& z) const;
    friend struct SamplePoint;

    Rational g2_, g3_;
    long bits_;
    double scale_;
    BigComplex g2c_, g3c_;
    std::vector<Rational> coeffs_;   // index k, valid from k = 2
    std::vector<BigFloat> coeffs_f_; // same, rounded to precision
};

// Validates the discriminant g2^3 - 27 g3^2 != 0.
bool nondegenerate(const Rational& g2, const Rational& g3);

// Deterministic roots of 4z^3 - g2 z - g3 = 0, sorted by (re, im).
std::array<BigComplex, 3> solve_e_roots(const EllipticContext& ctx);

struct SamplePoint {
    std::vector<BigComplex> x;
    // wp/wp' per argument, precomputed at construction
    std::map<ArgId, std::pair<BigComplex, BigComplex>> cache;

    BigComplex argument_value(ArgId id) const;
};

// Deterministic pseudo-random assignments with |x_i| in [0.02, 0.06] and all
// listed argument values of modulus in [0.01, sample_scale]; every argument
// additionally passes the series convergence and ODE residual tests.
std::vector<SamplePoint> sample_points(const EllipticContext& ctx, int n_vars,
                                       const std::vector<ArgId>& args, int count,
                                       std::uint64_t seed);

struct EvalResult {
    BigComplex value;
    BigFloat witness; // sum of |monomial contribution|; always >= |value|
};

EvalResult eval_elliptic_poly(const EllipticContext& ctx, const EllipticPoly& p,
                              const SamplePoint& pt);

BigComplex eval_gpoly(const EllipticContext& ctx, const GPoly& p);
EvalResult eval_epoly(const EllipticContext& ctx, const EPoly& p,
                      const std::array<BigComplex, 3>& roots);

// ---------------------------------------------------------------------------
// Vanishing oracle

struct OracleEnv {
    std::vector<EllipticContext> contexts;
    int trials = 3;
    std::uint64_t seed = 1;
    long precision_bits = 256;
    int threads = 1;

    static OracleEnv defaults(long precision_bits = 256, int trials = 3,
                              std::uint64_t seed = 1, int threads = 1);
};

struct CoeffOutcome {
    std::string label;
    double max_ratio = 0.0;
    double max_abs = 0.0;
    double witness = 0.0;
    int point_index = -1;
    int context_index = -1;
};

struct OracleOutcome {
    // "pass", "fail" or "inconclusive"
    std::string status = "pass";
    double max_ratio = 0.0;
    double max_abs_residual = 0.0;
    double witness_scale = 0.0;
    std::vector<CoeffOutcome> details;

    bool passed() const { return status == "pass"; }
};

// Certifies |value| <= witness * 2^-(precision_bits/2) for every labelled
// coefficient at every sample point of every context.
OracleOutcome certify_vanishing(const OracleEnv& env, int n_vars,
                                const std::vector<std::pair<std::string, const EllipticPoly*>>& coeffs);

// Certifies that p takes the same value at every sample point (per context);
// when `claimed` is given, additionally checks agreement with its exact value.
struct ConstancyOutcome {
    bool constant = false;
    bool inconclusive = false;
    double max_ratio = 0.0;
};
ConstancyOutcome certify_constant(const OracleEnv& env, int n_vars, const EllipticPoly& p,
                                  const GPoly* claimed);

} // namespace cmspec
