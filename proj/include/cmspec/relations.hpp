// Relation verification and derivation: pairwise commutators, the spectral
// relation checks, the symbol-descent that re-derives relation coefficients,
// the reduction-to-the-plane curve check, and the integrability definition
// spot checks (symbol separation and independence).
#pragma once

#include "cmspec/abstract_poly.hpp"
#include "cmspec/catalog.hpp"
#include "cmspec/numeric_eval.hpp"
#include "cmspec/report.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cmspec {

struct Bound {
    std::string instance; // stable name used in cache keys, e.g. "a2_I12"
    DiffOp op;
};
using Binding = std::map<std::string, Bound>;

// Shared evaluation workspace: oracle environment, thread budget, operator
// memo (in memory, optionally backed by the disk cache).
class Workspace {
public:
    OracleEnv env = OracleEnv::defaults();
    int threads = 1;

    std::function<std::optional<DiffOp>(const std::string&)> cache_load;
    std::function<void(const std::string&, const DiffOp&)> cache_store;

    const DiffOp& memo(const std::string& key, const std::function<DiffOp()>& build);
    bool cached(const std::string& key) const { return mem_.count(key) != 0; }

private:
    std::map<std::string, DiffOp> mem_;
};

// Standard bindings for the two systems. For B2 the generator L is bound to
// half the Hamiltonian.
Binding a2_binding(const std::string& I_instance = "a2_I12",
                   const std::string& J_instance = "a2_I23");
Binding b2_binding();

// Realizes the polynomial as an operator. Operator factors compose in
// generator-list order; g2/g3 exponents become scalar multipliers. Terms are
// grouped by their I/J powers so each group's prefix is evaluated once.
DiffOp evaluate_abstract(const AbstractPoly& p, const Binding& binding, Workspace& ws,
                         const std::string& cache_tag = "");

// ---------------------------------------------------------------------------
// Commutators

struct CommutatorPair {
    std::string a, b;
    bool structural_zero = false;
    OracleOutcome oracle; // empty/pass for structural zeros
    bool passed() const { return structural_zero || oracle.passed(); }
};

struct CommutatorResults {
    std::string system;
    std::vector<CommutatorPair> pairs;
    VerificationReport report;

    const CommutatorPair* find(const std::string& a, const std::string& b) const;
};

CommutatorResults verify_commutators(const std::string& system, Workspace& ws);

// ---------------------------------------------------------------------------
// Relation verification

struct RelationCheck {
    VerificationReport report;
    DiffOp residual;
};

RelationCheck verify_relation(const std::string& check_name, const std::string& system,
                              const AbstractPoly& rel, const Binding& binding, Workspace& ws);

// ---------------------------------------------------------------------------
// Derivation (symbol descent)

struct DescentError : std::runtime_error {
    explicit DescentError(const std::string& what) : std::runtime_error(what) {}
};

struct ExpressResult {
    AbstractPoly poly; // on generators {basis names..., g2, g3}
    VerificationReport report;
    int structural_stages = 0;
    int numeric_stages = 0;
    int splitting_fallbacks = 0; // constant extractions that needed the
                                 // splitting-algebra normal form
};

// Expresses the target as a polynomial in the basis operators and g2, g3 by
// highest-symbol descent. Basis symbols must be structurally constant.
ExpressResult express_in_integrals(const DiffOp& target,
                                   const std::vector<std::pair<std::string, DiffOp>>& basis,
                                   const HalfPeriodAssignment& hp, Workspace& ws,
                                   const std::string& cache_tag = "");

// Elementary-symmetric combinations of the extra integrals. When the
// pairwise commutativity certification fails, products are symmetrized and
// the flag below is set.
struct ElementarySymmetric {
    std::vector<DiffOp> ops;
    bool symmetrized = false;
    std::vector<std::string> notes;
};
ElementarySymmetric derive_elementary_symmetric(const std::string& system, Workspace& ws);

// Derivation target names: A1, A2, A3 (a2) and B1, B2 (b2).
struct DerivationOutcome {
    std::string target;
    AbstractPoly derived;  // on the full system generator list
    AbstractPoly printed;  // transcription of the published formula
    std::vector<std::string> diff; // term-level differences, empty = exact
    ExpressResult express;
    bool exact_match() const { return diff.empty(); }
};
DerivationOutcome run_derivation(const std::string& system, const std::string& target,
                                 Workspace& ws);

// ---------------------------------------------------------------------------
// Reduction to the plane (L2 = 0) and the known curve

struct SvRemarkResult {
    AbstractPoly reduced;        // nu-cubic on {nu, lambda, mu, g2, g3}
    AbstractPoly expected;       // displayed cubic (with -108 g3 mu^2 term)
    AbstractPoly expected_flip;  // published curve (+108 g3) after g3 -> -g3
    bool shift_ok = false;       // nu^2 coefficient vanished
    bool match = false;
    bool match_after_flip = false;
    std::vector<std::string> diff;
    VerificationReport report;
};
SvRemarkResult sv_remark_check();

// ---------------------------------------------------------------------------
// Integrability definition spot checks

struct SeparationResult {
    int orbit_size = 0;
    int distinct_values = 0;
    VerificationReport report;
};
SeparationResult separation_check(const std::string& system, const SymbolPoly& candidate,
                                  std::uint64_t seed = 7);

struct IndependenceResult {
    bool independent = false;
    int rank = 0;
    int expected_rank = 0;
    VerificationReport report;
};
IndependenceResult symbol_independence_check(const std::string& system, std::uint64_t seed = 11);

} // namespace cmspec
