#include "cmspec/relations.hpp"

#include "cmspec/hash.hpp"
#include "cmspec/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace cmspec {

namespace {

long elapsed_ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0)
        .count();
}

std::vector<std::pair<std::string, std::string>> context_echo(const OracleEnv& env) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& c : env.contexts) out.emplace_back(c.g2().to_string(), c.g3().to_string());
    return out;
}

void fill_env_fields(VerificationReport& r, const OracleEnv& env) {
    r.trials = env.trials;
    r.precision_bits = env.precision_bits;
    r.seed = env.seed;
    r.contexts = context_echo(env);
}

} // namespace

const DiffOp& Workspace::memo(const std::string& key, const std::function<DiffOp()>& build) {
    auto it = mem_.find(key);
    if (it != mem_.end()) return it->second;
    if (cache_load) {
        if (auto got = cache_load(key)) return mem_.emplace(key, std::move(*got)).first->second;
    }
    DiffOp v = build();
    if (cache_store) cache_store(key, v);
    return mem_.emplace(key, std::move(v)).first->second;
}

Binding a2_binding(const std::string& I_instance, const std::string& J_instance) {
    auto pick = [](const std::string& inst) -> DiffOp {
        if (inst == "a2_I12") return a2_I(12);
        if (inst == "a2_I23") return a2_I(23);
        if (inst == "a2_I31" || inst == "a2_I13") return a2_I(31);
        throw std::invalid_argument("unknown A2 integral instance: " + inst);
    };
    Binding b;
    b["L1"] = {"a2_L1", a2_L1()};
    b["L2"] = {"a2_L2", a2_L2()};
    b["L3"] = {"a2_L3", a2_L3()};
    b["I"] = {I_instance, pick(I_instance)};
    b["J"] = {J_instance, pick(J_instance)};
    return b;
}

Binding b2_binding() {
    Binding b;
    b["L"] = {"b2_halfL", b2_L().scaled(Rational(1, 2))};
    b["M"] = {"b2_M", b2_M()};
    b["I"] = {"b2_Ix", b2_Ix()};
    b["J"] = {"b2_Iy", b2_Iy()};
    return b;
}

namespace {

const DiffOp& cached_power(Workspace& ws, const Bound& bound, unsigned k) {
    if (k == 1)
        return ws.memo("pow:" + bound.instance + ":1", [&] { return bound.op; });
    const DiffOp& lower = cached_power(ws, bound, k - 1);
    return ws.memo("pow:" + bound.instance + ":" + std::to_string(k),
                   [&] { return op_compose(lower, bound.op, ws.threads); });
}

} // namespace

DiffOp evaluate_abstract(const AbstractPoly& p, const Binding& binding, Workspace& ws,
                         const std::string& cache_tag) {
    const auto& gens = p.generators();
    const int ig2 = p.generator_index("g2");
    const int ig3 = p.generator_index("g3");

    // operator generators, in list order
    std::vector<int> op_gens;
    for (size_t i = 0; i < gens.size(); ++i)
        if (int(i) != ig2 && int(i) != ig3) op_gens.push_back(int(i));

    int n = -1;
    for (const auto& [m, c] : p.terms())
        for (int gi : op_gens)
            if (m[size_t(gi)] > 0) {
                auto it = binding.find(gens[size_t(gi)]);
                if (it == binding.end())
                    throw std::invalid_argument("evaluate_abstract: unbound generator " +
                                                gens[size_t(gi)]);
                if (n < 0)
                    n = it->second.op.vars();
                else if (n != it->second.op.vars())
                    throw std::invalid_argument("evaluate_abstract: mixed variable counts");
            }
    if (n < 0) {
        // pure scalar polynomial (g2/g3 only): realize over the bound system
        if (binding.empty())
            throw std::invalid_argument("evaluate_abstract: no operator factors and empty binding");
        n = binding.begin()->second.op.vars();
    }

    // group terms by the exponents of I and J so each group's prefix operator
    // is assembled once and composed with the cached I/J powers
    std::vector<int> suffix_gens;
    for (const char* nm : {"I", "J"}) {
        int idx = p.generator_index(nm);
        if (idx >= 0 && binding.count(nm)) suffix_gens.push_back(idx);
    }
    std::vector<int> prefix_gens;
    for (int gi : op_gens)
        if (std::find(suffix_gens.begin(), suffix_gens.end(), gi) == suffix_gens.end())
            prefix_gens.push_back(gi);

    std::map<std::vector<int>, AbstractPoly> groups;
    for (const auto& [m, c] : p.terms()) {
        std::vector<int> key;
        for (int gi : suffix_gens) key.push_back(m[size_t(gi)]);
        auto [it, inserted] = groups.emplace(key, AbstractPoly(gens));
        it->second.add_term(m, c);
    }

    DiffOp result(n);
    for (const auto& [suffix_exp, group] : groups) {
        // prefix operator: sum over group terms of scalar * prefix factors
        auto build_prefix = [&]() {
            DiffOp acc(n);
            for (const auto& [m, c] : group.terms()) {
                EllipticPoly scalar = EllipticPoly::constant(c);
                if (ig2 >= 0 && m[size_t(ig2)] > 0) scalar = scalar * EllipticPoly::g2(m[size_t(ig2)]);
                if (ig3 >= 0 && m[size_t(ig3)] > 0) scalar = scalar * EllipticPoly::g3(m[size_t(ig3)]);
                DiffOp term_op = DiffOp::identity(n).scaled(scalar);
                for (int gi : prefix_gens) {
                    int e = m[size_t(gi)];
                    if (e == 0) continue;
                    const DiffOp& pw = cached_power(ws, binding.at(gens[size_t(gi)]), unsigned(e));
                    term_op = op_compose(term_op, pw, ws.threads);
                }
                acc = acc + term_op;
            }
            return acc;
        };

        DiffOp prefix(n);
        if (!cache_tag.empty()) {
            std::string inst;
            for (int gi : prefix_gens)
                if (binding.count(gens[size_t(gi)])) inst += binding.at(gens[size_t(gi)]).instance + ";";
            std::string key = "grp:" + cache_tag + ":" + fnv1a64_hex(group.to_text() + inst);
            prefix = ws.memo(key, build_prefix);
        } else {
            prefix = build_prefix();
        }

        DiffOp term = prefix;
        for (size_t si = 0; si < suffix_gens.size(); ++si) {
            int e = suffix_exp[si];
            if (e == 0) continue;
            const DiffOp& pw =
                cached_power(ws, binding.at(gens[size_t(suffix_gens[si])]), unsigned(e));
            term = op_compose(term, pw, ws.threads);
        }
        result = result + term;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Commutators

const CommutatorPair* CommutatorResults::find(const std::string& a, const std::string& b) const {
    for (const auto& p : pairs)
        if ((p.a == a && p.b == b) || (p.a == b && p.b == a)) return &p;
    return nullptr;
}

CommutatorResults verify_commutators(const std::string& system, Workspace& ws) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, DiffOp>> ops;
    if (system == "a2") {
        ops = {{"L1", a2_L1()},   {"L2", a2_L2()},   {"L3", a2_L3()},
               {"I12", a2_I(12)}, {"I23", a2_I(23)}, {"I31", a2_I(31)}};
    } else if (system == "b2") {
        ops = {{"L", b2_L()}, {"M", b2_M()}, {"Ix", b2_Ix()}, {"Iy", b2_Iy()}};
    } else {
        throw std::invalid_argument("unknown system: " + system);
    }

    CommutatorResults out;
    out.system = system;
    VerificationReport& r = out.report;
    r.check = "commutators";
    r.system = system;
    fill_env_fields(r, ws.env);

    int n = ops.front().second.vars();
    for (size_t i = 0; i < ops.size(); ++i) {
        for (size_t j = i + 1; j < ops.size(); ++j) {
            const std::string key = "comm:" + system + ":" + ops[i].first + ":" + ops[j].first;
            const DiffOp& c = ws.memo(key, [&] {
                return op_commutator(ops[i].second, ops[j].second, ws.threads);
            });
            CommutatorPair pair;
            pair.a = ops[i].first;
            pair.b = ops[j].first;
            pair.structural_zero = c.is_zero();
            if (!pair.structural_zero) {
                std::vector<std::pair<std::string, const EllipticPoly*>> coeffs;
                for (const auto& [m, poly] : c.terms())
                    coeffs.emplace_back(multi_to_string(m), &poly);
                pair.oracle = certify_vanishing(ws.env, n, coeffs);
                // keep the worst coefficient of this pair in the report detail
                CoeffDetail d;
                d.coefficient_multiindex = "[" + pair.a + "," + pair.b + "]";
                d.max_ratio = pair.oracle.max_ratio;
                for (const auto& co : pair.oracle.details)
                    if (co.max_ratio == pair.oracle.max_ratio) {
                        d.coefficient_multiindex += " " + co.label;
                        d.point_index = co.point_index;
                        d.context_index = co.context_index;
                        break;
                    }
                r.details.push_back(d);
                r.max_residual_ratio = std::max(r.max_residual_ratio, pair.oracle.max_ratio);
                r.max_abs_residual = std::max(r.max_abs_residual, pair.oracle.max_abs_residual);
                r.witness_scale = std::max(r.witness_scale, pair.oracle.witness_scale);
            }
            r.notes.push_back("[" + pair.a + "," + pair.b + "] " +
                              (pair.structural_zero
                                   ? "structurally zero"
                                   : pair.oracle.status +
                                         " (ratio " + std::to_string(pair.oracle.max_ratio) + ")"));
            out.pairs.push_back(std::move(pair));
        }
    }
    bool any_inconclusive = false, all_pass = true;
    for (const auto& p : out.pairs) {
        if (!p.structural_zero && p.oracle.status == "inconclusive") any_inconclusive = true;
        if (!p.passed()) all_pass = false;
    }
    r.status = any_inconclusive ? "inconclusive" : (all_pass ? "pass" : "fail");
    r.elapsed_ms = elapsed_ms_since(t0);
    return out;
}

// ---------------------------------------------------------------------------
// Relation verification

RelationCheck verify_relation(const std::string& check_name, const std::string& system,
                              const AbstractPoly& rel, const Binding& binding, Workspace& ws) {
    auto t0 = std::chrono::steady_clock::now();
    RelationCheck out;
    out.residual = evaluate_abstract(rel, binding, ws, check_name);

    VerificationReport& r = out.report;
    r.check = check_name;
    r.system = system;
    fill_env_fields(r, ws.env);

    std::vector<std::pair<std::string, const EllipticPoly*>> coeffs;
    for (const auto& [m, poly] : out.residual.terms()) coeffs.emplace_back(multi_to_string(m), &poly);
    if (coeffs.empty()) {
        r.status = "pass";
        r.notes.push_back("residual is structurally zero");
    } else {
        OracleOutcome oc = certify_vanishing(ws.env, out.residual.vars(), coeffs);
        r.status = oc.status;
        r.max_residual_ratio = oc.max_ratio;
        r.max_abs_residual = oc.max_abs_residual;
        r.witness_scale = oc.witness_scale;
        for (const auto& co : oc.details) {
            CoeffDetail d;
            d.coefficient_multiindex = co.label;
            d.max_ratio = co.max_ratio;
            d.point_index = co.point_index;
            d.context_index = co.context_index;
            r.details.push_back(d);
        }
        r.notes.push_back("residual operator: order " + std::to_string(out.residual.order()) +
                          ", " + std::to_string(out.residual.term_count()) + " coefficients");
    }
    r.elapsed_ms = elapsed_ms_since(t0);
    return out;
}

} // namespace cmspec
