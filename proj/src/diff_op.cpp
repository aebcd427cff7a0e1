#include "cmspec/diff_op.hpp"

#include "cmspec/hash.hpp"
#include "cmspec/parallel.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <sstream>

namespace cmspec {

namespace {
std::function<void(size_t, size_t)> g_progress;
std::mutex g_progress_mu;
} // namespace

void set_compose_progress(std::function<void(size_t, size_t)> cb) {
    std::lock_guard lk(g_progress_mu);
    g_progress = std::move(cb);
}

std::string fnv1a64_hex(const std::string& data) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(data);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

int multi_order(const MultiIndex& a) {
    int s = 0;
    for (int v : a) s += v;
    return s;
}

std::string multi_to_string(const MultiIndex& a) {
    std::string s = "[";
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + "]";
}

// ---------------------------------------------------------------------------
// SymbolPoly

void SymbolPoly::add_term(const MultiIndex& m, const EllipticPoly& c) {
    if (c.is_zero()) return;
    if (int(m.size()) != n_) throw std::invalid_argument("SymbolPoly: bad multi-index length");
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int SymbolPoly::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, multi_order(m));
    return d;
}

SymbolPoly operator+(const SymbolPoly& a, const SymbolPoly& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("SymbolPoly: mixed variable counts");
    SymbolPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

SymbolPoly operator-(const SymbolPoly& a, const SymbolPoly& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("SymbolPoly: mixed variable counts");
    SymbolPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
}

SymbolPoly operator*(const SymbolPoly& a, const SymbolPoly& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("SymbolPoly: mixed variable counts");
    SymbolPoly r(a.n_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            MultiIndex m(a.n_);
            for (int i = 0; i < a.n_; ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

SymbolPoly SymbolPoly::scaled(const Rational& c) const {
    SymbolPoly r(n_);
    for (const auto& [m, v] : terms_) r.add_term(m, v.scaled(c));
    return r;
}

SymbolPoly SymbolPoly::pow(unsigned e) const {
    SymbolPoly r(n_);
    r.add_term(MultiIndex(n_, 0), EllipticPoly::constant(Rational(1)));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

Rational SymbolPoly::eval(const std::vector<Rational>& xi, const Rational& g2v,
                          const Rational& g3v) const {
    Rational acc;
    for (const auto& [m, c] : terms_) {
        if (!c.is_structurally_constant())
            throw std::domain_error("SymbolPoly::eval: non-constant coefficient");
        Rational v = c.constant_part().eval(g2v, g3v);
        for (int i = 0; i < n_; ++i)
            if (m[i]) v *= xi[size_t(i)].pow_ui(unsigned(m[i]));
        acc += v;
    }
    return acc;
}

SymbolPoly SymbolPoly::differentiate(int var) const {
    SymbolPoly r(n_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        MultiIndex d = m;
        d[var] -= 1;
        r.add_term(d, c.scaled(Rational(m[var])));
    }
    return r;
}

std::string SymbolPoly::to_string(const std::string& var) const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(" + c.to_string() + ")";
        for (int i = 0; i < n_; ++i)
            if (m[i]) {
                s += " " + var + std::to_string(i + 1);
                if (m[i] > 1) s += "^" + std::to_string(m[i]);
            }
    }
    return s;
}

SymbolConstancy symbol_is_constant_structural(const SymbolPoly& s) {
    for (const auto& [m, c] : s.terms()) {
        if (!c.is_structurally_constant()) {
            SymbolConstancy r;
            r.constant = false;
            r.structural = false;
            r.witness = "xi^" + multi_to_string(m) + " coefficient " + c.to_string();
            return r;
        }
    }
    return {true, true, ""};
}

// ---------------------------------------------------------------------------
// DiffOp

DiffOp DiffOp::identity(int n) {
    DiffOp r(n);
    r.add_term(MultiIndex(n, 0), EllipticPoly::constant(Rational(1)));
    return r;
}

DiffOp DiffOp::partial(int n, int var, int order) {
    DiffOp r(n);
    MultiIndex m(n, 0);
    m[var] = order;
    r.add_term(m, EllipticPoly::constant(Rational(1)));
    return r;
}

int DiffOp::order() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, multi_order(m));
    return d;
}

const EllipticPoly* DiffOp::coeff(const MultiIndex& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? nullptr : &it->second;
}

void DiffOp::add_term(const MultiIndex& m, const EllipticPoly& c) {
    if (int(m.size()) != n_) throw std::invalid_argument("DiffOp: bad multi-index length");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

DiffOp DiffOp::operator-() const {
    DiffOp r(n_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("DiffOp: mixed variable counts");
    DiffOp r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("DiffOp: mixed variable counts");
    DiffOp r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
}

DiffOp DiffOp::scaled(const Rational& c) const {
    DiffOp r(n_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v.scaled(c));
    return r;
}

DiffOp DiffOp::scaled(const EllipticPoly& c) const {
    DiffOp r(n_);
    for (const auto& [m, v] : terms_) r.add_term(m, c * v);
    return r;
}

DiffOp DiffOp::permute_variables(const std::vector<int>& perm) const {
    if (int(perm.size()) != n_) throw std::invalid_argument("permute_variables: bad permutation");
    DiffOp r(n_);
    for (const auto& [m, c] : terms_) {
        MultiIndex moved(n_, 0);
        for (int i = 0; i < n_; ++i) moved[perm[i]] = m[i];
        r.add_term(moved, c.permute_variables(perm));
    }
    return r;
}

SymbolPoly DiffOp::principal_symbol() const {
    if (terms_.empty()) throw std::domain_error("principal_symbol: zero operator");
    int d = order();
    SymbolPoly s(n_);
    for (const auto& [m, c] : terms_)
        if (multi_order(m) == d) s.add_term(m, c);
    return s;
}

std::optional<int> DiffOp::weighted_degree() const {
    std::optional<int> w;
    for (const auto& [m, c] : terms_) {
        auto cw = c.weighted_degree();
        if (!cw) return std::nullopt;
        int tw = multi_order(m) + *cw;
        if (!w)
            w = tw;
        else if (*w != tw)
            return std::nullopt;
    }
    return terms_.empty() ? std::optional<int>(0) : w;
}

std::vector<ArgId> DiffOp::arguments() const {
    std::vector<const EllipticPoly*> polys;
    for (const auto& [m, c] : terms_) polys.push_back(&c);
    return collect_arguments(polys);
}

// ---------------------------------------------------------------------------
// Composition

namespace {

unsigned long binom_ul(int n, int k) {
    if (k < 0 || k > n) return 0;
    unsigned long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (unsigned long)(n - k + i) / (unsigned long)i;
    return r;
}

Rational multi_binom(const MultiIndex& a, const MultiIndex& g) {
    unsigned long r = 1;
    for (size_t i = 0; i < a.size(); ++i) r *= binom_ul(a[i], g[i]);
    return Rational(long(r));
}

// All gamma <= alpha componentwise.
void enumerate_down(const MultiIndex& alpha, const std::function<void(const MultiIndex&)>& fn) {
    MultiIndex g(alpha.size(), 0);
    for (;;) {
        fn(g);
        size_t i = 0;
        while (i < g.size()) {
            if (g[i] < alpha[i]) {
                ++g[i];
                break;
            }
            g[i] = 0;
            ++i;
        }
        if (i == g.size()) return;
    }
}

} // namespace

DiffOp op_compose(const DiffOp& a, const DiffOp& b, int threads) {
    if (a.vars() != b.vars()) throw std::invalid_argument("op_compose: mixed variable counts");
    const int n = a.vars();
    DiffOp result(n);
    if (a.is_zero() || b.is_zero()) return result;

    // left plan: per term, the list of (gamma, binomial) pairs
    struct LeftTerm {
        const MultiIndex* alpha;
        const EllipticPoly* coeff;
        std::vector<std::pair<MultiIndex, Rational>> downs;
    };
    std::vector<LeftTerm> lefts;
    lefts.reserve(a.terms().size());
    std::map<MultiIndex, unsigned> needed; // gamma -> first-seen marker
    for (const auto& [alpha, f] : a.terms()) {
        LeftTerm lt{&alpha, &f, {}};
        enumerate_down(alpha, [&](const MultiIndex& g) {
            lt.downs.emplace_back(g, multi_binom(alpha, g));
            needed.emplace(g, 0);
        });
        lefts.push_back(std::move(lt));
    }
    // graded order so gamma - e_i precedes gamma
    std::vector<MultiIndex> gammas;
    gammas.reserve(needed.size());
    for (const auto& [g, _] : needed) gammas.push_back(g);
    std::sort(gammas.begin(), gammas.end(), [](const MultiIndex& x, const MultiIndex& y) {
        int ox = multi_order(x), oy = multi_order(y);
        if (ox != oy) return ox < oy;
        return x < y;
    });

    std::vector<std::pair<const MultiIndex*, const EllipticPoly*>> rights;
    for (const auto& [beta, g] : b.terms()) rights.emplace_back(&beta, &g);

    std::function<void(size_t, size_t)> progress;
    {
        std::lock_guard lk(g_progress_mu);
        progress = g_progress;
    }

    std::vector<DiffOp> partial(rights.size(), DiffOp(n));
    std::atomic<size_t> done{0};
    parallel_for(rights.size(), threads, [&](size_t j) {
        const MultiIndex& beta = *rights[j].first;
        const EllipticPoly& g0 = *rights[j].second;
        // derivative table for this right coefficient
        std::map<MultiIndex, EllipticPoly> table;
        table.emplace(MultiIndex(size_t(n), 0), g0);
        for (const MultiIndex& g : gammas) {
            if (table.count(g)) continue;
            int i = 0;
            while (g[size_t(i)] == 0) ++i;
            MultiIndex prev = g;
            prev[size_t(i)] -= 1;
            table.emplace(g, table.at(prev).differentiate(i));
        }
        DiffOp& out = partial[j];
        for (const auto& lt : lefts) {
            for (const auto& [gamma, binom] : lt.downs) {
                const EllipticPoly& dg = table.at(gamma);
                if (dg.is_zero()) continue;
                MultiIndex delta(size_t(n), 0);
                for (int i = 0; i < n; ++i) delta[size_t(i)] = (*lt.alpha)[size_t(i)] - gamma[size_t(i)] + beta[size_t(i)];
                EllipticPoly prod = (*lt.coeff) * dg;
                if (binom != Rational(1)) prod = prod.scaled(binom);
                out.add_term(delta, prod);
            }
        }
        size_t d = done.fetch_add(1) + 1;
        if (progress) progress(d, rights.size());
    });
    for (const auto& p : partial)
        for (const auto& [m, c] : p.terms()) result.add_term(m, c);
    return result;
}

DiffOp op_commutator(const DiffOp& a, const DiffOp& b, int threads) {
    return op_compose(a, b, threads) - op_compose(b, a, threads);
}

DiffOp op_power(const DiffOp& a, unsigned k, int threads) {
    if (k == 0) throw std::invalid_argument("op_power: exponent must be >= 1");
    DiffOp r = a;
    for (unsigned i = 1; i < k; ++i) r = op_compose(r, a, threads);
    return r;
}

// ---------------------------------------------------------------------------
// Serialization

std::string DiffOp::serialize(const std::vector<std::string>& var_names) const {
    std::vector<std::string> names = var_names;
    if (names.empty())
        for (int i = 0; i < n_; ++i) names.push_back("x" + std::to_string(i + 1));
    std::string body;
    for (const auto& [m, c] : terms_) {
        std::istringstream lines(c.to_text());
        std::string line;
        while (std::getline(lines, line))
            if (!line.empty()) body += "D" + multi_to_string(m) + " " + line + "\n";
    }
    std::string header = "cmspec-diffop v1\nn " + std::to_string(n_) + "\nvars";
    for (const auto& nm : names) header += " " + nm;
    header += "\n";
    return header + body + "hash " + fnv1a64_hex(body) + "\n";
}

DiffOp DiffOp::deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "cmspec-diffop v1")
        throw std::invalid_argument("DiffOp::deserialize: bad header");
    if (!std::getline(in, line) || line.rfind("n ", 0) != 0)
        throw std::invalid_argument("DiffOp::deserialize: missing variable count");
    int n = std::stoi(line.substr(2));
    if (!std::getline(in, line) || line.rfind("vars", 0) != 0)
        throw std::invalid_argument("DiffOp::deserialize: missing variable names");

    DiffOp r(n);
    std::string body;
    bool saw_hash = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("hash ", 0) == 0) {
            std::string expect = line.substr(5);
            if (expect != fnv1a64_hex(body))
                throw std::runtime_error("DiffOp::deserialize: integrity hash mismatch");
            saw_hash = true;
            break;
        }
        body += line + "\n";
        if (line.rfind("D[", 0) != 0) throw std::invalid_argument("bad term line: " + line);
        size_t close = line.find(']');
        MultiIndex m;
        {
            std::string nums = line.substr(2, close - 2);
            std::istringstream ns(nums);
            std::string tok;
            while (std::getline(ns, tok, ',')) m.push_back(std::stoi(tok));
        }
        if (int(m.size()) != n) throw std::invalid_argument("bad multi-index length: " + line);
        EllipticPoly c = EllipticPoly::from_text(line.substr(close + 2));
        r.add_term(m, c);
    }
    if (!saw_hash) throw std::runtime_error("DiffOp::deserialize: missing integrity hash");
    return r;
}

std::string DiffOp::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += "\n";
        s += "D" + multi_to_string(m) + " : " + c.to_string();
    }
    return s;
}

} // namespace cmspec
