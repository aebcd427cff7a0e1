#include "cmspec/elliptic_ring.hpp"

#include <algorithm>
#include <cassert>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace cmspec {

namespace {

struct ArgTable {
    std::vector<ArgVec> vecs;
    std::shared_mutex mu;

    static ArgTable& instance() {
        static ArgTable t;
        return t;
    }
};

// Comparison used for canonical (content-based) term ordering in output.
bool argvec_less(const ArgVec& a, const ArgVec& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

std::pair<ArgVec, int> canonicalize_argument(const ArgVec& raw) {
    auto it = std::find_if(raw.begin(), raw.end(), [](int c) { return c != 0; });
    if (it == raw.end())
        throw std::domain_error("argument is the zero vector (wp has a pole at lattice points)");
    if (*it > 0) return {raw, +1};
    ArgVec neg(raw.size());
    std::transform(raw.begin(), raw.end(), neg.begin(), [](int c) { return -c; });
    return {neg, -1};
}

ArgId intern_argument(const ArgVec& canonical) {
    auto& t = ArgTable::instance();
    {
        std::shared_lock lk(t.mu);
        for (size_t i = 0; i < t.vecs.size(); ++i)
            if (t.vecs[i] == canonical) return ArgId(i);
    }
    std::unique_lock lk(t.mu);
    for (size_t i = 0; i < t.vecs.size(); ++i)
        if (t.vecs[i] == canonical) return ArgId(i);
    if (t.vecs.size() >= 255) throw std::length_error("argument table full");
    t.vecs.push_back(canonical);
    return ArgId(t.vecs.size() - 1);
}

const ArgVec& argument_vec(ArgId id) {
    auto& t = ArgTable::instance();
    std::shared_lock lk(t.mu);
    return t.vecs.at(id);
}

bool argument_content_less(ArgId a, ArgId b) {
    if (a == b) return false;
    return argvec_less(argument_vec(a), argument_vec(b));
}

std::string argument_to_string(ArgId id) {
    const ArgVec& v = argument_vec(id);
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s + "]";
}

int Monomial::weight() const {
    int w = 4 * g2e + 6 * g3e;
    for (int i = 0; i < nargs; ++i) {
        w += 2 * p[i];
        if (ppmask & (1u << i)) w += 3;
    }
    return w;
}

int Monomial::max_vars() const {
    int n = 0;
    for (int i = 0; i < nargs; ++i) n = std::max<int>(n, int(argument_vec(arg[i]).size()));
    return n;
}

std::string Monomial::to_string() const {
    std::vector<int> order(nargs);
    for (int i = 0; i < nargs; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return argument_content_less(arg[a], arg[b]); });
    std::string s;
    auto emit = [&s](const std::string& f) {
        if (!s.empty()) s += " ";
        s += f;
    };
    if (g2e > 0) emit(g2e == 1 ? "g2" : "g2^" + std::to_string(g2e));
    if (g3e > 0) emit(g3e == 1 ? "g3" : "g3^" + std::to_string(g3e));
    for (int i : order) {
        if (p[i] > 0)
            emit("P" + argument_to_string(arg[i]) + (p[i] == 1 ? "" : "^" + std::to_string(p[i])));
        if (ppmask & (1u << i)) emit("Pp" + argument_to_string(arg[i]));
    }
    if (s.empty()) s = "1";
    return s;
}

// ---------------------------------------------------------------------------
// GPoly

GPoly GPoly::constant(const Rational& c) {
    GPoly r;
    r.add_term({0, 0}, c);
    return r;
}

GPoly GPoly::g2(int e) {
    GPoly r;
    r.add_term({std::int16_t(e), 0}, Rational(1));
    return r;
}

GPoly GPoly::g3(int e) {
    GPoly r;
    r.add_term({0, std::int16_t(e)}, Rational(1));
    return r;
}

void GPoly::add_term(const GExp& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

GPoly GPoly::operator-() const {
    GPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

GPoly operator+(const GPoly& a, const GPoly& b) {
    GPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

GPoly operator-(const GPoly& a, const GPoly& b) {
    GPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
}

GPoly operator*(const GPoly& a, const GPoly& b) {
    GPoly r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            r.add_term({std::int16_t(ma[0] + mb[0]), std::int16_t(ma[1] + mb[1])}, ca * cb);
    return r;
}

GPoly GPoly::scaled(const Rational& c) const {
    GPoly r;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

GPoly GPoly::pow(unsigned e) const {
    GPoly r = GPoly::constant(Rational(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

EllipticPoly GPoly::to_elliptic() const {
    EllipticPoly r;
    for (const auto& [m, c] : terms_) {
        Monomial mono;
        mono.g2e = std::uint8_t(m[0]);
        mono.g3e = std::uint8_t(m[1]);
        r.add_term(mono, c);
    }
    return r;
}

Rational GPoly::eval(const Rational& g2v, const Rational& g3v) const {
    Rational acc;
    for (const auto& [m, c] : terms_)
        acc += c * g2v.pow_ui(m[0]) * g3v.pow_ui(m[1]);
    return acc;
}

std::string GPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += c.to_string();
        if (m[0] > 0) s += " g2" + (m[0] == 1 ? "" : "^" + std::to_string(m[0]));
        if (m[1] > 0) s += " g3" + (m[1] == 1 ? "" : "^" + std::to_string(m[1]));
    }
    return s;
}

// ---------------------------------------------------------------------------
// EPoly

EPoly EPoly::e(int which, int exp) {
    EPoly r;
    EExp m{};
    m[which] = std::int16_t(exp);
    r.add_term(m, Rational(1));
    return r;
}

EPoly EPoly::constant(const Rational& c) {
    EPoly r;
    r.add_term({0, 0, 0, 0, 0}, c);
    return r;
}

void EPoly::add_term(const EExp& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

EPoly EPoly::operator-() const {
    EPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

EPoly operator+(const EPoly& a, const EPoly& b) {
    EPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

EPoly operator-(const EPoly& a, const EPoly& b) {
    EPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
}

EPoly operator*(const EPoly& a, const EPoly& b) {
    EPoly r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            EExp m;
            for (int i = 0; i < 5; ++i) m[i] = std::int16_t(ma[i] + mb[i]);
            r.add_term(m, ca * cb);
        }
    return r;
}

EPoly EPoly::scaled(const Rational& c) const {
    EPoly r;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

EPoly EPoly::pow(unsigned e) const {
    EPoly r = EPoly::constant(Rational(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

EPoly EPoly::permuted(const std::array<int, 3>& perm) const {
    EPoly r;
    for (const auto& [m, c] : terms_) {
        EExp n{};
        for (int i = 0; i < 3; ++i) n[perm[i]] = m[i];
        n[3] = m[3];
        n[4] = m[4];
        r.add_term(n, c);
    }
    return r;
}

bool EPoly::is_symmetric() const { return asymmetric_part().is_zero(); }

EPoly EPoly::asymmetric_part() const {
    static const std::array<std::array<int, 3>, 6> all = {{{0, 1, 2},
                                                           {0, 2, 1},
                                                           {1, 0, 2},
                                                           {1, 2, 0},
                                                           {2, 0, 1},
                                                           {2, 1, 0}}};
    EPoly sym;
    for (const auto& perm : all) sym = sym + permuted(perm);
    return *this - sym.scaled(Rational(1, 6));
}

std::optional<int> EPoly::weighted_degree() const {
    std::optional<int> w;
    for (const auto& [m, c] : terms_) {
        int tw = 2 * (m[0] + m[1] + m[2]) + 4 * m[3] + 6 * m[4];
        if (!w)
            w = tw;
        else if (*w != tw)
            return std::nullopt;
    }
    return terms_.empty() ? std::optional<int>(0) : w;
}

std::string EPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    static const char* names[5] = {"e1", "e2", "e3", "g2", "g3"};
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += c.to_string();
        for (int i = 0; i < 5; ++i)
            if (m[i] != 0) {
                s += std::string(" ") + names[i];
                if (m[i] != 1) s += "^" + std::to_string(m[i]);
            }
    }
    return s;
}

GPoly reduce_symmetric(const EPoly& p) {
    EPoly asym = p.asymmetric_part();
    if (!asym.is_zero()) throw NonSymmetricError(std::move(asym));

    static const EPoly sigma1 = EPoly::e(0) + EPoly::e(1) + EPoly::e(2);
    static const EPoly sigma2 =
        EPoly::e(0) * EPoly::e(1) + EPoly::e(0) * EPoly::e(2) + EPoly::e(1) * EPoly::e(2);
    static const EPoly sigma3 = EPoly::e(0) * EPoly::e(1) * EPoly::e(2);

    EPoly q = p;
    GPoly out;
    while (!q.is_zero()) {
        auto lead = std::prev(q.terms().end());
        const EExp m = lead->first;
        const Rational c = lead->second;
        int a = m[0], b = m[1], cc = m[2];
        if (a == 0 && b == 0 && cc == 0) {
            out.add_term({m[3], m[4]}, c);
            q.add_term(m, -c);
            continue;
        }
        assert(a >= b && b >= cc);
        EPoly expansion = sigma1.pow(a - b) * sigma2.pow(b - cc) * sigma3.pow(cc);
        // attach the g2^m3 g3^m4 carried by the leading term
        EPoly shifted;
        for (const auto& [em, ec] : expansion.terms()) {
            EExp n = em;
            n[3] = std::int16_t(n[3] + m[3]);
            n[4] = std::int16_t(n[4] + m[4]);
            shifted.add_term(n, ec);
        }
        q = q - shifted.scaled(c);
        if (a == b) {
            // sigma1 -> 0 absent, sigma2 -> -g2/4, sigma3 -> g3/4
            Rational v = c * Rational(-1, 4).pow_ui(b - cc) * Rational(1, 4).pow_ui(cc);
            out.add_term({std::int16_t(m[3] + (b - cc)), std::int16_t(m[4] + cc)}, v);
        }
    }
    return out;
}

EPoly splitting_normal_form(const EPoly& p) {
    // e3 -> -(e1 + e2)
    EPoly q;
    for (const auto& [m, c] : p.terms()) {
        EPoly t = EPoly::constant(c);
        {
            EExp base{m[0], m[1], 0, m[3], m[4]};
            EPoly b;
            b.add_term(base, Rational(1));
            t = t * b;
        }
        if (m[2] > 0) {
            EPoly sum = (EPoly::e(0) + EPoly::e(1)).scaled(Rational(-1));
            t = t * sum.pow(m[2]);
        }
        q = q + t;
    }
    // e2^2 -> g2/4 - e1^2 - e1 e2
    for (;;) {
        auto it = std::find_if(q.terms().begin(), q.terms().end(),
                               [](const auto& kv) { return kv.first[1] >= 2; });
        if (it == q.terms().end()) break;
        EExp m = it->first;
        Rational c = it->second;
        q.add_term(m, -c);
        EExp r1{m[0], std::int16_t(m[1] - 2), 0, std::int16_t(m[3] + 1), m[4]};
        EExp r2{std::int16_t(m[0] + 2), std::int16_t(m[1] - 2), 0, m[3], m[4]};
        EExp r3{std::int16_t(m[0] + 1), std::int16_t(m[1] - 1), 0, m[3], m[4]};
        q.add_term(r1, c * Rational(1, 4));
        q.add_term(r2, -c);
        q.add_term(r3, -c);
    }
    // e1^3 -> (g2 e1 + g3)/4
    for (;;) {
        auto it = std::find_if(q.terms().begin(), q.terms().end(),
                               [](const auto& kv) { return kv.first[0] >= 3; });
        if (it == q.terms().end()) break;
        EExp m = it->first;
        Rational c = it->second;
        q.add_term(m, -c);
        EExp r1{std::int16_t(m[0] - 2), m[1], 0, std::int16_t(m[3] + 1), m[4]};
        EExp r2{std::int16_t(m[0] - 3), m[1], 0, m[3], std::int16_t(m[4] + 1)};
        q.add_term(r1, c * Rational(1, 4));
        q.add_term(r2, c * Rational(1, 4));
    }
    return q;
}

std::optional<GPoly> extract_invariant(const EPoly& p) {
    EPoly nf = splitting_normal_form(p);
    GPoly out;
    for (const auto& [m, c] : nf.terms()) {
        if (m[0] != 0 || m[1] != 0 || m[2] != 0) return std::nullopt;
        out.add_term({m[3], m[4]}, c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// EllipticPoly

namespace {

struct WorkSlot {
    ArgId arg;
    int p;
    int pp;
};

struct WorkMon {
    std::vector<WorkSlot> slots; // ascending arg id
    int g2e = 0, g3e = 0;
};

WorkMon unpack(const Monomial& m) {
    WorkMon w;
    w.g2e = m.g2e;
    w.g3e = m.g3e;
    w.slots.reserve(m.nargs);
    for (int i = 0; i < m.nargs; ++i)
        w.slots.push_back({m.arg[i], int(m.p[i]), (m.ppmask >> i) & 1});
    return w;
}

Monomial pack(const WorkMon& w) {
    Monomial m;
    int k = 0;
    for (const auto& s : w.slots) {
        if (s.p == 0 && s.pp == 0) continue;
        if (k >= Monomial::kMaxArgs) throw std::length_error("monomial exceeds argument capacity");
        if (s.p > 255) throw std::overflow_error("monomial exponent overflow");
        m.arg[k] = s.arg;
        m.p[k] = std::uint8_t(s.p);
        if (s.pp) m.ppmask |= std::uint8_t(1u << k);
        ++k;
    }
    m.nargs = std::uint8_t(k);
    if (w.g2e > 255 || w.g3e > 255) throw std::overflow_error("monomial exponent overflow");
    m.g2e = std::uint8_t(w.g2e);
    m.g3e = std::uint8_t(w.g3e);
    return m;
}

// Rewrites Pp(a)^2 -> 4 P(a)^3 - g2 P(a) - g3 until every pp <= 1.
void reduce_into(WorkMon w, const Rational& c, EllipticPoly& out) {
    for (size_t i = 0; i < w.slots.size(); ++i) {
        if (w.slots[i].pp >= 2) {
            w.slots[i].pp -= 2;
            {
                WorkMon w1 = w;
                w1.slots[i].p += 3;
                reduce_into(std::move(w1), c * Rational(4), out);
            }
            {
                WorkMon w2 = w;
                w2.slots[i].p += 1;
                w2.g2e += 1;
                reduce_into(std::move(w2), -c, out);
            }
            {
                WorkMon w3 = w;
                w3.g3e += 1;
                reduce_into(std::move(w3), -c, out);
            }
            return;
        }
    }
    out.add_term(pack(w), c);
}

// Merge of two packed monomials; returns false when a Pp collision requires
// the rewrite path.
bool try_merge(const Monomial& a, const Monomial& b, Monomial& out) {
    Monomial m;
    int ia = 0, ib = 0, k = 0;
    while (ia < a.nargs || ib < b.nargs) {
        if (k >= Monomial::kMaxArgs) throw std::length_error("monomial exceeds argument capacity");
        bool takeA = ib >= b.nargs || (ia < a.nargs && a.arg[ia] < b.arg[ib]);
        bool takeB = ia >= a.nargs || (ib < b.nargs && b.arg[ib] < a.arg[ia]);
        if (takeA) {
            m.arg[k] = a.arg[ia];
            m.p[k] = a.p[ia];
            if (a.ppmask & (1u << ia)) m.ppmask |= std::uint8_t(1u << k);
            ++ia;
        } else if (takeB) {
            m.arg[k] = b.arg[ib];
            m.p[k] = b.p[ib];
            if (b.ppmask & (1u << ib)) m.ppmask |= std::uint8_t(1u << k);
            ++ib;
        } else {
            int pa = a.p[ia] + b.p[ib];
            int ppa = ((a.ppmask >> ia) & 1) + ((b.ppmask >> ib) & 1);
            if (ppa >= 2) return false;
            if (pa > 255) throw std::overflow_error("monomial exponent overflow");
            m.arg[k] = a.arg[ia];
            m.p[k] = std::uint8_t(pa);
            if (ppa) m.ppmask |= std::uint8_t(1u << k);
            ++ia;
            ++ib;
        }
        ++k;
    }
    m.nargs = std::uint8_t(k);
    int g2e = a.g2e + b.g2e, g3e = a.g3e + b.g3e;
    if (g2e > 255 || g3e > 255) throw std::overflow_error("monomial exponent overflow");
    m.g2e = std::uint8_t(g2e);
    m.g3e = std::uint8_t(g3e);
    out = m;
    return true;
}

WorkMon merge_work(const Monomial& a, const Monomial& b) {
    WorkMon wa = unpack(a), wb = unpack(b);
    WorkMon m;
    m.g2e = wa.g2e + wb.g2e;
    m.g3e = wa.g3e + wb.g3e;
    size_t ia = 0, ib = 0;
    while (ia < wa.slots.size() || ib < wb.slots.size()) {
        if (ib >= wb.slots.size() || (ia < wa.slots.size() && wa.slots[ia].arg < wb.slots[ib].arg))
            m.slots.push_back(wa.slots[ia++]);
        else if (ia >= wa.slots.size() || wb.slots[ib].arg < wa.slots[ia].arg)
            m.slots.push_back(wb.slots[ib++]);
        else {
            m.slots.push_back(
                {wa.slots[ia].arg, wa.slots[ia].p + wb.slots[ib].p, wa.slots[ia].pp + wb.slots[ib].pp});
            ++ia;
            ++ib;
        }
    }
    return m;
}

} // namespace

EllipticPoly EllipticPoly::constant(const Rational& c) {
    EllipticPoly r;
    r.add_term(Monomial{}, c);
    return r;
}

EllipticPoly EllipticPoly::g2(int e) {
    EllipticPoly r;
    Monomial m;
    m.g2e = std::uint8_t(e);
    r.add_term(m, Rational(1));
    return r;
}

EllipticPoly EllipticPoly::g3(int e) {
    EllipticPoly r;
    Monomial m;
    m.g3e = std::uint8_t(e);
    r.add_term(m, Rational(1));
    return r;
}

EllipticPoly EllipticPoly::P(const ArgVec& raw, int exp) {
    auto [canon, parity] = canonicalize_argument(raw);
    (void)parity; // wp is even
    EllipticPoly r;
    Monomial m;
    m.arg[0] = intern_argument(canon);
    m.p[0] = std::uint8_t(exp);
    m.nargs = 1;
    r.add_term(m, Rational(1));
    return r;
}

EllipticPoly EllipticPoly::Pp(const ArgVec& raw) {
    auto [canon, parity] = canonicalize_argument(raw);
    EllipticPoly r;
    Monomial m;
    m.arg[0] = intern_argument(canon);
    m.ppmask = 1;
    m.nargs = 1;
    r.add_term(m, Rational(parity));
    return r;
}

EllipticPoly EllipticPoly::wp2(const ArgVec& raw) {
    return P(raw, 2).scaled(Rational(6)) - g2().scaled(Rational(1, 2));
}

void EllipticPoly::add_term(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

const Rational* EllipticPoly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? nullptr : &it->second;
}

EllipticPoly EllipticPoly::operator-() const {
    EllipticPoly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

EllipticPoly operator+(const EllipticPoly& a, const EllipticPoly& b) {
    EllipticPoly r = a;
    r += b;
    return r;
}

EllipticPoly operator-(const EllipticPoly& a, const EllipticPoly& b) {
    EllipticPoly r = a;
    r -= b;
    return r;
}

EllipticPoly& EllipticPoly::operator+=(const EllipticPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

EllipticPoly& EllipticPoly::operator-=(const EllipticPoly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

EllipticPoly operator*(const EllipticPoly& a, const EllipticPoly& b) {
    EllipticPoly r;
    Monomial merged;
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            Rational c = ca * cb;
            if (try_merge(ma, mb, merged))
                r.add_term(merged, c);
            else
                reduce_into(merge_work(ma, mb), c, r);
        }
    }
    return r;
}

EllipticPoly EllipticPoly::scaled(const Rational& c) const {
    EllipticPoly r;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

EllipticPoly EllipticPoly::pow(unsigned e) const {
    EllipticPoly r = EllipticPoly::constant(Rational(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

EllipticPoly EllipticPoly::differentiate(int var) const {
    EllipticPoly out;
    for (const auto& [m, c] : terms_) {
        WorkMon w = unpack(m);
        for (size_t i = 0; i < w.slots.size(); ++i) {
            const ArgVec& vec = argument_vec(w.slots[i].arg);
            if (var >= int(vec.size())) continue;
            int av = vec[var];
            if (av == 0) continue;
            if (w.slots[i].p >= 1) {
                // d P^p = p P^(p-1) Pp * a_v
                WorkMon d = w;
                d.slots[i].p -= 1;
                d.slots[i].pp += 1;
                reduce_into(std::move(d), c * Rational(long(w.slots[i].p) * av), out);
            }
            if (w.slots[i].pp == 1) {
                // d Pp = (6 P^2 - g2/2) * a_v
                WorkMon d1 = w;
                d1.slots[i].pp -= 1;
                d1.slots[i].p += 2;
                reduce_into(std::move(d1), c * Rational(6L * av), out);
                WorkMon d2 = w;
                d2.slots[i].pp -= 1;
                d2.g2e += 1;
                reduce_into(std::move(d2), c * Rational(-av, 2), out);
            }
        }
    }
    return out;
}

EllipticPoly EllipticPoly::permute_variables(const std::vector<int>& perm) const {
    EllipticPoly out;
    for (const auto& [m, c] : terms_) {
        WorkMon w = unpack(m);
        int sign = 1;
        for (auto& s : w.slots) {
            const ArgVec& vec = argument_vec(s.arg);
            if (vec.size() != perm.size())
                throw std::invalid_argument("permute_variables: length mismatch");
            ArgVec moved(vec.size(), 0);
            for (size_t j = 0; j < vec.size(); ++j) moved[perm[j]] = vec[j];
            auto [canon, parity] = canonicalize_argument(moved);
            if (s.pp) sign *= parity;
            s.arg = intern_argument(canon);
        }
        std::sort(w.slots.begin(), w.slots.end(),
                  [](const WorkSlot& a, const WorkSlot& b) { return a.arg < b.arg; });
        out.add_term(pack(w), sign > 0 ? c : -c);
    }
    return out;
}

EPoly EllipticPoly::specialize_half_periods(const HalfPeriodAssignment& hp) const {
    EPoly out;
    for (const auto& [m, c] : terms_) {
        if (m.ppmask != 0) continue; // wp' vanishes at half-periods
        EExp e{0, 0, 0, std::int16_t(m.g2e), std::int16_t(m.g3e)};
        for (int i = 0; i < m.nargs; ++i) {
            auto it = hp.find(m.arg[i]);
            if (it == hp.end())
                throw std::out_of_range("specialize_half_periods: argument " +
                                        argument_to_string(m.arg[i]) + " not assigned");
            e[it->second] = std::int16_t(e[it->second] + m.p[i]);
        }
        out.add_term(e, c);
    }
    return out;
}

bool EllipticPoly::is_structurally_constant() const {
    for (const auto& [m, c] : terms_)
        if (m.nargs != 0) return false;
    return true;
}

GPoly EllipticPoly::constant_part() const {
    GPoly out;
    for (const auto& [m, c] : terms_) {
        if (m.nargs != 0) throw std::logic_error("constant_part: polynomial is not constant");
        out.add_term({m.g2e, m.g3e}, c);
    }
    return out;
}

std::optional<int> EllipticPoly::weighted_degree() const {
    std::optional<int> w;
    for (const auto& [m, c] : terms_) {
        int tw = m.weight();
        if (!w)
            w = tw;
        else if (*w != tw)
            return std::nullopt;
    }
    return terms_.empty() ? std::optional<int>(0) : w;
}

std::vector<std::pair<Monomial, int>> EllipticPoly::inhomogeneous_witness() const {
    std::vector<std::pair<Monomial, int>> out;
    for (const auto& [m, c] : terms_) out.emplace_back(m, m.weight());
    return out;
}

int EllipticPoly::max_var() const {
    int n = -1;
    for (const auto& [m, c] : terms_) n = std::max(n, m.max_vars() - 1);
    return n;
}

std::vector<ArgId> EllipticPoly::arguments() const {
    std::vector<ArgId> ids;
    for (const auto& [m, c] : terms_)
        for (int i = 0; i < m.nargs; ++i)
            if (std::find(ids.begin(), ids.end(), m.arg[i]) == ids.end()) ids.push_back(m.arg[i]);
    std::sort(ids.begin(), ids.end(), argument_content_less);
    return ids;
}

namespace {

// Content key: slots re-sorted by argument content; ordering per the fixed
// serialization grammar (sorted argument list, p, pp, g2, g3).
struct ContentKey {
    std::vector<std::tuple<ArgVec, int, int>> slots;
    int g2e, g3e;

    explicit ContentKey(const Monomial& m) : g2e(m.g2e), g3e(m.g3e) {
        for (int i = 0; i < m.nargs; ++i)
            slots.emplace_back(argument_vec(m.arg[i]), int(m.p[i]), (m.ppmask >> i) & 1);
        std::sort(slots.begin(), slots.end());
    }
    bool operator<(const ContentKey& o) const {
        if (slots != o.slots) return slots < o.slots;
        if (g2e != o.g2e) return g2e < o.g2e;
        return g3e < o.g3e;
    }
};

} // namespace

std::string EllipticPoly::to_text() const {
    std::vector<std::pair<ContentKey, const std::pair<const Monomial, Rational>*>> order;
    order.reserve(terms_.size());
    for (const auto& kv : terms_) order.emplace_back(ContentKey(kv.first), &kv);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string out;
    for (const auto& [key, kv] : order)
        out += kv->first.to_string() + " : " + kv->second.to_string() + "\n";
    return out;
}

std::string EllipticPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string text = to_text(), out;
    for (char ch : text) {
        if (ch == '\n')
            out += "  +  ";
        else
            out += ch;
    }
    out.erase(out.size() - 5);
    return out;
}

namespace {

ArgVec parse_argvec(const std::string& tok, size_t& pos) {
    if (pos >= tok.size() || tok[pos] != '[') throw std::invalid_argument("expected '['");
    ++pos;
    ArgVec v;
    std::string cur;
    for (; pos < tok.size(); ++pos) {
        char ch = tok[pos];
        if (ch == ',' || ch == ']') {
            v.push_back(std::stoi(cur));
            cur.clear();
            if (ch == ']') {
                ++pos;
                return v;
            }
        } else {
            cur += ch;
        }
    }
    throw std::invalid_argument("unterminated argument vector");
}

int parse_exp(const std::string& tok, size_t& pos) {
    if (pos < tok.size() && tok[pos] == '^') {
        ++pos;
        size_t start = pos;
        while (pos < tok.size() && (std::isdigit(tok[pos]) != 0)) ++pos;
        return std::stoi(tok.substr(start, pos - start));
    }
    return 1;
}

} // namespace

EllipticPoly EllipticPoly::from_text(const std::string& text) {
    EllipticPoly out;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        auto colon = line.rfind(" : ");
        if (colon == std::string::npos) throw std::invalid_argument("bad term line: " + line);
        Rational c = Rational::from_string(line.substr(colon + 3));
        std::istringstream facs(line.substr(0, colon));
        std::string tok;
        WorkMon w;
        while (facs >> tok) {
            size_t pos = 0;
            if (tok == "1") continue;
            if (tok.rfind("g2", 0) == 0 && (tok.size() == 2 || tok[2] == '^')) {
                pos = 2;
                w.g2e += parse_exp(tok, pos);
            } else if (tok.rfind("g3", 0) == 0 && (tok.size() == 2 || tok[2] == '^')) {
                pos = 2;
                w.g3e += parse_exp(tok, pos);
            } else if (tok.rfind("Pp", 0) == 0) {
                pos = 2;
                ArgVec v = parse_argvec(tok, pos);
                auto [canon, parity] = canonicalize_argument(v);
                if (parity < 0) c = -c;
                w.slots.push_back({intern_argument(canon), 0, 1});
            } else if (tok.rfind("P", 0) == 0) {
                pos = 1;
                ArgVec v = parse_argvec(tok, pos);
                auto [canon, parity] = canonicalize_argument(v);
                (void)parity;
                int e = parse_exp(tok, pos);
                w.slots.push_back({intern_argument(canon), e, 0});
            } else {
                throw std::invalid_argument("bad factor token: " + tok);
            }
        }
        // merge duplicate slots, sort by id
        std::sort(w.slots.begin(), w.slots.end(),
                  [](const WorkSlot& a, const WorkSlot& b) { return a.arg < b.arg; });
        WorkMon merged;
        merged.g2e = w.g2e;
        merged.g3e = w.g3e;
        for (const auto& s : w.slots) {
            if (!merged.slots.empty() && merged.slots.back().arg == s.arg) {
                merged.slots.back().p += s.p;
                merged.slots.back().pp += s.pp;
            } else {
                merged.slots.push_back(s);
            }
        }
        reduce_into(std::move(merged), c, out);
    }
    return out;
}

std::vector<ArgId> collect_arguments(const std::vector<const EllipticPoly*>& polys) {
    std::vector<ArgId> ids;
    for (const EllipticPoly* p : polys)
        for (ArgId id : p->arguments())
            if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    std::sort(ids.begin(), ids.end(), argument_content_less);
    return ids;
}

} // namespace cmspec
