#include "cmspec/abstract_poly.hpp"

#include <algorithm>
#include <sstream>

namespace cmspec {

AbstractPoly AbstractPoly::constant(const std::vector<std::string>& gens, const Rational& c) {
    AbstractPoly r(gens);
    r.add_term(std::vector<int>(gens.size(), 0), c);
    return r;
}

AbstractPoly AbstractPoly::generator(const std::vector<std::string>& gens, const std::string& name,
                                     int exp) {
    AbstractPoly r(gens);
    std::vector<int> m(gens.size(), 0);
    auto it = std::find(gens.begin(), gens.end(), name);
    if (it == gens.end()) throw std::invalid_argument("unknown generator: " + name);
    m[size_t(it - gens.begin())] = exp;
    r.add_term(m, Rational(1));
    return r;
}

int AbstractPoly::generator_index(const std::string& name) const {
    auto it = std::find(gens_.begin(), gens_.end(), name);
    return it == gens_.end() ? -1 : int(it - gens_.begin());
}

void AbstractPoly::add_term(const std::vector<int>& m, const Rational& c) {
    if (m.size() != gens_.size()) throw std::invalid_argument("AbstractPoly: bad exponent vector");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Rational AbstractPoly::coeff(const std::vector<int>& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void AbstractPoly::check_compatible(const AbstractPoly& o) const {
    if (gens_ != o.gens_) throw std::invalid_argument("AbstractPoly: mixed generator lists");
}

AbstractPoly AbstractPoly::operator-() const {
    AbstractPoly r(gens_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

AbstractPoly operator+(const AbstractPoly& a, const AbstractPoly& b) {
    a.check_compatible(b);
    AbstractPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

AbstractPoly operator-(const AbstractPoly& a, const AbstractPoly& b) {
    a.check_compatible(b);
    AbstractPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
}

AbstractPoly operator*(const AbstractPoly& a, const AbstractPoly& b) {
    a.check_compatible(b);
    AbstractPoly r(a.gens_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            std::vector<int> m(ma.size());
            for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

AbstractPoly AbstractPoly::scaled(const Rational& c) const {
    AbstractPoly r(gens_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

AbstractPoly AbstractPoly::pow(unsigned e) const {
    AbstractPoly r = AbstractPoly::constant(gens_, Rational(1));
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

AbstractPoly AbstractPoly::substituted(const std::string& name, const AbstractPoly& value) const {
    check_compatible(value);
    int idx = generator_index(name);
    if (idx < 0) throw std::invalid_argument("unknown generator: " + name);
    AbstractPoly r(gens_);
    for (const auto& [m, c] : terms_) {
        int e = m[size_t(idx)];
        std::vector<int> rest = m;
        rest[size_t(idx)] = 0;
        AbstractPoly t(gens_);
        t.add_term(rest, c);
        if (e > 0) t = t * value.pow(unsigned(e));
        r = r + t;
    }
    return r;
}

AbstractPoly AbstractPoly::substituted_square(const std::string& name,
                                              const AbstractPoly& square_value) const {
    check_compatible(square_value);
    int idx = generator_index(name);
    if (idx < 0) throw std::invalid_argument("unknown generator: " + name);
    AbstractPoly r(gens_);
    for (const auto& [m, c] : terms_) {
        int e = m[size_t(idx)];
        if (e % 2 != 0)
            throw std::domain_error("substituted_square: odd power of " + name + " present");
        std::vector<int> rest = m;
        rest[size_t(idx)] = 0;
        AbstractPoly t(gens_);
        t.add_term(rest, c);
        if (e > 0) t = t * square_value.pow(unsigned(e / 2));
        r = r + t;
    }
    return r;
}

AbstractPoly AbstractPoly::on_generators(const std::vector<std::string>& gens) const {
    std::vector<int> where(gens_.size(), -1);
    for (size_t i = 0; i < gens_.size(); ++i) {
        auto it = std::find(gens.begin(), gens.end(), gens_[i]);
        where[i] = it == gens.end() ? -1 : int(it - gens.begin());
    }
    AbstractPoly r(gens);
    for (const auto& [m, c] : terms_) {
        std::vector<int> n(gens.size(), 0);
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (where[i] < 0)
                throw std::invalid_argument("on_generators: target list lacks " + gens_[i]);
            n[size_t(where[i])] = m[i];
        }
        r.add_term(n, c);
    }
    return r;
}

std::optional<int> AbstractPoly::weighted_degree(const std::map<std::string, int>& weights) const {
    std::optional<int> w;
    for (const auto& [m, c] : terms_) {
        int tw = 0;
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i]) tw += m[i] * weights.at(gens_[i]);
        if (!w)
            w = tw;
        else if (*w != tw)
            return std::nullopt;
    }
    return terms_.empty() ? std::optional<int>(0) : w;
}

std::vector<std::pair<std::vector<int>, int>> AbstractPoly::weight_census(
    const std::map<std::string, int>& weights) const {
    std::vector<std::pair<std::vector<int>, int>> out;
    for (const auto& [m, c] : terms_) {
        int tw = 0;
        for (size_t i = 0; i < m.size(); ++i)
            if (m[i]) tw += m[i] * weights.at(gens_[i]);
        out.emplace_back(m, tw);
    }
    return out;
}

namespace {

std::string render_monomial(const std::vector<std::string>& gens, const std::vector<int>& m) {
    std::string s;
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!s.empty()) s += " ";
        s += gens[i];
        if (m[i] != 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
}

} // namespace

std::string AbstractPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += c.to_string() + " " + render_monomial(gens_, m);
    }
    return s;
}

std::string AbstractPoly::to_text() const {
    std::string s;
    for (const auto& [m, c] : terms_) s += render_monomial(gens_, m) + " : " + c.to_string() + "\n";
    return s;
}

AbstractPoly AbstractPoly::from_text(const std::vector<std::string>& gens,
                                     const std::string& text) {
    AbstractPoly r(gens);
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        auto colon = line.rfind(" : ");
        if (colon == std::string::npos) throw std::invalid_argument("bad term line: " + line);
        Rational c = Rational::from_string(line.substr(colon + 3));
        std::istringstream facs(line.substr(0, colon));
        std::string tok;
        std::vector<int> m(gens.size(), 0);
        while (facs >> tok) {
            if (tok == "1") continue;
            std::string name = tok;
            int e = 1;
            auto caret = tok.find('^');
            if (caret != std::string::npos) {
                name = tok.substr(0, caret);
                e = std::stoi(tok.substr(caret + 1));
            }
            auto it = std::find(gens.begin(), gens.end(), name);
            if (it == gens.end()) throw std::invalid_argument("unknown generator: " + name);
            m[size_t(it - gens.begin())] += e;
        }
        r.add_term(m, c);
    }
    return r;
}

std::vector<std::string> abstract_diff(const AbstractPoly& a, const AbstractPoly& b) {
    std::vector<std::string> out;
    AbstractPoly d = a - b;
    for (const auto& [m, c] : d.terms()) {
        std::string mono = render_monomial(a.generators(), m);
        out.push_back(mono + ": " + a.coeff(m).to_string() + " vs " + b.coeff(m).to_string());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Builders

std::vector<std::string> a2_generators() { return {"L1", "L2", "L3", "I", "J", "g2", "g3"}; }
std::vector<std::string> b2_generators() { return {"L", "M", "I", "J", "g2", "g3"}; }

std::map<std::string, int> a2_weights() {
    return {{"L1", 2}, {"L2", 1}, {"L3", 3}, {"I", 4}, {"J", 4}, {"g2", 4}, {"g3", 6}};
}

std::map<std::string, int> b2_weights() {
    return {{"L", 2}, {"M", 4}, {"I", 5}, {"J", 5}, {"g2", 4}, {"g3", 6}};
}

A2Coefficients build_A_coefficients() {
    const auto gens = a2_generators();
    auto G = [&](const std::string& n, int e = 1) { return AbstractPoly::generator(gens, n, e); };
    auto C = [&](long num, long den = 1) { return AbstractPoly::constant(gens, Rational(num, den)); };

    AbstractPoly L1 = G("L1"), L2 = G("L2"), L3 = G("L3"), g2 = G("g2"), g3 = G("g3");

    AbstractPoly X = L1.scaled(Rational(3, 2)) + L2.pow(2).scaled(Rational(1, 2));
    AbstractPoly Y = L1.pow(3).scaled(Rational(1, 2)) + L3.pow(2).scaled(Rational(27)) +
                     L2.pow(6).scaled(Rational(1, 4)) + L1 * L2.pow(4) -
                     (L2.pow(3) * L3).scaled(Rational(5)) +
                     (L1.pow(2) * L2.pow(2)).scaled(Rational(5, 4)) -
                     (L1 * L2 * L3).scaled(Rational(9));

    AbstractPoly A1 = g2.scaled(Rational(6)) - X.pow(2);
    AbstractPoly A2 = (X * Y).scaled(Rational(2)) - g2.pow(2).scaled(Rational(15)) -
                      (g2 * X.pow(2)).scaled(Rational(2));
    AbstractPoly A3 = -Y.pow(2) - (g2 * X * Y).scaled(Rational(2)) - (g3 * Y).scaled(Rational(108)) +
                      (g3 * X.pow(3)).scaled(Rational(16)) +
                      (g2.pow(2) * X.pow(2)).scaled(Rational(15)) - g2.pow(3).scaled(Rational(100));
    (void)C;
    return {X, Y, A1, A2, A3};
}

B2Coefficients build_B_coefficients() {
    const auto gens = b2_generators();
    auto G = [&](const std::string& n, int e = 1) { return AbstractPoly::generator(gens, n, e); };

    AbstractPoly L = G("L"), M = G("M"), g2 = G("g2"), g3 = G("g3");

    AbstractPoly B1 = L.pow(5).scaled(Rational(32)) - (M * L.pow(3)).scaled(Rational(120)) +
                      (M.pow(2) * L).scaled(Rational(120)) +
                      g2 * (L.pow(3).scaled(Rational(-82)) + (L * M).scaled(Rational(114))) +
                      g3 * (L.pow(2).scaled(Rational(-270)) + M.scaled(Rational(486))) +
                      (g2.pow(2) * L).scaled(Rational(102)) + (g3 * g2).scaled(Rational(486));

    AbstractPoly B2 =
        (M.pow(3) * L.pow(4)).scaled(Rational(400)) - (M.pow(4) * L.pow(2)).scaled(Rational(1440)) +
        M.pow(5).scaled(Rational(1296)) +
        g2 * ((M * L.pow(6)).scaled(Rational(-400)) + (M.pow(2) * L.pow(4)).scaled(Rational(840)) +
              (M.pow(3) * L.pow(2)).scaled(Rational(-576)) + M.pow(4).scaled(Rational(648))) +
        g3 * (L.pow(7).scaled(Rational(800)) + (M * L.pow(5)).scaled(Rational(-8280)) +
              (M.pow(2) * L.pow(3)).scaled(Rational(22032)) + (L * M.pow(3)).scaled(Rational(-17496))) +
        g2.pow(2) * (L.pow(6).scaled(Rational(800)) + (M * L.pow(4)).scaled(Rational(-1815)) +
                     (M.pow(2) * L.pow(2)).scaled(Rational(3510)) + M.pow(3).scaled(Rational(-3807))) +
        (g3 * g2) * (L.pow(5).scaled(Rational(3870)) + (M * L.pow(3)).scaled(Rational(324)) +
                     (M.pow(2) * L).scaled(Rational(-13122))) +
        g3.pow(2) * (L.pow(4).scaled(Rational(18225)) + (M * L.pow(2)).scaled(Rational(-65610)) +
                     M.pow(2).scaled(Rational(59049))) +
        g2.pow(3) * (L.pow(4).scaled(Rational(-2930)) + (M * L.pow(2)).scaled(Rational(5418)) +
                     M.pow(2).scaled(Rational(-4536))) +
        (g3 * g2.pow(2)) * (L.pow(3).scaled(Rational(-21708)) + (L * M).scaled(Rational(26244))) +
        (g3.pow(3) * g2) * (L.pow(2).scaled(Rational(-65610)) + M.scaled(Rational(118098))) +
        g2.pow(4) * (L.pow(2).scaled(Rational(2772)) + M.scaled(Rational(-1539))) +
        (g3 * g2.pow(3) * L).scaled(Rational(21870)) + (g2.pow(2) * g3.pow(2)).scaled(Rational(59049)) -
        g2.pow(5).scaled(Rational(162));

    B2Coefficients out{B1, B2, {}};
    const auto weights = b2_weights();
    for (const auto& [m, w] : B2.weight_census(weights)) {
        if (w != 20) {
            std::string mono;
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                if (!mono.empty()) mono += " ";
                mono += gens[i];
                if (m[i] != 1) mono += "^" + std::to_string(m[i]);
            }
            out.inhomogeneous_terms.push_back(mono + " (weight " + std::to_string(w) + ")");
        }
    }
    return out;
}

AbstractPoly a2_cubic_relation(const A2Coefficients& A) {
    const auto gens = a2_generators();
    AbstractPoly I = AbstractPoly::generator(gens, "I");
    return I.pow(3) + A.A1 * I.pow(2) + A.A2 * I + A.A3;
}

AbstractPoly a2_pair_relation(const A2Coefficients& A) {
    const auto gens = a2_generators();
    AbstractPoly I = AbstractPoly::generator(gens, "I");
    AbstractPoly J = AbstractPoly::generator(gens, "J");
    return I.pow(2) + I * J + J.pow(2) + A.A1 * (I + J) + A.A2;
}

AbstractPoly b2_quartic_relation(const AbstractPoly& B1, const AbstractPoly& B2) {
    const auto gens = b2_generators();
    AbstractPoly I = AbstractPoly::generator(gens, "I");
    return I.pow(4) + B1 * I.pow(2) + B2;
}

AbstractPoly b2_sum_relation(const AbstractPoly& B1) {
    const auto gens = b2_generators();
    AbstractPoly I = AbstractPoly::generator(gens, "I");
    AbstractPoly J = AbstractPoly::generator(gens, "J");
    return I.pow(2) + J.pow(2) + B1;
}

} // namespace cmspec
