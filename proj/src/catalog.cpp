#include "cmspec/catalog.hpp"

namespace cmspec {

namespace {

const ArgVec kArg12 = {1, -1, 0};
const ArgVec kArg23 = {0, 1, -1};
const ArgVec kArg13 = {1, 0, -1};
const ArgVec kArgX = {1, 0};
const ArgVec kArgY = {0, 1};
const ArgVec kArgS = {1, 1};
const ArgVec kArgD = {1, -1};

EllipticPoly C(long num, long den = 1) { return EllipticPoly::constant(Rational(num, den)); }

DiffOp D(int n, int var) { return DiffOp::partial(n, var); }

} // namespace

ArgVec a2_arg12() { return kArg12; }
ArgVec a2_arg23() { return kArg23; }
ArgVec a2_arg13() { return kArg13; }
ArgVec b2_arg_x() { return kArgX; }
ArgVec b2_arg_y() { return kArgY; }
ArgVec b2_arg_sum() { return kArgS; }
ArgVec b2_arg_diff() { return kArgD; }

DiffOp CatalogTable::assemble() const {
    DiffOp op(n);
    for (const auto& row : rows) op = op + row.deriv.scaled(row.coeff);
    return op;
}

std::vector<std::string> CatalogTable::render() const {
    std::vector<std::string> out;
    out.push_back(name);
    for (const auto& row : rows)
        out.push_back("  [" + row.deriv_note + "]  (" + row.coeff.to_string() + ")");
    return out;
}

CatalogTable a2_L1_table() {
    CatalogTable t{"a2_L1", 3, {}};
    t.rows.push_back({"d1^2", op_compose(D(3, 0), D(3, 0)), C(-1)});
    t.rows.push_back({"d2^2", op_compose(D(3, 1), D(3, 1)), C(-1)});
    t.rows.push_back({"d3^2", op_compose(D(3, 2), D(3, 2)), C(-1)});
    t.rows.push_back({"1", DiffOp::identity(3),
                      (EllipticPoly::P(kArg12) + EllipticPoly::P(kArg23) + EllipticPoly::P(kArg13))
                          .scaled(Rational(4))});
    return t;
}

CatalogTable a2_L2_table() {
    CatalogTable t{"a2_L2", 3, {}};
    t.rows.push_back({"d1 + d2 + d3", D(3, 0) + D(3, 1) + D(3, 2), C(1)});
    return t;
}

CatalogTable a2_L3_table() {
    CatalogTable t{"a2_L3", 3, {}};
    t.rows.push_back({"d1 d2 d3", op_compose(op_compose(D(3, 0), D(3, 1)), D(3, 2)), C(1)});
    t.rows.push_back({"d3", D(3, 2), EllipticPoly::P(kArg12).scaled(Rational(2))});
    t.rows.push_back({"d1", D(3, 0), EllipticPoly::P(kArg23).scaled(Rational(2))});
    t.rows.push_back({"d2", D(3, 1), EllipticPoly::P(kArg13).scaled(Rational(2))});
    return t;
}

CatalogTable a2_I12_table() {
    const DiffOp d13 = D(3, 0) - D(3, 2);
    const DiffOp d23 = D(3, 1) - D(3, 2);
    auto P = [](const ArgVec& a, int e = 1) { return EllipticPoly::P(a, e); };
    auto Pp = [](const ArgVec& a) { return EllipticPoly::Pp(a); };

    CatalogTable t{"a2_I12", 3, {}};
    t.rows.push_back({"(d1-d3)^2 (d2-d3)^2",
                      op_compose(op_compose(d13, d13), op_compose(d23, d23)), C(1)});
    t.rows.push_back({"(d1-d3)^2", op_compose(d13, d13), P(kArg23).scaled(Rational(-8))});
    t.rows.push_back({"(d2-d3)^2", op_compose(d23, d23), P(kArg13).scaled(Rational(-8))});
    t.rows.push_back({"(d1-d3)(d2-d3)", op_compose(d13, d23),
                      (P(kArg12) - P(kArg13) - P(kArg23)).scaled(Rational(4))});
    t.rows.push_back({"(d1-d3)", d13,
                      (Pp(kArg12) + Pp(kArg13) + Pp(kArg23).scaled(Rational(6))).scaled(Rational(-2))});
    t.rows.push_back({"(d2-d3)", d23,
                      (-Pp(kArg12) + Pp(kArg13).scaled(Rational(6)) + Pp(kArg23)).scaled(Rational(-2))});
    t.rows.push_back(
        {"1", DiffOp::identity(3),
         EllipticPoly::wp2(kArg12).scaled(Rational(-2)) + EllipticPoly::wp2(kArg13).scaled(Rational(-6)) +
             EllipticPoly::wp2(kArg23).scaled(Rational(-6)) +
             (P(kArg12, 2) + P(kArg13, 2) + P(kArg23, 2)).scaled(Rational(4)) +
             (P(kArg12) * P(kArg13) + P(kArg12) * P(kArg23) +
              (P(kArg13) * P(kArg23)).scaled(Rational(7)))
                 .scaled(Rational(8))});
    return t;
}

CatalogTable b2_L_table() {
    CatalogTable t{"b2_L", 2, {}};
    t.rows.push_back({"dx^2", op_compose(D(2, 0), D(2, 0)), C(-1)});
    t.rows.push_back({"dy^2", op_compose(D(2, 1), D(2, 1)), C(-1)});
    t.rows.push_back({"1", DiffOp::identity(2),
                      EllipticPoly::P(kArgX).scaled(Rational(2)) + EllipticPoly::P(kArgY).scaled(Rational(2)) +
                          EllipticPoly::P(kArgS).scaled(Rational(4)) +
                          EllipticPoly::P(kArgD).scaled(Rational(4))});
    return t;
}

CatalogTable b2_M_table() {
    auto P = [](const ArgVec& a, int e = 1) { return EllipticPoly::P(a, e); };
    auto Pp = [](const ArgVec& a) { return EllipticPoly::Pp(a); };
    const DiffOp dx = D(2, 0), dy = D(2, 1);

    CatalogTable t{"b2_M", 2, {}};
    t.rows.push_back({"dx^2 dy^2",
                      op_compose(op_compose(dx, dx), op_compose(dy, dy)), C(1)});
    t.rows.push_back({"dx^2", op_compose(dx, dx), P(kArgY).scaled(Rational(-2))});
    t.rows.push_back({"dy^2", op_compose(dy, dy), P(kArgX).scaled(Rational(-2))});
    t.rows.push_back({"dx dy", op_compose(dx, dy), (P(kArgS) - P(kArgD)).scaled(Rational(-4))});
    t.rows.push_back({"dx", dx, (Pp(kArgS) + Pp(kArgD)).scaled(Rational(-2))});
    t.rows.push_back({"dy", dy, (Pp(kArgS) - Pp(kArgD)).scaled(Rational(-2))});
    t.rows.push_back({"1", DiffOp::identity(2),
                      (EllipticPoly::wp2(kArgS) + EllipticPoly::wp2(kArgD)).scaled(Rational(-2)) +
                          (P(kArgS, 2) + P(kArgD, 2)).scaled(Rational(4)) +
                          ((P(kArgX) + P(kArgY)) * (P(kArgS) + P(kArgD))).scaled(Rational(4)) +
                          (P(kArgS) * P(kArgD)).scaled(Rational(-8)) +
                          (P(kArgX) * P(kArgY)).scaled(Rational(-4))});
    return t;
}

CatalogTable b2_Ix_table() {
    auto P = [](const ArgVec& a, int e = 1) { return EllipticPoly::P(a, e); };
    auto Pp = [](const ArgVec& a) { return EllipticPoly::Pp(a); };
    auto W2 = [](const ArgVec& a) { return EllipticPoly::wp2(a); };
    const DiffOp dx = D(2, 0), dy = D(2, 1);
    const DiffOp dx2 = op_compose(dx, dx), dy2 = op_compose(dy, dy);
    const DiffOp dx3 = op_compose(dx2, dx);

    CatalogTable t{"b2_Ix", 2, {}};
    t.rows.push_back({"dx^5", op_compose(op_compose(dx3, dx), dx), C(1)});
    t.rows.push_back({"dx^3 dy^2", op_compose(dx3, dy2), C(-5)});
    t.rows.push_back({"dx^3", dx3,
                      (P(kArgX).scaled(Rational(1, 2)) - P(kArgY) + P(kArgS) + P(kArgD))
                          .scaled(Rational(-10))});
    t.rows.push_back({"dx^2 dy", op_compose(dx2, dy), (P(kArgS) - P(kArgD)).scaled(Rational(30))});
    t.rows.push_back({"dx dy^2", op_compose(dx, dy2), P(kArgX).scaled(Rational(15))});
    t.rows.push_back({"dx^2 - dy^2", dx2 - dy2, Pp(kArgX).scaled(Rational(-15, 2))});
    t.rows.push_back({"dx dy", op_compose(dx, dy), (Pp(kArgS) - Pp(kArgD)).scaled(Rational(30))});
    t.rows.push_back({"dy", dy,
                      W2(kArgS).scaled(Rational(10)) - W2(kArgD).scaled(Rational(10)) -
                          (P(kArgX) * (P(kArgS) - P(kArgD))).scaled(Rational(30))});
    t.rows.push_back({"dx", dx,
                      (P(kArgY) * (P(kArgX) - P(kArgS) - P(kArgD))).scaled(Rational(30)) +
                          (P(kArgS) * P(kArgD)).scaled(Rational(120)) + W2(kArgS).scaled(Rational(10)) +
                          W2(kArgD).scaled(Rational(10)) - W2(kArgX).scaled(Rational(5)) -
                          EllipticPoly::g2().scaled(Rational(9, 2))});
    t.rows.push_back({"1", DiffOp::identity(2),
                      ((Pp(kArgS) + Pp(kArgD)) * (P(kArgX) + P(kArgY))).scaled(Rational(-15)) +
                          (Pp(kArgX) * (P(kArgX) - P(kArgY))).scaled(Rational(-15)) +
                          ((Pp(kArgS) + Pp(kArgD)) * (P(kArgS) + P(kArgD))).scaled(Rational(60))});
    return t;
}

namespace {

const DiffOp& cached(const char* which) {
    static const DiffOp l1 = a2_L1_table().assemble();
    static const DiffOp l2 = a2_L2_table().assemble();
    static const DiffOp l3 = a2_L3_table().assemble();
    static const DiffOp i12 = a2_I12_table().assemble();
    static const DiffOp i23 = cycle_a2(i12);
    static const DiffOp i31 = cycle_a2(i23);
    static const DiffOp bl = b2_L_table().assemble();
    static const DiffOp bm = b2_M_table().assemble();
    static const DiffOp bix = b2_Ix_table().assemble();
    static const DiffOp biy = swap_xy(bix);
    static const DiffOp bl3 = bix + biy.scaled(Rational(2));
    std::string w = which;
    if (w == "L1") return l1;
    if (w == "L2") return l2;
    if (w == "L3") return l3;
    if (w == "I12") return i12;
    if (w == "I23") return i23;
    if (w == "I31") return i31;
    if (w == "bL") return bl;
    if (w == "bM") return bm;
    if (w == "bIx") return bix;
    if (w == "bIy") return biy;
    return bl3;
}

} // namespace

DiffOp a2_L1() { return cached("L1"); }
DiffOp a2_L2() { return cached("L2"); }
DiffOp a2_L3() { return cached("L3"); }

DiffOp a2_I(int pair) {
    switch (pair) {
    case 12: return cached("I12");
    case 23: return cached("I23");
    case 31: return cached("I31");
    default: throw std::invalid_argument("a2_I: pair must be 12, 23 or 31");
    }
}

DiffOp b2_L() { return cached("bL"); }
DiffOp b2_M() { return cached("bM"); }
DiffOp b2_Ix() { return cached("bIx"); }
DiffOp b2_Iy() { return cached("bIy"); }
DiffOp b2_L3() { return cached("bL3"); }

DiffOp swap_xy(const DiffOp& op) { return op.permute_variables({1, 0}); }
DiffOp cycle_a2(const DiffOp& op) { return op.permute_variables({1, 2, 0}); }

HalfPeriodAssignment a2_half_periods() {
    HalfPeriodAssignment hp;
    hp[intern_argument(kArg12)] = 0;
    hp[intern_argument(kArg23)] = 1;
    hp[intern_argument(kArg13)] = 2;
    return hp;
}

HalfPeriodAssignment b2_half_periods() {
    HalfPeriodAssignment hp;
    hp[intern_argument(kArgX)] = 0;
    hp[intern_argument(kArgY)] = 1;
    hp[intern_argument(kArgS)] = 2;
    hp[intern_argument(kArgD)] = 2;
    return hp;
}

} // namespace cmspec
