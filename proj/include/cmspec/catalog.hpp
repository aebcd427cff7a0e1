// Constructors for the elliptic Calogero-Moser operators of the A2 and B2
// root systems at the special couplings, transcribed line by line into data
// tables. P''(u) never appears in stored operators: table coefficients carry
// it as 6 P(u)^2 - g2/2 from the start.
//
// A2 lives in three variables with difference arguments x1-x2, x2-x3, x1-x3;
// B2 lives in two variables with arguments x, y, x+y, x-y.
#pragma once

#include "cmspec/diff_op.hpp"

#include <string>
#include <vector>

namespace cmspec {

struct CatalogTerm {
    std::string deriv_note; // derivative word, human-readable
    DiffOp deriv;           // constant-coefficient derivative polynomial
    EllipticPoly coeff;
};

struct CatalogTable {
    std::string name;
    int n = 0;
    std::vector<CatalogTerm> rows;

    DiffOp assemble() const;
    std::vector<std::string> render() const; // one line per row, table order
};

// A2 tables (printed operators); I23 and I31 come from cyclic relabelling.
CatalogTable a2_L1_table();
CatalogTable a2_L2_table();
CatalogTable a2_L3_table();
CatalogTable a2_I12_table();

// B2 tables.
CatalogTable b2_L_table();
CatalogTable b2_M_table();
CatalogTable b2_Ix_table();

DiffOp a2_L1();
DiffOp a2_L2();
DiffOp a2_L3();
// pair is 12, 23 or 31; 23 and 31 apply the cyclic relabelling x1->x2->x3->x1
// once resp. twice to the I12 table.
DiffOp a2_I(int pair);

DiffOp b2_L();
DiffOp b2_M();
DiffOp b2_Ix();
DiffOp b2_Iy(); // x <-> y swap of b2_Ix
DiffOp b2_L3(); // I_x + 2 I_y

// x <-> y relabelling used for b2_Iy and tests.
DiffOp swap_xy(const DiffOp& op);
// cyclic x1 -> x2 -> x3 -> x1
DiffOp cycle_a2(const DiffOp& op);

// Half-period argument assignments: which root e_i each argument takes at the
// distinguished evaluation point.
HalfPeriodAssignment a2_half_periods();
HalfPeriodAssignment b2_half_periods();

// Canonical A2/B2 argument vectors.
ArgVec a2_arg12();
ArgVec a2_arg23();
ArgVec a2_arg13();
ArgVec b2_arg_x();
ArgVec b2_arg_y();
ArgVec b2_arg_sum();
ArgVec b2_arg_diff();

} // namespace cmspec
