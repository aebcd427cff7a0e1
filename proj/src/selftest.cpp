#include "cmspec/selftest.hpp"

#include "cmspec/catalog.hpp"
#include "cmspec/numeric_eval.hpp"
#include "cmspec/relations.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace cmspec {

namespace {

Rational rand_rational(std::mt19937_64& rng, int span = 12) {
    long num = long(rng() % (2 * unsigned(span) + 1)) - span;
    long den = long(rng() % 9) + 1;
    return Rational(num, den);
}

// random product of wp/wp'/g-factors over the B2 argument set; exercises the
// Pp^2 rewrite when several Pp factors of the same argument pile up
EllipticPoly rand_poly(std::mt19937_64& rng, int factors) {
    static const std::vector<ArgVec> args = {b2_arg_x(), b2_arg_y(), b2_arg_sum(), b2_arg_diff()};
    EllipticPoly p = EllipticPoly::constant(rand_rational(rng));
    if (p.is_zero()) p = EllipticPoly::constant(Rational(1));
    for (int i = 0; i < factors; ++i) {
        switch (rng() % 5) {
        case 0: p = p * EllipticPoly::P(args[rng() % args.size()]); break;
        case 1: p = p * EllipticPoly::Pp(args[rng() % args.size()]); break;
        case 2: p = p * EllipticPoly::g2(); break;
        case 3: p = p * EllipticPoly::g3(); break;
        default: p = p + EllipticPoly::P(args[rng() % args.size()], 1 + int(rng() % 2)); break;
        }
    }
    return p;
}

} // namespace

std::vector<SelftestResult> run_selftest(long bits, std::uint64_t seed, int threads) {
    std::vector<SelftestResult> out;
    std::mt19937_64 rng(seed);
    auto push = [&out](const std::string& name, bool pass, const std::string& detail = "") {
        out.push_back({name, pass, detail});
    };

    // exact field axioms
    {
        bool ok = true;
        for (int i = 0; i < 200 && ok; ++i) {
            Rational a = rand_rational(rng), b = rand_rational(rng), c = rand_rational(rng);
            ok = ((a + b) + c == a + (b + c)) && (a * (b + c) == a * b + a * c) &&
                 ((a * b) * c == a * (b * c)) && (a - a == Rational(0));
            if (!a.is_zero()) ok = ok && (a * a.inv() == Rational(1));
        }
        push("rational field axioms", ok);
    }

    // conversion respects arithmetic to ~1 ulp
    {
        bool ok = true;
        for (int i = 0; i < 100 && ok; ++i) {
            Rational a = rand_rational(rng), b = rand_rational(rng);
            BigFloat fa = BigFloat::from_rational(a, bits);
            BigFloat fb = BigFloat::from_rational(b, bits);
            BigFloat sum1 = fa + fb;
            BigFloat sum2 = BigFloat::from_rational(a + b, bits);
            BigFloat diff = (sum1 - sum2).abs();
            if (a.is_zero() && b.is_zero()) {
                ok = diff.is_zero();
            } else {
                mpfr_exp_t scale = sum2.is_zero() ? 0 : sum2.exponent();
                if (!fa.is_zero()) scale = std::max(scale, fa.exponent());
                if (!fb.is_zero()) scale = std::max(scale, fb.exponent());
                BigFloat two_ulp(bits);
                mpfr_set_ui_2exp(two_ulp.raw(), 1, scale - bits + 1, MPFR_RNDN);
                ok = diff <= two_ulp;
            }
        }
        push("rational-to-float conversion within 2 ulp", ok);
    }

    OracleEnv env = OracleEnv::defaults(bits, 3, seed, threads);

    // normal form consistent with the numeric oracle (ODE rewrite)
    {
        bool ok = true;
        const EllipticContext& ctx = env.contexts[2];
        for (int trial = 0; trial < 5 && ok; ++trial) {
            EllipticPoly p = rand_poly(rng, 4), q = rand_poly(rng, 4);
            EllipticPoly prod = p * q; // rewrites Pp^2
            std::vector<ArgId> args = collect_arguments({&p, &q, &prod});
            auto pts = sample_points(ctx, 2, args, 3, seed + trial);
            for (const auto& pt : pts) {
                EvalResult ep = eval_elliptic_poly(ctx, p, pt);
                EvalResult eq = eval_elliptic_poly(ctx, q, pt);
                EvalResult er = eval_elliptic_poly(ctx, prod, pt);
                BigFloat err = (ep.value * eq.value - er.value).abs();
                BigFloat wit = ep.witness * eq.witness + er.witness + BigFloat::from_long(1, bits);
                double ratio = (err / wit).to_double();
                if (ratio > std::ldexp(1.0, int(-bits / 2))) ok = false;
            }
        }
        push("normal form agrees with numeric product", ok);
    }

    // differentiation is a derivation; mixed partials commute
    {
        bool ok = true, mixed = true;
        for (int trial = 0; trial < 8 && ok; ++trial) {
            EllipticPoly p = rand_poly(rng, 3), q = rand_poly(rng, 3);
            for (int v = 0; v < 2; ++v) {
                EllipticPoly lhs = (p * q).differentiate(v);
                EllipticPoly rhs = p.differentiate(v) * q + p * q.differentiate(v);
                if (!(lhs == rhs)) ok = false;
            }
            EllipticPoly ab = p.differentiate(0).differentiate(1);
            EllipticPoly ba = p.differentiate(1).differentiate(0);
            if (!(ab == ba)) mixed = false;
        }
        push("differentiate is a derivation", ok);
        push("mixed partials commute", mixed);
    }

    // parity handling of wp'
    {
        ArgVec neg = {-1, 1};
        bool ok = EllipticPoly::Pp(neg) == -EllipticPoly::Pp(b2_arg_diff());
        ok = ok && EllipticPoly::P(neg) == EllipticPoly::P(b2_arg_diff());
        push("argument parity (wp even, wp' odd)", ok);
    }

    // weighted degree rises by one under differentiation
    {
        EllipticPoly p = EllipticPoly::P(b2_arg_x()) * EllipticPoly::P(b2_arg_y());
        auto w0 = p.weighted_degree();
        auto w1 = p.differentiate(0).weighted_degree();
        push("weighted degree of derivative", w0 && w1 && *w1 == *w0 + 1);
    }

    // ODE residual and wp parity at random points
    {
        bool ode_ok = true, parity_ok = true;
        std::mt19937_64 prng(seed + 17);
        auto unit = [&prng]() { return double(prng() >> 11) * 0x1.0p-53; };
        for (const auto& ctx : env.contexts) {
            for (int i = 0; i < 7; ++i) {
                double re = 0.02 + 0.1 * unit(), im = 0.02 + 0.1 * unit();
                BigComplex z = BigComplex::from_doubles(re, im, bits);
                if (ctx.ode_residual_ratio(z) > std::ldexp(1.0, int(-bits / 2))) ode_ok = false;
                // the series is even/odd term by term, so parity holds bitwise
                BigComplex pz = ctx.wp(z), pnz = ctx.wp(-z);
                BigComplex dz = ctx.wp_prime(z), dnz = ctx.wp_prime(-z);
                if (!(pz - pnz).is_zero()) parity_ok = false;
                if (!(dz + dnz).is_zero()) parity_ok = false;
            }
        }
        push("wp satisfies its defining equation", ode_ok);
        push("wp parity to full precision", parity_ok);
    }

    // central finite difference of wp matches wp'
    {
        bool ok = true;
        const EllipticContext& ctx = env.contexts[0];
        std::mt19937_64 prng(seed + 23);
        auto unit = [&prng]() { return double(prng() >> 11) * 0x1.0p-53; };
        for (int i = 0; i < 10 && ok; ++i) {
            double re = 0.03 + 0.08 * unit(), im = 0.03 + 0.08 * unit();
            BigComplex z = BigComplex::from_doubles(re, im, bits);
            BigFloat hmag(bits);
            mpfr_set_ui_2exp(hmag.raw(), 1, int(-bits / 3), MPFR_RNDN);
            BigComplex h(bits);
            h.re = hmag;
            BigComplex fd = (ctx.wp(z + h) - ctx.wp(z - h)) / (h + h);
            BigComplex exact = ctx.wp_prime(z);
            double rel = ((fd - exact).abs() / exact.abs()).to_double();
            // centered difference: error ~ h^2 ~ 2^(-2 bits / 3)
            if (rel > std::ldexp(1.0, int(-bits / 3))) ok = false;
        }
        push("finite differences confirm wp'", ok);
    }

    // e-roots satisfy Vieta
    {
        bool ok = true;
        for (const auto& ctx : env.contexts) {
            auto roots = solve_e_roots(ctx);
            BigComplex s = roots[0] + roots[1] + roots[2];
            BigComplex prod = roots[0] * roots[1] * roots[2];
            BigComplex expect = ctx.g3c() * BigComplex::from_doubles(0.25, 0, bits);
            double tol = std::ldexp(1.0, int(-bits / 2));
            double scale = roots[0].abs().to_double() + roots[1].abs().to_double() +
                           roots[2].abs().to_double() + 1.0;
            if (s.abs().to_double() > tol * scale) ok = false;
            if ((prod - expect).abs().to_double() > tol * (scale * scale * scale + 1.0)) ok = false;
        }
        push("e-roots satisfy Vieta", ok);
    }

    // symmetric reduction agrees with numeric evaluation at the roots
    {
        bool ok = true;
        for (int trial = 0; trial < 4 && ok; ++trial) {
            EPoly raw;
            for (int t = 0; t < 4; ++t) {
                EExp m{std::int16_t(rng() % 3), std::int16_t(rng() % 3), std::int16_t(rng() % 2),
                       std::int16_t(rng() % 2), 0};
                raw.add_term(m, rand_rational(rng));
            }
            EPoly sym = raw - raw.asymmetric_part(); // symmetrize
            sym = sym.scaled(Rational(6));           // clear the 1/6
            GPoly red = reduce_symmetric(sym);
            for (const auto& ctx : env.contexts) {
                auto roots = solve_e_roots(ctx);
                EvalResult direct = eval_epoly(ctx, sym, roots);
                BigComplex via = eval_gpoly(ctx, red);
                double tol = std::ldexp(1.0, int(-bits / 2));
                BigFloat wit = direct.witness + via.abs() + BigFloat::from_long(1, bits);
                if (((direct.value - via).abs() / wit).to_double() > tol) ok = false;
            }
        }
        push("symmetric reduction matches numeric roots", ok);
    }

    // associativity and Jacobi on small random operators
    {
        auto rand_op = [&](int seed_shift) {
            std::mt19937_64 orng(seed + unsigned(seed_shift));
            DiffOp op(2);
            for (int t = 0; t < 3; ++t) {
                MultiIndex m{int(orng() % 2), int(orng() % 2)};
                std::mt19937_64 prng2(orng());
                op.add_term(m, rand_poly(prng2, 2));
            }
            return op;
        };
        bool assoc = true, jacobi = true;
        for (int trial = 0; trial < 3; ++trial) {
            DiffOp a = rand_op(3 * trial), b = rand_op(3 * trial + 1), c = rand_op(3 * trial + 2);
            if (!(op_compose(op_compose(a, b), c) == op_compose(a, op_compose(b, c)))) assoc = false;
            DiffOp jac = op_commutator(a, op_commutator(b, c)) +
                         op_commutator(b, op_commutator(c, a)) +
                         op_commutator(c, op_commutator(a, b));
            if (!jac.is_zero()) jacobi = false;
        }
        push("composition associativity", assoc);
        push("Jacobi identity", jacobi);
    }

    // normal form is stable: serialization round-trips re-normalize to the
    // identical polynomial
    {
        bool ok = true;
        for (int trial = 0; trial < 6 && ok; ++trial) {
            EllipticPoly p = rand_poly(rng, 5);
            ok = (EllipticPoly::from_text(p.to_text()) == p);
        }
        push("normal form idempotent under round trip", ok);
    }

    // determinism under threading: composition and oracle
    {
        DiffOp a = b2_M(), b = b2_Ix();
        DiffOp c1 = op_compose(a, b, 1);
        DiffOp ck = op_compose(a, b, threads > 1 ? threads : 2);
        bool ok = (c1 == ck);
        OracleEnv env1 = env, env2 = env;
        env1.threads = 1;
        env2.threads = threads > 1 ? threads : 2;
        DiffOp r = op_commutator(b2_L(), b2_M(), 2);
        std::vector<std::pair<std::string, const EllipticPoly*>> cs;
        for (const auto& [m, poly] : r.terms()) cs.emplace_back(multi_to_string(m), &poly);
        OracleOutcome o1 = certify_vanishing(env1, 2, cs);
        OracleOutcome o2 = certify_vanishing(env2, 2, cs);
        ok = ok && o1.status == o2.status && o1.max_ratio == o2.max_ratio &&
             o1.max_abs_residual == o2.max_abs_residual;
        push("determinism under threading", ok);
    }

    return out;
}

} // namespace cmspec
