#include "cmspec/numeric_eval.hpp"

#include "cmspec/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace cmspec {

bool nondegenerate(const Rational& g2, const Rational& g3) {
    Rational disc = g2.pow_ui(3) - Rational(27) * g3.pow_ui(2);
    return !disc.is_zero();
}

EllipticContext::EllipticContext(Rational g2, Rational g3, long precision_bits, int series_terms,
                                 double sample_scale)
    : g2_(std::move(g2)), g3_(std::move(g3)), bits_(precision_bits), scale_(sample_scale),
      g2c_(BigComplex::from_rational(g2_, precision_bits)),
      g3c_(BigComplex::from_rational(g3_, precision_bits)) {
    if (!nondegenerate(g2_, g3_))
        throw std::domain_error("EllipticContext: degenerate curve (g2^3 = 27 g3^2)");
    if (series_terms < 8) series_terms = 8;
    // c_2 = g2/20, c_3 = g3/28, then
    // c_k = 3 * sum_{m=2}^{k-2} c_m c_{k-m} / ((2k+1)(k-3)).
    coeffs_.assign(size_t(series_terms), Rational(0));
    coeffs_[2] = g2_ / Rational(20);
    coeffs_[3] = g3_ / Rational(28);
    for (size_t k = 4; k < coeffs_.size(); ++k) {
        Rational acc;
        for (size_t m = 2; m + 2 <= k; ++m) acc += coeffs_[m] * coeffs_[k - m];
        coeffs_[k] = acc * Rational(3) / Rational(long((2 * k + 1) * (k - 3)));
    }
    coeffs_f_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) coeffs_f_.push_back(BigFloat::from_rational(c, bits_));
}

EllipticContext::WpPair EllipticContext::eval_series(const BigComplex& z) const {
    if (z.is_zero()) throw std::domain_error("wp: pole at the origin");
    const mpfr_prec_t bits = mpfr_prec_t(bits_);
    BigComplex one(bits);
    one.re = BigFloat::from_long(1, bits);
    BigComplex zinv = one / z;
    BigComplex zinv2 = zinv * zinv;
    BigComplex w = z * z;

    BigComplex s_p = zinv2;                    // wp partial sum
    BigComplex s_pp = -(zinv2 * zinv) - (zinv2 * zinv); // -2 z^-3
    // term_k(wp) = c_k z^(2k-2) = c_k w^(k-1)
    BigComplex wpow = w; // w^(k-1) at k = 2
    BigFloat eps(bits);
    mpfr_set_ui_2exp(eps.raw(), 1, -bits, MPFR_RNDN);

    int quiet = 0;
    bool have_prev = false;
    BigFloat prev_nonzero(bits);
    for (size_t k = 2; k < coeffs_.size(); ++k) {
        BigComplex ck(bits);
        ck.re = coeffs_f_[k];
        BigComplex term = ck * wpow;
        s_p += term;
        // wp' term: (2k-2) c_k z^(2k-3) = term * (2k-2) / z
        BigComplex dterm = term * (BigComplex::from_doubles(double(2 * k - 2), 0.0, bits)) * zinv;
        s_pp += dterm;

        BigFloat mag = term.abs();
        if (mag.is_zero()) {
            // vanishing Laurent coefficient (e.g. g3 = 0); neutral for the tail
            ++quiet;
        } else {
            BigFloat bound = eps * s_p.abs();
            bool decaying = !have_prev || mag < prev_nonzero;
            quiet = (decaying && mag <= bound) ? quiet + 1 : 0;
            prev_nonzero = mag;
            have_prev = true;
        }
        if (quiet >= 3 && have_prev) return {s_p, s_pp};
        wpow = wpow * w;
    }
    throw NonConvergenceError("wp series did not converge at |z| = " +
                              std::to_string(z.abs().to_double()));
}

BigComplex EllipticContext::wp(const BigComplex& z) const { return eval_series(z).wp; }
BigComplex EllipticContext::wp_prime(const BigComplex& z) const { return eval_series(z).wpp; }

double EllipticContext::ode_residual_ratio(const BigComplex& z) const {
    WpPair v = eval_series(z);
    BigComplex p3 = v.wp * v.wp * v.wp;
    BigComplex lhs = v.wpp * v.wpp - p3 - p3 - p3 - p3 + g2c_ * v.wp + g3c_;
    BigFloat witness = (v.wpp * v.wpp).abs() + p3.abs() * BigFloat::from_long(4, mpfr_prec_t(bits_)) +
                       (g2c_ * v.wp).abs() + g3c_.abs();
    if (witness.is_zero()) return 0.0;
    return (lhs.abs() / witness).to_double();
}

std::string EllipticContext::describe() const {
    return "(g2=" + g2_.to_string() + ", g3=" + g3_.to_string() + ")";
}

std::array<BigComplex, 3> solve_e_roots(const EllipticContext& ctx) {
    const mpfr_prec_t bits = mpfr_prec_t(ctx.precision_bits());
    // double-precision seeds via Cardano for z^3 + p z + q, p = -g2/4, q = -g3/4
    const double p = -ctx.g2().to_double() / 4.0;
    const double q = -ctx.g3().to_double() / 4.0;
    std::complex<double> disc = std::sqrt(std::complex<double>(q * q / 4.0 + p * p * p / 27.0));
    std::complex<double> u3 = -q / 2.0 + disc;
    if (std::abs(u3) < 1e-30) u3 = -q / 2.0 - disc;
    std::complex<double> u = std::pow(u3, 1.0 / 3.0);
    const std::complex<double> omega(-0.5, std::sqrt(3.0) / 2.0);

    std::array<BigComplex, 3> roots{BigComplex(bits), BigComplex(bits), BigComplex(bits)};
    BigComplex four = BigComplex::from_doubles(4.0, 0.0, bits);
    BigComplex twelve = BigComplex::from_doubles(12.0, 0.0, bits);
    for (int i = 0; i < 3; ++i) {
        std::complex<double> ui = u * std::pow(omega, i);
        std::complex<double> seed =
            std::abs(ui) < 1e-30 ? std::complex<double>(0, 0) : ui - p / (3.0 * ui);
        BigComplex z = BigComplex::from_doubles(seed.real(), seed.imag(), bits);
        for (int it = 0; it < 10; ++it) {
            BigComplex f = four * z * z * z - ctx.g2c() * z - ctx.g3c();
            BigComplex fp = twelve * z * z - ctx.g2c();
            if (fp.is_zero()) break;
            z = z - f / fp;
        }
        roots[i] = z;
    }
    // residual + separation checks
    BigFloat tol(bits);
    mpfr_set_ui_2exp(tol.raw(), 1, int(-ctx.precision_bits() / 2), MPFR_RNDN);
    BigFloat scale = roots[0].abs() + roots[1].abs() + roots[2].abs() + BigFloat::from_long(1, bits);
    for (const auto& r : roots) {
        BigComplex f = four * r * r * r - ctx.g2c() * r - ctx.g3c();
        BigFloat w = (four * r * r * r).abs() + (ctx.g2c() * r).abs() + ctx.g3c().abs() +
                     BigFloat::from_long(1, bits);
        if (!(f.abs() <= tol * w))
            throw std::runtime_error("solve_e_roots: Newton refinement failed for " +
                                     ctx.describe());
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if ((roots[i] - roots[j]).abs() <= tol * scale)
                throw std::runtime_error("solve_e_roots: near-degenerate roots for " +
                                         ctx.describe());
    std::sort(roots.begin(), roots.end(), [](const BigComplex& a, const BigComplex& b) {
        if (!(a.re == b.re)) return a.re < b.re;
        return a.im < b.im;
    });
    return roots;
}

BigComplex SamplePoint::argument_value(ArgId id) const {
    const ArgVec& vec = argument_vec(id);
    BigComplex acc(x.at(0).precision());
    for (size_t i = 0; i < vec.size(); ++i) {
        if (vec[i] == 0) continue;
        BigComplex scaled = x.at(i) * BigComplex::from_doubles(double(vec[i]), 0.0, acc.precision());
        acc += scaled;
    }
    return acc;
}

std::vector<SamplePoint> sample_points(const EllipticContext& ctx, int n_vars,
                                       const std::vector<ArgId>& args, int count,
                                       std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    const double lo2 = 0.02 * 0.02, hi2 = 0.06 * 0.06;
    const double amin2 = 0.01 * 0.01;
    const double amax = std::min(ctx.sample_scale(), 0.2);
    const double amax2 = amax * amax;
    const mpfr_prec_t bits = mpfr_prec_t(ctx.precision_bits());
    const double ode_tol = std::ldexp(1.0, int(-ctx.precision_bits() / 2));

    std::vector<SamplePoint> out;
    int attempts = 0;
    while (int(out.size()) < count) {
        if (++attempts > 20000)
            throw std::runtime_error("sample_points: could not satisfy constraints");
        std::vector<std::pair<double, double>> xs(n_vars);
        bool ok = true;
        for (auto& [re, im] : xs) {
            re = -0.06 + 0.12 * unit();
            im = -0.06 + 0.12 * unit();
            double m2 = re * re + im * im;
            if (m2 < lo2 || m2 > hi2) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        for (ArgId id : args) {
            const ArgVec& vec = argument_vec(id);
            double re = 0, im = 0;
            for (size_t i = 0; i < vec.size() && i < size_t(n_vars); ++i) {
                re += vec[i] * xs[i].first;
                im += vec[i] * xs[i].second;
            }
            double m2 = re * re + im * im;
            if (m2 < amin2 || m2 > amax2) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        SamplePoint pt;
        for (auto& [re, im] : xs) pt.x.push_back(BigComplex::from_doubles(re, im, bits));
        try {
            for (ArgId id : args) {
                BigComplex z = pt.argument_value(id);
                if (ctx.ode_residual_ratio(z) > ode_tol) {
                    ok = false;
                    break;
                }
                pt.cache.emplace(id, std::make_pair(ctx.wp(z), ctx.wp_prime(z)));
            }
        } catch (const NonConvergenceError&) {
            ok = false;
        }
        if (!ok) continue;
        out.push_back(std::move(pt));
    }
    return out;
}

EvalResult eval_elliptic_poly(const EllipticContext& ctx, const EllipticPoly& p,
                              const SamplePoint& pt) {
    const mpfr_prec_t bits = mpfr_prec_t(ctx.precision_bits());
    EvalResult r{BigComplex(bits), BigFloat(bits)};
    for (const auto& [m, c] : p.terms()) {
        BigComplex v = BigComplex::from_rational(c, bits);
        for (int i = 0; i < m.nargs; ++i) {
            auto it = pt.cache.find(m.arg[i]);
            std::pair<BigComplex, BigComplex> wp_pair =
                it != pt.cache.end()
                    ? it->second
                    : std::make_pair(ctx.wp(pt.argument_value(m.arg[i])),
                                     ctx.wp_prime(pt.argument_value(m.arg[i])));
            if (m.p[i] > 0) v = v * wp_pair.first.pow_ui(m.p[i]);
            if (m.ppmask & (1u << i)) v = v * wp_pair.second;
        }
        if (m.g2e) v = v * ctx.g2c().pow_ui(m.g2e);
        if (m.g3e) v = v * ctx.g3c().pow_ui(m.g3e);
        r.value += v;
        r.witness += v.abs();
    }
    return r;
}

BigComplex eval_gpoly(const EllipticContext& ctx, const GPoly& p) {
    const mpfr_prec_t bits = mpfr_prec_t(ctx.precision_bits());
    BigComplex acc(bits);
    for (const auto& [m, c] : p.terms()) {
        BigComplex v = BigComplex::from_rational(c, bits);
        if (m[0]) v = v * ctx.g2c().pow_ui(unsigned(m[0]));
        if (m[1]) v = v * ctx.g3c().pow_ui(unsigned(m[1]));
        acc += v;
    }
    return acc;
}

EvalResult eval_epoly(const EllipticContext& ctx, const EPoly& p,
                      const std::array<BigComplex, 3>& roots) {
    const mpfr_prec_t bits = mpfr_prec_t(ctx.precision_bits());
    EvalResult r{BigComplex(bits), BigFloat(bits)};
    for (const auto& [m, c] : p.terms()) {
        BigComplex v = BigComplex::from_rational(c, bits);
        for (int i = 0; i < 3; ++i)
            if (m[i]) v = v * roots[i].pow_ui(unsigned(m[i]));
        if (m[3]) v = v * ctx.g2c().pow_ui(unsigned(m[3]));
        if (m[4]) v = v * ctx.g3c().pow_ui(unsigned(m[4]));
        r.value += v;
        r.witness += v.abs();
    }
    return r;
}

OracleEnv OracleEnv::defaults(long precision_bits, int trials, std::uint64_t seed, int threads) {
    OracleEnv env;
    env.precision_bits = precision_bits;
    env.trials = trials;
    env.seed = seed;
    env.threads = threads;
    env.contexts.emplace_back(Rational(4), Rational(0), precision_bits);
    env.contexts.emplace_back(Rational(0), Rational(4), precision_bits);
    env.contexts.emplace_back(Rational(7, 3), Rational(5, 7), precision_bits);
    return env;
}

OracleOutcome certify_vanishing(const OracleEnv& env, int n_vars,
                                const std::vector<std::pair<std::string, const EllipticPoly*>>& coeffs) {
    OracleOutcome out;
    if (coeffs.empty()) return out;
    if (env.contexts.size() < 2) throw std::invalid_argument("oracle needs >= 2 contexts");
    if (env.trials < 3) throw std::invalid_argument("oracle needs >= 3 trials");

    std::vector<const EllipticPoly*> polys;
    polys.reserve(coeffs.size());
    for (const auto& [label, p] : coeffs) polys.push_back(p);
    std::vector<ArgId> args = collect_arguments(polys);

    const double threshold = std::ldexp(1.0, int(-env.precision_bits / 2));
    out.details.resize(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i) out.details[i].label = coeffs[i].first;

    bool inconclusive = false;
    for (size_t ci = 0; ci < env.contexts.size(); ++ci) {
        const EllipticContext& ctx = env.contexts[ci];
        std::vector<SamplePoint> pts;
        try {
            pts = sample_points(ctx, n_vars, args, env.trials, env.seed + ci);
        } catch (const std::runtime_error&) {
            inconclusive = true;
            continue;
        }
        // one task per coefficient; inner loop over points keeps order fixed
        std::vector<CoeffOutcome> local(coeffs.size());
        parallel_for(coeffs.size(), env.threads, [&](size_t k) {
            CoeffOutcome& co = local[k];
            for (size_t pi = 0; pi < pts.size(); ++pi) {
                EvalResult r = eval_elliptic_poly(ctx, *coeffs[k].second, pts[pi]);
                double av = r.value.abs().to_double();
                double w = r.witness.to_double();
                double ratio = w == 0.0 ? 0.0 : av / w;
                if (ratio >= co.max_ratio) {
                    co.max_ratio = ratio;
                    co.point_index = int(pi);
                    co.context_index = int(ci);
                }
                co.max_abs = std::max(co.max_abs, av);
                co.witness = std::max(co.witness, w);
            }
        });
        for (size_t k = 0; k < coeffs.size(); ++k) {
            auto& dst = out.details[k];
            const auto& src = local[k];
            if (src.max_ratio >= dst.max_ratio) {
                dst.max_ratio = src.max_ratio;
                dst.point_index = src.point_index;
                dst.context_index = src.context_index;
            }
            dst.max_abs = std::max(dst.max_abs, src.max_abs);
            dst.witness = std::max(dst.witness, src.witness);
        }
    }
    for (const auto& d : out.details) {
        out.max_ratio = std::max(out.max_ratio, d.max_ratio);
        out.max_abs_residual = std::max(out.max_abs_residual, d.max_abs);
        out.witness_scale = std::max(out.witness_scale, d.witness);
    }
    if (inconclusive)
        out.status = "inconclusive";
    else
        out.status = out.max_ratio <= threshold ? "pass" : "fail";
    return out;
}

ConstancyOutcome certify_constant(const OracleEnv& env, int n_vars, const EllipticPoly& p,
                                  const GPoly* claimed) {
    ConstancyOutcome out;
    const double threshold = std::ldexp(1.0, int(-env.precision_bits / 2));
    std::vector<ArgId> args = p.arguments();
    double max_ratio = 0.0;
    for (size_t ci = 0; ci < env.contexts.size(); ++ci) {
        const EllipticContext& ctx = env.contexts[ci];
        std::vector<SamplePoint> pts;
        try {
            pts = sample_points(ctx, n_vars, args, env.trials, env.seed + 101 * (ci + 1));
        } catch (const std::runtime_error&) {
            out.inconclusive = true;
            return out;
        }
        std::vector<EvalResult> vals;
        vals.reserve(pts.size());
        for (const auto& pt : pts) vals.push_back(eval_elliptic_poly(ctx, p, pt));
        BigComplex ref = claimed ? eval_gpoly(ctx, *claimed) : vals[0].value;
        for (const auto& v : vals) {
            double w = v.witness.to_double() + ref.abs().to_double();
            double diff = (v.value - ref).abs().to_double();
            double ratio = w == 0.0 ? (diff == 0.0 ? 0.0 : 1.0) : diff / w;
            max_ratio = std::max(max_ratio, ratio);
        }
    }
    out.max_ratio = max_ratio;
    out.constant = max_ratio <= threshold;
    return out;
}

} // namespace cmspec
