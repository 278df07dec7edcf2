#include "heegner/modular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hg {

DivisionValueIndex DivisionValueIndex::normalized(int N, int alpha, int beta) {
    alpha = ((alpha % N) + N) % N;
    beta = ((beta % N) + N) % N;
    if (alpha == 0 && beta == 0)
        throw std::domain_error("DivisionValueIndex: (0,0) excluded");
    int a2 = (N - alpha) % N, b2 = (N - beta) % N;
    if (a2 < alpha || (a2 == alpha && b2 < beta)) return {N, a2, b2};
    return {N, alpha, beta};
}

DivisionValueIndex transform_index(const DivisionValueIndex& idx, const Mat2Z& g) {
    int64_t ta = g.a * idx.alpha + g.c * idx.beta;
    int64_t tb = g.b * idx.alpha + g.d * idx.beta;
    return DivisionValueIndex::normalized(idx.N, static_cast<int>(ta % idx.N),
                                          static_cast<int>(tb % idx.N));
}

namespace {

// t u / (1 - t u)^2 summand
BigComplex f_term(const BigComplex& tu) {
    BigComplex one(1, tu.prec());
    BigComplex d = one - tu;
    return tu / (d * d);
}

}  // namespace

BigComplex division_value(const DivisionValueIndex& idx, const BigComplex& tau0,
                          long guard_bits) {
    const int N = idx.N;
    mpfr_prec_t prec = tau0.prec();
    double im = tau0.im().to_double();
    if (im < 0.85)
        throw std::domain_error("division_value: tau not reduced (im too small)");
    int alpha = ((idx.alpha % N) + N) % N;
    // +- symmetry keeps alpha <= N/2 so that every series exponent is positive
    if (2 * alpha > N) {
        return division_value(DivisionValueIndex::normalized(N, idx.alpha, idx.beta), tau0,
                              guard_bits);
    }
    int beta = ((idx.beta % N) + N) % N;

    // q = e^{2 pi i tau / N}, T = e^{2 pi i beta / N}
    BigFloat two_pi = BigFloat::pi(prec) * 2;
    BigComplex i_two_pi_over_N(BigFloat(0L, prec), two_pi / N);
    BigComplex q = (i_two_pi_over_N * tau0).exp();
    BigComplex T = (i_two_pi_over_N * BigComplex(beta, prec)).exp();

    BigComplex qa = q.pow_int(alpha);
    BigComplex qN = q.pow_int(N);
    BigComplex Tqa = T * qa;
    BigComplex Tqa_inv = Tqa.inverse();

    BigComplex acc(BigFloat(mpq_class(1, 12), prec), BigFloat(0L, prec));
    acc += f_term(Tqa);

    // term count from the geometric decay |q|^N = e^{-2 pi im}
    double log2_qN = -2.0 * M_PI * im / std::log(2.0);
    double target = -static_cast<double>(prec + guard_bits + 8);
    long M = static_cast<long>(std::ceil((target - 4.0) / log2_qN)) + 2;
    if (M < 2) M = 2;

    BigComplex u1(1, prec), u2(1, prec), u3(1, prec);  // running q^{Nm} multipliers
    for (long m = 1; m <= M; ++m) {
        u1 = u1 * qN;
        acc += f_term(Tqa * u1);
        acc += f_term(Tqa_inv * u1);
        acc -= f_term(u1) * 2L;
    }
    // tail bound: sum_{k>M} k r^k = r^{M+1}((M+1) - M r)/(1-r)^2, applied with
    // the worst-index magnitude; verified in log2 domain
    {
        double r = std::exp(-2.0 * M_PI * im);
        double worst_T = std::max(1.0, std::exp(2.0 * M_PI * im * alpha / N));
        double log2_tail = std::log2(worst_T) + (M + 1) * std::log2(r) +
                           std::log2((M + 1) - M * r) - 4.0 * std::log2(1.0 - r) + 2.0;
        if (log2_tail > target)
            throw std::logic_error("division_value: tail bound exceeded target");
    }
    return acc;
}

BigComplex division_value_at(const DivisionValueIndex& idx, const BigComplex& tau,
                             long guard_bits) {
    NumericReduction red = reduce_to_fundamental_domain(tau);
    Mat2Z ginv = red.gamma;
    DivisionValueIndex tidx = transform_index(idx, ginv);
    BigComplex val = division_value(tidx, red.tau0, guard_bits);
    BigComplex co = ginv.cocycle(red.tau0);
    return val * co * co;
}

namespace {

struct ComboSpec {
    std::pair<int, int> idx;
    int omega_pow;  // weight omega^k
};

BigComplex combo_value(const std::vector<ComboSpec>& combo, const Mat2Z& gamma,
                       const BigComplex& tau0) {
    mpfr_prec_t p = tau0.prec();
    BigComplex acc(p);
    BigComplex w = BigComplex::omega(p);
    for (const auto& cs : combo) {
        DivisionValueIndex idx{6, cs.idx.first, cs.idx.second};
        DivisionValueIndex t = transform_index(idx, gamma);
        BigComplex v = division_value(t, tau0);
        acc += v * w.pow_int(cs.omega_pow);
    }
    return acc;
}

// extra working bits to absorb the cusp-decay cancellation: A, B, C, D have
// q-expansion orders up to 4 at infinity, so forming them from O(1) division
// values cancels about 4 * (2 pi / (6 ln 2)) * im bits
mpfr_prec_t cancellation_bump(double im) {
    if (im < 1.0) im = 1.0;
    return static_cast<mpfr_prec_t>(12.3 * im) + 32;
}

// X and Y from a reduced point and the transport gamma with tau = gamma tau0;
// the (c tau0 + d)^2 cocycles cancel in both ratios
PhiValue phi_from_reduced(const Mat2Z& gamma, const BigComplex& tau0, mpfr_prec_t out_prec) {
    mpfr_prec_t p = tau0.prec();
    BigComplex A = combo_value({{{2, 1}, 0}, {{2, 3}, 2}, {{2, 5}, 1}}, gamma, tau0);
    BigComplex B = combo_value({{{2, 1}, 0}, {{2, 3}, 1}, {{2, 5}, 2}}, gamma, tau0);
    BigComplex C = combo_value({{{0, 1}, 0}}, gamma, tau0) -
                   combo_value({{{0, 4}, 0}}, gamma, tau0);
    BigComplex D = combo_value({{{3, 1}, 0}}, gamma, tau0) -
                   combo_value({{{3, 4}, 0}}, gamma, tau0);
    if (B.is_zero() || D.is_zero())
        throw std::logic_error("eval_phi: denominator vanished (precision failure)");
    BigComplex w2 = BigComplex::omega(p).square();
    PhiValue out;
    BigComplex x = -(w2 * A / B);
    BigComplex y = -(C / D) * 3L;
    out.x = BigComplex(x.re().round_to(out_prec), x.im().round_to(out_prec));
    out.y = BigComplex(y.re().round_to(out_prec), y.im().round_to(out_prec));
    return out;
}

}  // namespace

PhiValue eval_phi(const BigComplex& tau) {
    mpfr_prec_t prec = tau.prec();
    NumericReduction red = reduce_to_fundamental_domain(tau);
    mpfr_prec_t pw = prec + cancellation_bump(red.tau0.im().to_double());
    BigComplex tau0(red.tau0.re().round_to(pw), red.tau0.im().round_to(pw));
    return phi_from_reduced(red.gamma, tau0, prec);
}

PhiValue eval_phi(const RatOmega& tau, mpfr_prec_t prec) {
    ExactReduction red = reduce_to_fundamental_domain(tau);
    double im = red.tau0.b.get_d() * 0.8660254;
    mpfr_prec_t pw = prec + cancellation_bump(im);
    return phi_from_reduced(red.gamma, red.tau0.embed(pw), prec);
}

BigComplex eval_X(const BigComplex& tau) { return eval_phi(tau).x; }
BigComplex eval_Y(const BigComplex& tau) { return eval_phi(tau).y; }
BigComplex eval_X(const RatOmega& tau, mpfr_prec_t prec) { return eval_phi(tau, prec).x; }

namespace {

std::pair<BigComplex, BigComplex> f_pm_from_phi(const PhiValue& v) {
    mpfr_prec_t p = v.x.prec();
    if (v.x.is_zero()) throw std::domain_error("eval_f_pm: X vanishes");
    BigComplex s3 = BigComplex::sqrt_minus3(p);
    BigComplex den = v.x * s3;
    return {(v.y + s3) / den, (v.y - s3) / den};
}

}  // namespace

std::pair<BigComplex, BigComplex> eval_f_pm(const BigComplex& tau) {
    return f_pm_from_phi(eval_phi(tau));
}

std::pair<BigComplex, BigComplex> eval_f_pm(const RatOmega& tau, mpfr_prec_t prec) {
    return f_pm_from_phi(eval_phi(tau, prec));
}

// --- cusp analytics ---------------------------------------------------------

std::vector<Cusp> cusp_catalog(CongruenceGroup g, int N) {
    if (N < 1) throw std::domain_error("cusp_catalog: N must be positive");
    std::vector<Cusp> out;
    if (g == CongruenceGroup::Gamma0N) {
        for (int m = 1; m <= N; ++m) {
            if (N % m) continue;
            int w = std::gcd(m, N / m);
            for (int l = 0; l < w; ++l) {
                if (w > 1 && std::gcd(l, w) != 1) continue;  // no coprime lift exists
                if (m == N) { out.push_back({1, 0}); continue; }
                if (m == 1) { out.push_back({0, 1}); continue; }
                int alpha = (l == 0) ? w : l;
                while (std::gcd(alpha, m) != 1) alpha += w;
                out.push_back({alpha, m});
            }
        }
        return out;
    }
    // Gamma(N)
    auto add_rep = [&](int l, int m) {
        // representative alpha = l (mod N), beta = m (mod N), gcd(alpha, beta) = 1
        for (int s = 0; s <= N; ++s) {
            int64_t a = l + static_cast<int64_t>(N) * s;
            for (int t = 0; t <= N; ++t) {
                int64_t b = m + static_cast<int64_t>(N) * t;
                if (a == 0 && b == 0) continue;
                if (std::gcd(std::abs(a), std::abs(b)) == 1) {
                    out.push_back({a, b});
                    return;
                }
            }
        }
        throw std::logic_error("cusp_catalog: no coprime representative found");
    };
    if (N == 1) return {{1, 0}};
    for (int l = 0; 2 * l <= N; ++l) {
        bool edge = (l == 0 || 2 * l == N);
        int mlo = edge ? (N + 1) / 2 : 1;
        for (int m = mlo; m <= N; ++m) {
            if (std::gcd(std::gcd(l, m), N) != 1) continue;
            add_rep(l, m);
        }
    }
    return out;
}

Mat2Z cusp_matrix(const Cusp& s) {
    if (s.beta == 0) return Mat2Z::identity();
    int64_t a = s.alpha, b = s.beta;
    // extended gcd: u*a + v*b = g
    int64_t old_r = a, r = b, old_u = 1, u = 0, old_v = 0, v = 1;
    while (r != 0) {
        int64_t q = old_r / r;
        int64_t t;
        t = old_r - q * r; old_r = r; r = t;
        t = old_u - q * u; old_u = u; u = t;
        t = old_v - q * v; old_v = v; v = t;
    }
    if (old_r == -1) { old_u = -old_u; old_v = -old_v; old_r = 1; }
    if (old_r != 1) throw std::domain_error("cusp_matrix: cusp not in lowest terms");
    // det [[a, -old_v],[b, old_u]] = a*old_u + b*old_v = 1
    return {a, -old_v, b, old_u};
}

int cusp_width(CongruenceGroup g, int N, const Cusp& s) {
    if (g == CongruenceGroup::GammaN) return N;
    int64_t beta = s.beta % N;
    int64_t g2 = std::gcd(beta * beta, static_cast<int64_t>(N));
    return static_cast<int>(N / g2);
}

namespace {

QSeries fn_series(ModularFnId fn, const Mat2Z& gamma, int hi) {
    switch (fn) {
        case ModularFnId::A3: return A_series(gamma, hi).pow(3);
        case ModularFnId::B3: return B_series(gamma, hi).pow(3);
        case ModularFnId::C: return C_series(gamma, hi);
        case ModularFnId::D2: return D_series(gamma, hi).pow(2);
        case ModularFnId::X3: return X_series(gamma, hi).pow(3);
        case ModularFnId::Y2: return Y_series(gamma, hi).pow(2);
        case ModularFnId::XPlus1:
            return X_series(gamma, hi) + QSeries::constant(QOmega(1), hi);
    }
    throw std::domain_error("unknown function id");
}

}  // namespace

mpq_class order_at_cusp(ModularFnId fn, const Cusp& s, CongruenceGroup g, int N) {
    Mat2Z gamma = cusp_matrix(s);
    QSeries ser = fn_series(fn, gamma, 40);
    auto o = ser.order();
    if (!o) throw std::logic_error("order_at_cusp: series vanished to truncation depth");
    int w = cusp_width(g, N, s);
    mpq_class scale(w, 6);
    scale.canonicalize();
    return mpq_class(*o) * scale;
}

QOmega leading_coeff_x_plus_1(const Cusp& s) {
    Mat2Z gamma = cusp_matrix(s);
    QSeries ser = fn_series(ModularFnId::XPlus1, gamma, 40);
    return ser.leading();
}

std::optional<std::pair<QOmega, QOmega>> phi_cusp_value(const Cusp& s) {
    Mat2Z gamma = cusp_matrix(s);
    QSeries x = X_series(gamma, 24);
    QSeries y = Y_series(gamma, 24);
    auto ox = x.order(), oy = y.order();
    if ((ox && *ox < 0) || (oy && *oy < 0)) return std::nullopt;  // pole: identity
    QOmega xv = x.coeff(0), yv = y.coeff(0);
    return std::make_pair(xv, yv);
}

}  // namespace hg
