#include "heegner/curves.hpp"

#include <cmath>

namespace hg {

bool rat_on_curve(const RatPoint& P, const mpq_class& D) {
    if (P.infinity) return true;
    return P.y * P.y == P.x * P.x * P.x + D;
}

RatPoint rat_neg(const RatPoint& P) {
    if (P.infinity) return P;
    return RatPoint::make(P.x, -P.y);
}

RatPoint rat_add(const RatPoint& P, const RatPoint& Q, const mpq_class& D) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    mpq_class lambda;
    if (P.x == Q.x) {
        if (P.y + Q.y == 0) return RatPoint::O();
        // tangent
        lambda = 3 * P.x * P.x / (2 * P.y);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    mpq_class x3 = lambda * lambda - P.x - Q.x;
    mpq_class y3 = lambda * (P.x - x3) - P.y;
    (void)D;
    return RatPoint::make(x3, y3);
}

RatPoint rat_mul(long k, const RatPoint& P, const mpq_class& D) {
    RatPoint base = k >= 0 ? P : rat_neg(P);
    unsigned long m = k >= 0 ? static_cast<unsigned long>(k) : static_cast<unsigned long>(-k);
    RatPoint acc = RatPoint::O();
    while (m) {
        if (m & 1) acc = rat_add(acc, base, D);
        base = rat_add(base, base, D);
        m >>= 1;
    }
    return acc;
}

// --- complex Weierstrass ---------------------------------------------------------

namespace {

bool cx_close(const BigComplex& a, const BigComplex& b) {
    mpfr_prec_t p = a.prec();
    long scale = std::max({a.abs().exponent(), b.abs().exponent(), 0L});
    return (a - b).abs().exponent() < scale - static_cast<long>(p) + 64;
}

}  // namespace

BigFloat cx_curve_residual(const CxPoint& P, const BigComplex& D) {
    if (P.infinity) return BigFloat(0L, D.prec());
    return (P.y * P.y - P.x * P.x * P.x - D).abs();
}

CxPoint cx_neg(const CxPoint& P) {
    if (P.infinity) return P;
    return CxPoint::make(P.x, -P.y);
}

CxPoint cx_add(const CxPoint& P, const CxPoint& Q, const BigComplex& D) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    mpfr_prec_t p = D.prec();
    BigComplex lambda(p);
    if (cx_close(P.x, Q.x)) {
        if (cx_close(P.y, -Q.y)) return CxPoint::O();
        lambda = (P.x.square() * 3L) / (P.y * 2L);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    BigComplex x3 = lambda.square() - P.x - Q.x;
    BigComplex y3 = lambda * (P.x - x3) - P.y;
    return CxPoint::make(std::move(x3), std::move(y3));
}

CxPoint cx_mul(long k, const CxPoint& P, const BigComplex& D) {
    CxPoint base = k >= 0 ? P : cx_neg(P);
    unsigned long m = k >= 0 ? static_cast<unsigned long>(k) : static_cast<unsigned long>(-k);
    CxPoint acc = CxPoint::O();
    while (m) {
        if (m & 1) acc = cx_add(acc, base, D);
        base = cx_add(base, base, D);
        m >>= 1;
    }
    return acc;
}

// --- cubic models ----------------------------------------------------------------

BigFloat tilde_residual(const TildePoint& P, const BigComplex& N) {
    if (P.identity) return BigFloat(0L, N.prec());
    return (P.x.pow_int(3) + P.y.pow_int(3) - N).abs();
}

BigFloat cab_residual(const CabPoint& P, const BigComplex& A, const BigComplex& B) {
    if (P.identity) return BigFloat(0L, A.prec());
    return (A * P.x.pow_int(3) + B * P.y.pow_int(3) - BigComplex(1, A.prec())).abs();
}

TildePoint phi_N(const CxPoint& P, const BigComplex& N) {
    if (P.infinity) return TildePoint::O();
    if (P.x.is_zero()) throw std::domain_error("phi_N: x = 0 maps to a non-identity flex");
    BigComplex nineN = N * 9L;
    BigComplex den = P.x * 3L;
    return TildePoint::make((nineN + P.y) / den, (nineN - P.y) / den);
}

CxPoint phi_N_inv(const TildePoint& P, const BigComplex& N) {
    if (P.identity) return CxPoint::O();
    BigComplex s = P.x + P.y;
    if (s.is_zero()) throw std::domain_error("phi_N_inv: X + Y = 0 is the identity direction");
    return CxPoint::make((N * 6L) / s, N * 9L * (P.x - P.y) / s);
}

TildePoint tilde_neg(const TildePoint& P) {
    if (P.identity) return P;
    return TildePoint::make(P.y, P.x);
}

TildePoint tilde_add(const TildePoint& P, const TildePoint& Q, const BigComplex& N) {
    if (P.identity) return Q;
    if (Q.identity) return P;
    BigComplex half_N = N / 2L;
    BigComplex D = half_N.square() * (-27L);
    CxPoint a = phi_N_inv(P, half_N);
    CxPoint b = phi_N_inv(Q, half_N);
    CxPoint c = cx_add(a, b, D);
    if (c.infinity) return TildePoint::O();
    return phi_N(c, half_N);
}

TildePoint lambda_AB(const CabPoint& P, const BigComplex& A, const BigComplex& B) {
    if (P.identity) return TildePoint::O();
    mpfr_prec_t p = A.prec();
    BigComplex x3 = P.x.pow_int(3), y3 = P.y.pow_int(3);
    BigComplex xy = P.x * P.y;
    if (xy.is_zero()) throw std::domain_error("lambda_AB: x y = 0 excluded");
    BigComplex ab_xy3 = A * B * x3 * y3;
    BigComplex den = BigComplex(1, p) - ab_xy3;
    if (den.is_zero()) throw std::domain_error("lambda_AB: 1 - A B x^3 y^3 = 0 excluded");
    BigComplex U = A * B * xy.square() * 3L / den;
    BigComplex V = (A * x3 - B * y3) * (ab_xy3 + 2L) / (xy * 3L * den);
    return TildePoint::make((U + V) / 2L, (U - V) / 2L);
}

CxPoint sextic_twist(const CxPoint& P, const BigComplex& t) {
    if (P.infinity) return P;
    BigComplex t2 = t.square();
    return CxPoint::make(t2 * P.x, t2 * t * P.y);
}

CabPoint g_map(const TildePoint& P, int64_t n, mpfr_prec_t prec) {
    if (P.identity) return CabPoint::O();
    BigFloat c2n2 = BigFloat(static_cast<long>(2 * n * n), prec).cbrt();
    BigFloat c4 = BigFloat(4L, prec).cbrt();
    return CabPoint::make(P.x / c2n2, P.y / c4);
}

CabPoint h_map(const TildePoint& P, int64_t n, mpfr_prec_t prec) {
    if (P.identity) return CabPoint::O();
    BigFloat c2 = BigFloat(2L, prec).cbrt();
    BigFloat c4n2 = BigFloat(static_cast<long>(4 * n * n), prec).cbrt();
    return CabPoint::make(P.x / c2, P.y / c4n2);
}

// --- descent ----------------------------------------------------------------------

namespace {

// strip square factors from the content of an integral element (bounded trial
// division; the leftover cofactor is left untouched)
CFElem strip_rational_squares(const CubicField& K, const CFElem& z, bool& fully_reduced) {
    // scale to an integral element first
    mpz_class den = lcm(lcm(z.c0.get_den(), z.c1.get_den()), z.c2.get_den());
    CFElem w = K.mul_scalar(z, mpq_class(den * den));  // den^2 * z keeps the square class
    mpz_class g = gcd(gcd(w.c0.get_num(), w.c1.get_num()), w.c2.get_num());
    fully_reduced = true;
    mpz_class sq(1);
    mpz_class rem = g;
    for (long pp = 2; pp < 100000 && rem > 1; ++pp) {
        mpz_class p(pp), p2 = p * p;
        while (mpz_divisible_p(rem.get_mpz_t(), p2.get_mpz_t())) {
            sq *= p;
            rem /= p2;
        }
        while (mpz_divisible_p(rem.get_mpz_t(), p.get_mpz_t())) rem /= p;
    }
    if (rem > 1) fully_reduced = false;  // content has a large unfactored part
    mpq_class scale(1);
    scale /= mpq_class(sq * sq);
    return K.mul_scalar(w, scale);
}

}  // namespace

DescentValue descent_r(const CubicField& K, const RatPoint& P, int rho) {
    if (P.infinity) return {K.one(), true};
    // z = x + rho theta is never zero for rational x; the K-rational 2-torsion
    // point (-rho theta, 0), where the map takes the value 3, is not a RatPoint
    CFElem z = K.add(K.from_rational(P.x), K.mul_scalar(K.theta(), mpq_class(rho)));
    bool reduced;
    CFElem r = strip_rational_squares(K, z, reduced);
    return {r, reduced};
}

std::optional<mpq_class> recognize_rational(const BigFloat& z, int max_digits) {
    mpfr_prec_t prec = z.prec();
    BigFloat tol = BigFloat::pow2(-static_cast<long>(prec) / 2, prec);
    mpz_class qbound;
    mpz_ui_pow_ui(qbound.get_mpz_t(), 10, static_cast<unsigned long>(max_digits));

    // accept a convergent only when it beats the generic q^{-2} approximation
    // quality by a wide margin; every real number has convergents at q^{-2}
    auto good = [&](const mpq_class& cand) {
        BigFloat diff = (z - BigFloat(cand, prec)).abs();
        if (!(diff < tol)) return false;
        mpz_class den2 = cand.get_den() * cand.get_den();
        return diff * BigFloat(den2, prec) < BigFloat::pow2(-48, prec);
    };

    BigFloat x = z;
    mpz_class p0(1), q0(0), p1, q1;
    mpz_class a0 = x.to_mpz_floor();
    p1 = a0;
    q1 = 1;
    for (int it = 0; it < 20000; ++it) {
        mpq_class cand(p1, q1);
        cand.canonicalize();
        if (good(cand)) return cand;
        BigFloat frac = x - x.floor();
        if (frac.is_zero()) break;
        x = BigFloat(1L, prec) / frac;
        mpz_class a = x.to_mpz_floor();
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (q1 > qbound) break;
    }
    mpq_class cand(p1, q1);
    cand.canonicalize();
    if (good(cand)) return cand;
    return std::nullopt;
}

std::optional<CFElem> sqrt_in_K(const CubicField& K, const CFElem& v, mpfr_prec_t prec,
                                int max_digits) {
    if (v.is_zero()) return K.from_rational(0);
    BigFloat s0 = K.embed_real(v, prec);
    if (s0.sign() < 0) return std::nullopt;
    BigComplex s1 = K.embed_complex(v, prec);
    BigFloat w0 = s0.sqrt();
    BigComplex w1 = s1.sqrt();

    // invert the embedding matrix (basis 1, theta, theta^2/k)
    BigFloat nu = BigFloat(static_cast<long>(K.n()), prec).cbrt();
    BigFloat nu2k = nu * nu / static_cast<long>(K.k());
    BigComplex w = BigComplex::omega(prec);
    // rows: (1, nu, nu2k), (1, Re(w) nu, Re(w^2) nu2k), (0, Im(w) nu, Im(w^2) nu2k)
    BigFloat half(mpq_class(-1, 2), prec);
    BigFloat s3 = BigFloat(3L, prec).sqrt() / 2;
    BigFloat E[3][3] = {{BigFloat(1L, prec), nu, nu2k},
                        {BigFloat(1L, prec), half * nu, half * nu2k},
                        {BigFloat(0L, prec), s3 * nu, -s3 * nu2k}};
    for (int sign = 0; sign < 2; ++sign) {
        BigComplex cand1 = sign ? -w1 : w1;
        BigFloat rhs[3] = {w0, cand1.re(), cand1.im()};
        // solve E * c = rhs by Cramer with BigFloat
        auto det3 = [&](BigFloat m[3][3]) {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        };
        BigFloat D = det3(E);
        mpq_class coords[3];
        bool ok = true;
        for (int col = 0; col < 3 && ok; ++col) {
            BigFloat M[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) M[i][j] = (j == col) ? rhs[i] : E[i][j];
            BigFloat c = det3(M) / D;
            auto r = recognize_rational(c, max_digits);
            if (!r) { ok = false; break; }
            coords[col] = *r;
        }
        if (!ok) continue;
        CFElem cand{coords[0], coords[1], coords[2]};
        if (K.mul(cand, cand) == v) return cand;
    }
    return std::nullopt;
}

bool is_square_in_K(const CubicField& K, const CFElem& v, mpfr_prec_t prec, int max_digits) {
    return sqrt_in_K(K, v, prec, max_digits).has_value();
}

}  // namespace hg
