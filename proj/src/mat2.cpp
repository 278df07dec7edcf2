#include "heegner/mat2.hpp"

namespace hg {

bool congruent_mod(const mpq_class& x, const mpq_class& y, long m) {
    mpq_class diff = x - y;
    diff.canonicalize();
    if (mpz_gcd_ui(nullptr, diff.get_den().get_mpz_t(), static_cast<unsigned long>(m)) != 1)
        return false;  // denominator shares a factor with m: not m-integral
    mpz_class num = diff.get_num();
    return mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(m)) != 0;
}

bool congruent_mod(const Mat2Q& x, const Mat2Q& y, long m) {
    return congruent_mod(x.a, y.a, m) && congruent_mod(x.b, y.b, m) &&
           congruent_mod(x.c, y.c, m) && congruent_mod(x.d, y.d, m);
}

NumericReduction reduce_to_fundamental_domain(const BigComplex& tau) {
    if (!(tau.im() > 0L)) throw std::domain_error("reduce: tau not in upper half-plane");
    mpfr_prec_t p = tau.prec();
    Mat2Z gamma_inv;  // accumulates the map tau -> tau0
    BigComplex z = tau;
    BigFloat half(mpq_class(1, 2), p);
    for (int iter = 0; iter < 10000; ++iter) {
        long shift = z.re().round_nearest().to_long();
        if (shift != 0) {
            z = z - BigComplex(shift, p);
            gamma_inv = Mat2Z::T(-shift) * gamma_inv;
        }
        BigFloat n2 = z.norm2();
        if (n2 >= BigFloat(1L, p)) break;
        z = -(z.conj()) / n2;  // -1/z
        gamma_inv = Mat2Z::S().inverse_unimodular() * gamma_inv;
    }
    NumericReduction r;
    r.gamma = gamma_inv.inverse_unimodular();
    r.tau0 = z;
    return r;
}

ExactReduction reduce_to_fundamental_domain(const RatOmega& tau) {
    if (!tau.in_upper_half_plane()) throw std::domain_error("reduce: tau not in upper half-plane");
    Mat2Z gamma_inv;
    RatOmega z = tau;
    for (int iter = 0;; ++iter) {
        if (iter > 100000) throw std::logic_error("reduce: no convergence");
        // re(z) = a - b/2; nearest integer shift
        mpq_class re = z.re2() / 2;
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), re.get_num().get_mpz_t(), re.get_den().get_mpz_t());
        mpq_class frac = re - mpq_class(fl);
        long shift = mpz_get_si(fl.get_mpz_t());
        if (frac > mpq_class(1, 2)) ++shift;
        if (shift != 0) {
            z.a -= shift;
            gamma_inv = Mat2Z::T(-shift) * gamma_inv;
        }
        if (z.norm() >= 1) break;
        // -1/z in Q(omega)
        RatOmega minus_one{mpq_class(-1), mpq_class(0)};
        z = minus_one / z;
        gamma_inv = Mat2Z::S().inverse_unimodular() * gamma_inv;
    }
    ExactReduction r;
    r.gamma = gamma_inv.inverse_unimodular();
    r.tau0 = z;
    return r;
}

}  // namespace hg
