#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heegner/cm.hpp"
#include "heegner/cubic_field.hpp"
#include "heegner/curves.hpp"

namespace hg {

struct HeegnerJob {
    int64_t a, b;
    int64_t n;    // |a b^5|
    int rho;      // (-1)^{(n-1)/2}
    int eps;      // (-1)^{(a-b)/2}
    mpfr_prec_t prec = 384;
    mpfr_prec_t max_prec = 16384;
    int max_digits = 80;
    int threads = 0;
};

// validates the hypotheses: squarefree a, b; 6, a, b pairwise coprime;
// a = b (mod 4); |a||b|^{-1} = 5 or 7 (mod 9)
HeegnerJob make_job(int64_t a, int64_t b, mpfr_prec_t prec = 384, int threads = 0);

// (f_-(n omega), -f_+(n omega)) on X^3 + Y^3 = 2
TildePoint tilde_point(int64_t n, mpfr_prec_t prec);

// a_n, b_n evaluated from given f_{+-} values with the character twists of the
// conjugate indexed by x (chi exponent on cbrt(n), Jacobi sign on sqrt(rho n))
struct ConjugateTwist {
    int chi_exponent;  // omega^t on cbrt(n)
    int sqrt_sign;     // +-1 on sqrt(rho n)
};

// the displayed a_n/b_n values from f_{+-} at the transported CM point
std::pair<BigComplex, BigComplex> an_bn(const BigComplex& f_plus, const BigComplex& f_minus,
                                        int64_t n, int rho, const ConjugateTwist& tw,
                                        mpfr_prec_t prec);

// sigma_x applied to the full R_n-rational point (a_n, b_n) + (-omega^{-(n/3)} rho cbrt n, 0)
CxPoint conjugate_point(EisensteinInt x, int64_t n, int rho, mpfr_prec_t prec);

// trace over R_n/Q of the conjugate family; coordinates are real to tolerance
CxPoint trace_point(int64_t n, int rho, mpfr_prec_t prec, int threads = 0);

struct RationalPointCertificate {
    int64_t a, b;
    mpq_class D;          // eps * a / b
    mpq_class x, y;       // exact point on y^2 = x^3 + D
    int64_t n;
    int rho, eps;
    mpq_class x_rho, y_rho;  // the point on E_{rho n} before the b-scaling
    mpfr_prec_t precision_used;
    double trace_residual_log2;  // log2 of |numeric trace - exact point|
    bool non_torsion;
    int64_t h_K;
    bool h_K_odd;
    // generator comparison (when the search found one)
    bool generator_found = false;
    mpq_class gen_x, gen_y;
    double height_ratio = 0;      // approx canonical-height ratio
    int64_t multiple = 0;         // S* = multiple * G exactly (signed), 0 if unknown
    bool odd_multiple_verified = false;
    // descent consistency r([3]S*) ~ u
    bool descent_checked = false;
    bool descent_consistent = false;
    int descent_twist = 0;  // c with c * u * z a square (1 or -3)
};

// full construction; escalates precision on recognition failure
RationalPointCertificate construct_point(const HeegnerJob& job);

// exhaustive small search for a rational point of small height on
// y^2 = x^3 + D (integer x up to xmax, denominators e <= emax)
std::optional<RatPoint> naive_point_search(const mpq_class& D, long xmax, int emax);

// canonical x-height estimate lim h(x(2^m P)) / 4^m
double canonical_height_estimate(const RatPoint& P, const mpq_class& D, int doublings = 7);

// push a complex point on E_1 through the full isogeny/twist chain to E_{rho n};
// returns the per-stage membership residuals (log2) with the final point
struct ChainResult {
    CxPoint end;                      // on E_{rho n}
    std::vector<double> residuals;    // log2 residual after each map
};
ChainResult push_through_chain(const CxPoint& P1, int64_t n, int rho, mpfr_prec_t prec);

}  // namespace hg
