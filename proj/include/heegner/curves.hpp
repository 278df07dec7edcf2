#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>

#include "heegner/bigcomplex.hpp"
#include "heegner/cubic_field.hpp"

namespace hg {

// --- exact rational points on y^2 = x^3 + D ----------------------------------

struct RatPoint {
    bool infinity = true;
    mpq_class x, y;

    static RatPoint O() { return {}; }
    static RatPoint make(mpq_class x, mpq_class y) { return {false, std::move(x), std::move(y)}; }
};

bool rat_on_curve(const RatPoint& P, const mpq_class& D);
RatPoint rat_neg(const RatPoint& P);
RatPoint rat_add(const RatPoint& P, const RatPoint& Q, const mpq_class& D);
RatPoint rat_mul(long k, const RatPoint& P, const mpq_class& D);

// --- complex points on y^2 = x^3 + D ------------------------------------------

struct CxPoint {
    bool infinity = true;
    BigComplex x, y;

    static CxPoint O() { return {}; }
    static CxPoint make(BigComplex x, BigComplex y) { return {false, std::move(x), std::move(y)}; }
};

// |y^2 - x^3 - D|, zero for O
BigFloat cx_curve_residual(const CxPoint& P, const BigComplex& D);
CxPoint cx_neg(const CxPoint& P);
CxPoint cx_add(const CxPoint& P, const CxPoint& Q, const BigComplex& D);
CxPoint cx_mul(long k, const CxPoint& P, const BigComplex& D);

// --- cubic models ---------------------------------------------------------------
// TildePoint lives on X^3 + Y^3 = N (identity [1:-1:0]); CabPoint lives on
// A X^3 + B Y^3 = 1 (identity [1/cbrt A : -1/cbrt B : 0]).

struct TildePoint {
    bool identity = true;
    BigComplex x, y;
    static TildePoint O() { return {}; }
    static TildePoint make(BigComplex x, BigComplex y) {
        return {false, std::move(x), std::move(y)};
    }
};

struct CabPoint {
    bool identity = true;
    BigComplex x, y;
    static CabPoint O() { return {}; }
    static CabPoint make(BigComplex x, BigComplex y) { return {false, std::move(x), std::move(y)}; }
};

BigFloat tilde_residual(const TildePoint& P, const BigComplex& N);
BigFloat cab_residual(const CabPoint& P, const BigComplex& A, const BigComplex& B);

// phi_N: E_{-27 N^2} -> tilde{E}_{2N} and its inverse
TildePoint phi_N(const CxPoint& P, const BigComplex& N);
CxPoint phi_N_inv(const TildePoint& P, const BigComplex& N);

// group law on tilde{E}_N transported through phi_{N/2}
TildePoint tilde_add(const TildePoint& P, const TildePoint& Q, const BigComplex& N);
TildePoint tilde_neg(const TildePoint& P);

// lambda_{A,B}: C_{A,B} -> tilde{E}_{AB}
TildePoint lambda_AB(const CabPoint& P, const BigComplex& A, const BigComplex& B);

// sextic twist (x, y) -> (t^2 x, t^3 y): E_D -> E_{D t^6}
CxPoint sextic_twist(const CxPoint& P, const BigComplex& t);

// scalings tilde{E}_2 -> C_{n^2,2} and tilde{E}_2 -> C_{1,2n^2}
CabPoint g_map(const TildePoint& P, int64_t n, mpfr_prec_t prec);
CabPoint h_map(const TildePoint& P, int64_t n, mpfr_prec_t prec);

// --- descent map ----------------------------------------------------------------

struct DescentValue {
    CFElem value;   // representative of x + rho*cbrt(n) modulo squares
    bool reduced;   // false when the square-reduction budget was exhausted
};

// r(x, y) = x + rho cbrt(n) on E_{rho n}(Q); r(O) = 1, r(-rho cbrt n, 0) = 3
DescentValue descent_r(const CubicField& K, const RatPoint& P, int rho);

// exact square root in K, found numerically and verified exactly
std::optional<CFElem> sqrt_in_K(const CubicField& K, const CFElem& v, mpfr_prec_t prec,
                                int max_digits = 80);
bool is_square_in_K(const CubicField& K, const CFElem& v, mpfr_prec_t prec,
                    int max_digits = 80);

// continued-fraction rational recognition: convergent with denominator at most
// 10^max_digits reproducing z to 2^{-prec/2}; nullopt when no convergent fits
std::optional<mpq_class> recognize_rational(const BigFloat& z, int max_digits);

}  // namespace hg
