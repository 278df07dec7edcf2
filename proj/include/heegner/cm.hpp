#pragma once

#include <cstdint>
#include <vector>

#include "heegner/eisenstein.hpp"
#include "heegner/mat2.hpp"
#include "heegner/modular.hpp"

namespace hg {

// M(x) with M(x)(n omega, 1)^t = x (n omega, 1)^t; det M = norm(x).
Mat2Q matrix_M(EisensteinInt x, int64_t n);

// S(x): det 1, nS integral, M(x) S^{-1} integral and congruent to the identity
// mod 6. The extended-gcd solution (r, s) is canonicalized to minimal |r|.
Mat2Q matrix_S(EisensteinInt x, int64_t n);

// R(x) = S(x) * diag(n, 1)
Mat2Q matrix_R(EisensteinInt x, int64_t n);

// the matrices gamma_plus, gamma_minus, gamma_prime fixed by their mod-2 and
// mod-3 classes
Mat2Z gamma_plus();
Mat2Z gamma_minus();
Mat2Z gamma_prime();

// mod-2 class of x among {1, omega, omega^2}: the exponent
int omega_class_mod2(EisensteinInt x);
// x = sign * omega^j (mod 3); returns {j, sign}
std::pair<int, int> omega_class_mod3(EisensteinInt x);

// S(x) = +- (gamma')^r gamma_{-(n/3)}^j (mod 6), the sign free in the mod-3
// component only
bool check_randj_congruence(EisensteinInt x, int64_t n);

// U_x(omega) = X(S(x) n omega) + 1, evaluated through the exact Moebius image
BigComplex conjugate_value(EisensteinInt x, int64_t n, mpfr_prec_t prec);
// the transported CM point S(x) * (n omega) itself
RatOmega conjugate_point_tau(EisensteinInt x, int64_t n);

struct NormUResult {
    BigComplex U;               // prod over B0 u B1 u B2 of U_x(omega)
    BigFloat log_norm_K;        // log N_{K-norm} = 2 log |U|
    size_t conjugate_count;
};

// Norm product over the conjugate set; conjugate values may be computed in
// parallel, the fold is a deterministic balanced reduction over the canonical
// (a, b) ordering.
NormUResult norm_U(int64_t n, mpfr_prec_t prec, int threads = 0);

// c_{alpha,beta}(d): brute-force count over B_i and the closed form
int64_t c_coeff(int64_t alpha, int64_t beta, int64_t d, int64_t n);
int64_t c_coeff_closed(int64_t alpha, int64_t beta, int64_t d, int64_t n);

// C(alpha, beta) (exact; integer-valued on coprime pairs)
mpq_class C_of(int64_t alpha, int64_t beta, int64_t n);

// ord of U at the cusp [alpha/beta] of X(6n): 2 w C(alpha, beta)
int64_t order_of_U(int64_t alpha, int64_t beta, int64_t n);

// the same order summed directly over the conjugate set (+-2 lambda^2 per
// member); independent oracle for order_of_U
int64_t order_of_U_brute(int64_t alpha, int64_t beta, int64_t n);

// sum of C(a, b) over 1 <= a,b <= 3n, 3|a, b = 1 mod 3, gcd(a,b,n) = 1,
// evaluated through coprime lifts; equals f(n) n^3 prod_{p|n}(1 - p^-2)
mpq_class degree_sum(int64_t n);
mpq_class degree_expected(int64_t n);

}  // namespace hg
