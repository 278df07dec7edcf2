#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "heegner/bigcomplex.hpp"
#include "heegner/eisenstein.hpp"
#include "heegner/mat2.hpp"
#include "heegner/qseries.hpp"

namespace hg {

// Index of a p-division value at level N, normalized under (a,b) ~ -(a,b).
struct DivisionValueIndex {
    int N;
    int alpha;
    int beta;

    static DivisionValueIndex normalized(int N, int alpha, int beta);
    friend bool operator==(const DivisionValueIndex& x, const DivisionValueIndex& y) {
        return x.N == y.N && x.alpha == y.alpha && x.beta == y.beta;
    }
};

// (alpha, beta) -> (a alpha + c beta, b alpha + d beta) mod N; the weight-2
// cocycle (c tau + d)^2 is carried by the caller.
DivisionValueIndex transform_index(const DivisionValueIndex& idx, const Mat2Z& gamma);

// e^{(N)}_{alpha,beta}(tau0) / (2 pi i)^2 for tau0 already in the standard
// fundamental domain; geometric tail bound below 2^{-(prec+guard)}.
BigComplex division_value(const DivisionValueIndex& idx, const BigComplex& tau0,
                          long guard_bits = 16);

// Same value at arbitrary tau in the upper half-plane: reduces, transports the
// index and multiplies the (c tau0 + d)^2 factor back in.
BigComplex division_value_at(const DivisionValueIndex& idx, const BigComplex& tau,
                             long guard_bits = 16);

struct PhiValue {
    BigComplex x, y;
};

// The level-6 parametrization phi = (X, Y) with Y^2 = X^3 + 1.
BigComplex eval_X(const BigComplex& tau);
BigComplex eval_Y(const BigComplex& tau);
PhiValue eval_phi(const BigComplex& tau);
// Exact-argument variants for CM points (reduction done in Q(omega))
BigComplex eval_X(const RatOmega& tau, mpfr_prec_t prec);
PhiValue eval_phi(const RatOmega& tau, mpfr_prec_t prec);

// f_{+-}(tau) = (Y +- sqrt(-3)) / (X sqrt(-3)); first = f_plus, second = f_minus
std::pair<BigComplex, BigComplex> eval_f_pm(const BigComplex& tau);
std::pair<BigComplex, BigComplex> eval_f_pm(const RatOmega& tau, mpfr_prec_t prec);

// --- cusp analytics ---------------------------------------------------------

struct Cusp {
    int64_t alpha;  // (1,0) denotes infinity
    int64_t beta;
    friend bool operator==(const Cusp& s, const Cusp& t) {
        return s.alpha == t.alpha && s.beta == t.beta;
    }
};

enum class CongruenceGroup { GammaN, Gamma0N };

std::vector<Cusp> cusp_catalog(CongruenceGroup g, int N);

// gamma with gamma(infinity) = cusp
Mat2Z cusp_matrix(const Cusp& s);
// width of the cusp for the group
int cusp_width(CongruenceGroup g, int N, const Cusp& s);

enum class ModularFnId { A3, B3, C, D2, X3, Y2, XPlus1 };

// order of the catalogued function at the cusp, in the local parameter of the
// group (exact rational)
mpq_class order_at_cusp(ModularFnId fn, const Cusp& s, CongruenceGroup g, int N);

// exact leading Fourier coefficient of X+1 at a cusp of X(6)
QOmega leading_coeff_x_plus_1(const Cusp& s);

// exact cusp value of phi on X(6); nullopt = pole (the point at infinity)
std::optional<std::pair<QOmega, QOmega>> phi_cusp_value(const Cusp& s);

}  // namespace hg
