#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "heegner/eisenstein.hpp"
#include "heegner/mat2.hpp"

namespace hg {

// Exact element of Q(omega) used as a q-expansion coefficient.
struct QOmega {
    mpq_class a, b;  // a + b*omega

    QOmega() = default;
    QOmega(long x) : a(x), b(0) {}
    QOmega(mpq_class a_, mpq_class b_) : a(std::move(a_)), b(std::move(b_)) {}

    static QOmega omega_pow(int k);  // omega^k
    static QOmega zeta6_pow(int k);  // (1+omega)^k = e^{pi i k/3}

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }
    QOmega conj() const { return {a - b, -b}; }
    mpq_class norm() const { return a * a - a * b + b * b; }

    friend QOmega operator+(const QOmega& x, const QOmega& y) { return {x.a + y.a, x.b + y.b}; }
    friend QOmega operator-(const QOmega& x, const QOmega& y) { return {x.a - y.a, x.b - y.b}; }
    QOmega operator-() const { return {-a, -b}; }
    friend QOmega operator*(const QOmega& x, const QOmega& y) {
        return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
    }
    friend QOmega operator/(const QOmega& x, const QOmega& y) {
        mpq_class n = y.norm();
        if (n == 0) throw std::domain_error("QOmega: division by zero");
        QOmega p = x * y.conj();
        return {p.a / n, p.b / n};
    }
    friend bool operator==(const QOmega& x, const QOmega& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const QOmega& x, const QOmega& y) { return !(x == y); }

    BigComplex embed(mpfr_prec_t prec) const {
        return BigComplex::omega(prec) * BigComplex(BigFloat(b, prec), BigFloat(0L, prec)) +
               BigComplex(BigFloat(a, prec), BigFloat(0L, prec));
    }
};

// Truncated Laurent series in q = e^{2 pi i tau / 6} with QOmega coefficients.
// Coefficients are stored for exponents lo..hi; the series is understood to be
// exact through q^hi.
class QSeries {
  public:
    QSeries() : lo_(0), hi_(-1) {}
    QSeries(int lo, int hi) : lo_(lo), hi_(hi), c_(hi >= lo ? hi - lo + 1 : 0) {}

    static QSeries zero(int hi) { return QSeries(0, hi); }
    static QSeries constant(const QOmega& v, int hi);
    static QSeries monomial(const QOmega& v, int e, int hi);

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    const QOmega& coeff(int e) const;
    void add_term(int e, const QOmega& v);

    // first exponent with nonzero coefficient; nullopt when identically zero
    // through the truncation
    std::optional<int> order() const;
    QOmega leading() const;

    QSeries truncated(int hi) const;
    friend QSeries operator+(const QSeries& f, const QSeries& g);
    friend QSeries operator-(const QSeries& f, const QSeries& g);
    friend QSeries operator*(const QSeries& f, const QSeries& g);
    QSeries operator*(const QOmega& s) const;
    QSeries inverse() const;                      // leading coefficient must be nonzero
    QSeries operator/(const QSeries& g) const { return *this * g.inverse(); }
    QSeries pow(int e) const;

    // substitute q -> omega^t q (multiplies coeff of q^j by omega^{t j})
    QSeries twist_by_omega(int t) const;

    friend bool operator==(const QSeries& f, const QSeries& g);

    // Horner evaluation at numeric q
    BigComplex eval(const BigComplex& q) const;

  private:
    void trim();
    int lo_, hi_;
    std::vector<QOmega> c_;  // c_[e - lo_]
};

// q-expansion of e^{(6)}_{alpha,beta} / (2 pi i)^2 through q^hi.
QSeries division_value_series(int alpha, int beta, int hi);

// Weight-2 building blocks pulled back along gamma in SL2(Z): the series of
// (c tau + d)^{-2} f(gamma tau) for f in {A, B, C, D}.
QSeries A_series(const Mat2Z& gamma, int hi);
QSeries B_series(const Mat2Z& gamma, int hi);
QSeries C_series(const Mat2Z& gamma, int hi);
QSeries D_series(const Mat2Z& gamma, int hi);

// Weight-0 combinations X(gamma tau), Y(gamma tau), as q-series at the cusp
// gamma(infinity).
QSeries X_series(const Mat2Z& gamma, int hi);
QSeries Y_series(const Mat2Z& gamma, int hi);

}  // namespace hg
