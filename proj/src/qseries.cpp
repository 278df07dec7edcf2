#include "heegner/qseries.hpp"

#include <algorithm>

namespace hg {

QOmega QOmega::omega_pow(int k) {
    switch (((k % 3) + 3) % 3) {
        case 0: return {mpq_class(1), mpq_class(0)};
        case 1: return {mpq_class(0), mpq_class(1)};
        default: return {mpq_class(-1), mpq_class(-1)};
    }
}

QOmega QOmega::zeta6_pow(int k) {
    // zeta6 = 1 + omega, zeta6^3 = -1
    int m = ((k % 6) + 6) % 6;
    static const std::pair<int, int> tab[6] = {
        {1, 0},   // 1
        {1, 1},   // 1 + omega
        {0, 1},   // omega
        {-1, 0},  // -1
        {-1, -1}, // -1 - omega
        {0, -1},  // -omega
    };
    return {mpq_class(tab[m].first), mpq_class(tab[m].second)};
}

QSeries QSeries::constant(const QOmega& v, int hi) {
    QSeries s(0, hi);
    if (hi >= 0) s.c_[0] = v;
    return s;
}

QSeries QSeries::monomial(const QOmega& v, int e, int hi) {
    QSeries s(std::min(e, 0), hi);
    if (e <= hi) s.c_[e - s.lo_] = v;
    return s;
}

const QOmega& QSeries::coeff(int e) const {
    static const QOmega zero{};
    if (e < lo_ || e > hi_) return zero;
    return c_[e - lo_];
}

void QSeries::add_term(int e, const QOmega& v) {
    if (e > hi_) return;
    if (e < lo_) {
        c_.insert(c_.begin(), lo_ - e, QOmega{});
        lo_ = e;
    }
    c_[e - lo_] = c_[e - lo_] + v;
}

std::optional<int> QSeries::order() const {
    for (int e = lo_; e <= hi_; ++e)
        if (!c_[e - lo_].is_zero()) return e;
    return std::nullopt;
}

QOmega QSeries::leading() const {
    auto o = order();
    if (!o) throw std::logic_error("QSeries: zero series has no leading coefficient");
    return coeff(*o);
}

QSeries QSeries::truncated(int hi) const {
    QSeries r(lo_, std::min(hi, hi_));
    for (int e = r.lo_; e <= r.hi_; ++e) r.c_[e - r.lo_] = coeff(e);
    return r;
}

void QSeries::trim() {
    while (!c_.empty() && c_.front().is_zero() && lo_ < 0) {
        c_.erase(c_.begin());
        ++lo_;
    }
}

QSeries operator+(const QSeries& f, const QSeries& g) {
    QSeries r(std::min(f.lo_, g.lo_), std::min(f.hi_, g.hi_));
    for (int e = r.lo_; e <= r.hi_; ++e) r.c_[e - r.lo_] = f.coeff(e) + g.coeff(e);
    return r;
}

QSeries operator-(const QSeries& f, const QSeries& g) {
    QSeries r(std::min(f.lo_, g.lo_), std::min(f.hi_, g.hi_));
    for (int e = r.lo_; e <= r.hi_; ++e) r.c_[e - r.lo_] = f.coeff(e) - g.coeff(e);
    return r;
}

QSeries operator*(const QSeries& f, const QSeries& g) {
    // valid through min(f.hi + g.ord, g.hi + f.ord); use stored lo as the
    // conservative order bound
    int hi = std::min(f.hi_ + g.lo_, g.hi_ + f.lo_);
    QSeries r(f.lo_ + g.lo_, hi);
    for (int i = f.lo_; i <= f.hi_; ++i) {
        if (f.coeff(i).is_zero()) continue;
        for (int j = g.lo_; j <= g.hi_; ++j) {
            int e = i + j;
            if (e > hi) break;
            if (g.coeff(j).is_zero()) continue;
            r.c_[e - r.lo_] = r.c_[e - r.lo_] + f.coeff(i) * g.coeff(j);
        }
    }
    return r;
}

QSeries QSeries::operator*(const QOmega& s) const {
    QSeries r(lo_, hi_);
    for (int e = lo_; e <= hi_; ++e) r.c_[e - lo_] = coeff(e) * s;
    return r;
}

QSeries QSeries::inverse() const {
    auto o = order();
    if (!o) throw std::domain_error("QSeries: inverse of zero series");
    int v = *o;
    int len = hi_ - v;  // number of known coefficients beyond the lead
    QOmega lead = coeff(v);
    // h = inverse with lead exponent -v; g*h = 1
    QSeries h(-v, -v + len);
    h.c_[0] = QOmega(1) / lead;
    for (int k = 1; k <= len; ++k) {
        QOmega acc{};
        for (int j = 1; j <= k; ++j) acc = acc + coeff(v + j) * h.c_[k - j];
        h.c_[k] = QOmega{} - acc / lead;
    }
    return h;
}

QSeries QSeries::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    // repeated multiplication; exponents here are tiny
    QSeries acc = QSeries::constant(QOmega(1), hi_);
    for (int i = 0; i < e; ++i) acc = acc * *this;
    return acc;
}

QSeries QSeries::twist_by_omega(int t) const {
    QSeries r(lo_, hi_);
    for (int e = lo_; e <= hi_; ++e) r.c_[e - lo_] = coeff(e) * QOmega::omega_pow(t * e);
    return r;
}

bool operator==(const QSeries& f, const QSeries& g) {
    int hi = std::min(f.hi_, g.hi_);
    int lo = std::min(f.lo_, g.lo_);
    for (int e = lo; e <= hi; ++e)
        if (f.coeff(e) != g.coeff(e)) return false;
    return true;
}

BigComplex QSeries::eval(const BigComplex& q) const {
    mpfr_prec_t p = q.prec();
    BigComplex result(p);
    BigComplex qe = q.pow_int(lo_);
    for (int e = lo_; e <= hi_; ++e) {
        const QOmega& co = coeff(e);
        if (!co.is_zero()) result += co.embed(p) * qe;
        qe = qe * q;
    }
    return result;
}

// --- builders ---------------------------------------------------------------

QSeries division_value_series(int alpha, int beta, int hi) {
    alpha = ((alpha % 6) + 6) % 6;
    beta = ((beta % 6) + 6) % 6;
    if (alpha == 0 && beta == 0)
        throw std::domain_error("division_value_series: index (0,0) excluded");
    QSeries s(std::min(0, 0), hi);
    s.add_term(0, QOmega{mpq_class(1, 12), mpq_class(0)});
    QOmega T = QOmega::zeta6_pow(beta);

    // pole piece T q^alpha / (1 - T q^alpha)^2 = sum_{k>=1} k T^k q^{alpha k}
    if (alpha == 0) {
        QOmega t1 = T / ((QOmega(1) - T) * (QOmega(1) - T));
        s.add_term(0, t1);
    } else {
        QOmega Tk(1);
        for (int k = 1; alpha * k <= hi; ++k) {
            Tk = Tk * T;
            s.add_term(alpha * k, QOmega(k) * Tk);
        }
    }
    // F(T q^alpha, q^6) = sum_{m>=1} sum_{k>=1} k T^k q^{(6m+alpha)k}
    for (int m = 1; 6 * m + alpha <= hi; ++m) {
        QOmega Tk(1);
        for (int k = 1; (6 * m + alpha) * k <= hi; ++k) {
            Tk = Tk * T;
            s.add_term((6 * m + alpha) * k, QOmega(k) * Tk);
        }
    }
    // F(T^{-1} q^{-alpha}, q^6) = sum_{m>=1} sum_{k>=1} k T^{-k} q^{(6m-alpha)k}
    QOmega Tinv = QOmega(1) / T;
    for (int m = 1; 6 * m - alpha <= hi; ++m) {
        if (6 * m - alpha <= 0) continue;
        QOmega Tk(1);
        for (int k = 1; (6 * m - alpha) * k <= hi; ++k) {
            Tk = Tk * Tinv;
            s.add_term((6 * m - alpha) * k, QOmega(k) * Tk);
        }
    }
    // -2 F(1, q^6)
    for (int m = 1; 6 * m <= hi; ++m)
        for (int k = 1; 6 * m * k <= hi; ++k)
            s.add_term(6 * m * k, QOmega(-2 * k));
    return s;
}

namespace {

// weight-2 pullback of a linear combination of division values
QSeries combo_series(const std::vector<std::pair<std::pair<int, int>, QOmega>>& terms,
                     const Mat2Z& g, int hi) {
    QSeries s = QSeries::zero(hi);
    for (const auto& [idx, w] : terms) {
        int alpha = idx.first, beta = idx.second;
        int ta = static_cast<int>(g.a) * alpha + static_cast<int>(g.c) * beta;
        int tb = static_cast<int>(g.b) * alpha + static_cast<int>(g.d) * beta;
        s = s + division_value_series(ta, tb, hi) * w;
    }
    return s;
}

}  // namespace

QSeries A_series(const Mat2Z& g, int hi) {
    return combo_series({{{2, 1}, QOmega(1)},
                         {{2, 3}, QOmega::omega_pow(2)},
                         {{2, 5}, QOmega::omega_pow(1)}},
                        g, hi);
}

QSeries B_series(const Mat2Z& g, int hi) {
    return combo_series({{{2, 1}, QOmega(1)},
                         {{2, 3}, QOmega::omega_pow(1)},
                         {{2, 5}, QOmega::omega_pow(2)}},
                        g, hi);
}

QSeries C_series(const Mat2Z& g, int hi) {
    return combo_series({{{0, 1}, QOmega(1)}, {{0, 4}, QOmega(-1)}}, g, hi);
}

QSeries D_series(const Mat2Z& g, int hi) {
    return combo_series({{{3, 1}, QOmega(1)}, {{3, 4}, QOmega(-1)}}, g, hi);
}

QSeries X_series(const Mat2Z& g, int hi) {
    // -omega^2 A/B; the weight-2 cocycles cancel in the ratio
    return (A_series(g, hi) * QOmega::omega_pow(2) * QOmega(-1)) / B_series(g, hi);
}

QSeries Y_series(const Mat2Z& g, int hi) {
    return (C_series(g, hi) * QOmega(-3)) / D_series(g, hi);
}

}  // namespace hg
