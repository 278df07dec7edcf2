#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <stdexcept>

#include "heegner/bigcomplex.hpp"
#include "heegner/eisenstein.hpp"

namespace hg {

// Integer 2x2 matrix [[a, b], [c, d]]; used for SL2(Z) words.
struct Mat2Z {
    int64_t a = 1, b = 0, c = 0, d = 1;

    static constexpr Mat2Z identity() { return {}; }
    static constexpr Mat2Z T(int64_t k = 1) { return {1, k, 0, 1}; }
    static constexpr Mat2Z S() { return {0, -1, 1, 0}; }

    constexpr int64_t det() const { return a * d - b * c; }
    friend constexpr Mat2Z operator*(const Mat2Z& x, const Mat2Z& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    constexpr Mat2Z inverse_unimodular() const {
        // valid when det = +-1
        int64_t s = det();
        return {s * d, -s * b, -s * c, s * a};
    }
    friend constexpr bool operator==(const Mat2Z& x, const Mat2Z& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }

    BigComplex moebius(const BigComplex& z) const {
        BigComplex num = z * a + BigComplex(b, z.prec());
        BigComplex den = z * c + BigComplex(d, z.prec());
        return num / den;
    }
    RatOmega moebius(const RatOmega& z) const {
        RatOmega num{z.a * a + b, z.b * a};
        RatOmega den{z.a * c + d, z.b * c};
        return num / den;
    }
    // cz + d
    BigComplex cocycle(const BigComplex& z) const { return z * c + BigComplex(d, z.prec()); }
};

// Exact rational 2x2 matrix.
struct Mat2Q {
    mpq_class a, b, c, d;

    Mat2Q() : a(1), b(0), c(0), d(1) {}
    Mat2Q(mpq_class a_, mpq_class b_, mpq_class c_, mpq_class d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
    explicit Mat2Q(const Mat2Z& m) : a(static_cast<long>(m.a)), b(static_cast<long>(m.b)),
                                     c(static_cast<long>(m.c)), d(static_cast<long>(m.d)) {}

    mpq_class det() const { return a * d - b * c; }
    friend Mat2Q operator*(const Mat2Q& x, const Mat2Q& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    Mat2Q inverse() const {
        mpq_class dt = det();
        if (dt == 0) throw std::domain_error("Mat2Q: singular");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    friend bool operator==(const Mat2Q& x, const Mat2Q& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }

    bool is_integral() const {
        return a.get_den() == 1 && b.get_den() == 1 && c.get_den() == 1 && d.get_den() == 1;
    }
    Mat2Q scaled(const mpq_class& s) const { return {a * s, b * s, c * s, d * s}; }

    RatOmega moebius(const RatOmega& z) const {
        RatOmega num{z.a * a + b, z.b * a};
        RatOmega den{z.a * c + d, z.b * c};
        return num / den;
    }
};

// entrywise congruence mod m in Z localized away from m (denominators must be
// invertible mod m): x = y (mod m)  iff  num(x - y) = 0 mod m * den
bool congruent_mod(const mpq_class& x, const mpq_class& y, long m);
bool congruent_mod(const Mat2Q& x, const Mat2Q& y, long m);

// Reduction of tau to the standard fundamental domain |Re| <= 1/2, |tau| >= 1.
// Returns gamma with tau = gamma * tau0.
struct NumericReduction {
    Mat2Z gamma;
    BigComplex tau0;
};
NumericReduction reduce_to_fundamental_domain(const BigComplex& tau);

// Exact version for points of Q(omega) in the upper half-plane.
struct ExactReduction {
    Mat2Z gamma;
    RatOmega tau0;
};
ExactReduction reduce_to_fundamental_domain(const RatOmega& tau);

}  // namespace hg
