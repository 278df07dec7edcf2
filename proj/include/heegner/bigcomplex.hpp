#pragma once

#include "heegner/bigfloat.hpp"

#include <string>

namespace hg {

// Complex number with BigFloat components. The precision contract of
// BigFloat carries over componentwise.
class BigComplex {
  public:
    BigComplex() = default;
    explicit BigComplex(mpfr_prec_t prec) : re_(prec), im_(prec) {}
    BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im)) {}
    BigComplex(long re, mpfr_prec_t prec) : re_(re, prec), im_(prec) {}

    const BigFloat& re() const { return re_; }
    const BigFloat& im() const { return im_; }
    mpfr_prec_t prec() const { return re_.prec() < im_.prec() ? re_.prec() : im_.prec(); }

    static BigComplex i(mpfr_prec_t prec) { return {BigFloat(0L, prec), BigFloat(1L, prec)}; }
    // principal cube root of unity with positive imaginary part
    static BigComplex omega(mpfr_prec_t prec) {
        BigFloat half(mpq_class(-1, 2), prec);
        BigFloat s = (BigFloat(3L, prec).sqrt()) / 2;
        return {half, s};
    }
    // sqrt(-3) with positive imaginary part
    static BigComplex sqrt_minus3(mpfr_prec_t prec) {
        return {BigFloat(0L, prec), BigFloat(3L, prec).sqrt()};
    }

    friend BigComplex operator+(const BigComplex& a, const BigComplex& b) {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend BigComplex operator-(const BigComplex& a, const BigComplex& b) {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    BigComplex operator-() const { return {-re_, -im_}; }
    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        BigFloat d = b.norm2();
        BigFloat re = (a.re_ * b.re_ + a.im_ * b.im_) / d;
        BigFloat im = (a.im_ * b.re_ - a.re_ * b.im_) / d;
        return {std::move(re), std::move(im)};
    }
    BigComplex operator*(long k) const { return {re_ * k, im_ * k}; }
    BigComplex operator/(long k) const { return {re_ / k, im_ / k}; }
    BigComplex operator*(const BigFloat& s) const { return {re_ * s, im_ * s}; }
    BigComplex operator/(const BigFloat& s) const { return {re_ / s, im_ / s}; }
    BigComplex operator+(long k) const { return {re_ + k, im_}; }
    BigComplex operator-(long k) const { return {re_ - k, im_}; }

    BigComplex& operator+=(const BigComplex& b) { re_ += b.re_; im_ += b.im_; return *this; }
    BigComplex& operator-=(const BigComplex& b) { re_ -= b.re_; im_ -= b.im_; return *this; }
    BigComplex& operator*=(const BigComplex& b) { *this = *this * b; return *this; }

    BigComplex conj() const { return {re_, -im_}; }
    BigFloat norm2() const { return re_ * re_ + im_ * im_; }
    BigFloat abs() const { return norm2().sqrt(); }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }

    BigComplex square() const {
        return {re_ * re_ - im_ * im_, (re_ * im_) * 2L};
    }
    BigComplex inverse() const {
        BigFloat d = norm2();
        return {re_ / d, -im_ / d};
    }
    BigComplex pow_int(long e) const;

    // exp(z) = e^re (cos im, sin im)
    BigComplex exp() const {
        BigFloat m = re_.exp();
        return {m * im_.cos(), m * im_.sin()};
    }
    // principal branch: log|z| + i atan2(im, re)
    BigComplex log() const {
        return {norm2().log() / 2, im_.atan2(re_)};
    }
    // principal square root (branch cut along negative real axis)
    BigComplex sqrt() const;

    // |this - b| expressed as a power of two exponent (for tolerance checks)
    long dist_exponent(const BigComplex& b) const { return (*this - b).abs().exponent(); }

    std::string to_string(size_t digits = 0) const;

  private:
    BigFloat re_, im_;
};

}  // namespace hg
