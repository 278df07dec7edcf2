#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace hg {

// Arbitrary-precision real number backed by MPFR, round-to-nearest.
// Binary operations produce a result at the minimum of the operand
// precisions, so precision never silently inflates through a formula.
class BigFloat {
  public:
    BigFloat() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }
    explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    BigFloat(long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
    BigFloat(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
    BigFloat(const mpq_class& x, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const mpz_class& x, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
    }

    BigFloat(const BigFloat& o) { mpfr_init2(v_, o.prec()); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) { mpfr_set_prec(v_, o.prec()); mpfr_set(v_, o.v_, MPFR_RNDN); }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    BigFloat round_to(mpfr_prec_t prec) const {
        BigFloat r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    static BigFloat pi(mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_const_pi(r.v_, MPFR_RNDN);
        return r;
    }
    static BigFloat log2e_inv(mpfr_prec_t prec) {  // ln 2
        BigFloat r(prec);
        mpfr_const_log2(r.v_, MPFR_RNDN);
        return r;
    }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b)); mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b)); mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b)); mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(join(a, b)); mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r;
    }
    BigFloat operator-() const { BigFloat r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }

    BigFloat& operator+=(const BigFloat& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& b) { mpfr_mul(v_, v_, b.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& b) { mpfr_div(v_, v_, b.v_, MPFR_RNDN); return *this; }

    friend BigFloat operator*(long a, const BigFloat& b) {
        BigFloat r(b.prec()); mpfr_mul_si(r.v_, b.v_, a, MPFR_RNDN); return r;
    }
    BigFloat operator*(long b) const { BigFloat r(prec()); mpfr_mul_si(r.v_, v_, b, MPFR_RNDN); return r; }
    BigFloat operator/(long b) const { BigFloat r(prec()); mpfr_div_si(r.v_, v_, b, MPFR_RNDN); return r; }
    BigFloat operator+(long b) const { BigFloat r(prec()); mpfr_add_si(r.v_, v_, b, MPFR_RNDN); return r; }
    BigFloat operator-(long b) const { BigFloat r(prec()); mpfr_sub_si(r.v_, v_, b, MPFR_RNDN); return r; }

    int cmp(const BigFloat& b) const { return mpfr_cmp(v_, b.v_); }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return a.cmp(b) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return a.cmp(b) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return a.cmp(b) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return a.cmp(b) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return a.cmp(b) == 0; }
    bool operator<(long b) const { return mpfr_cmp_si(v_, b) < 0; }
    bool operator>(long b) const { return mpfr_cmp_si(v_, b) > 0; }

    bool is_zero() const { return mpfr_zero_p(v_); }
    bool is_nan() const { return mpfr_nan_p(v_); }
    int sign() const { return mpfr_sgn(v_); }

    BigFloat abs() const { BigFloat r(prec()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat sqrt() const { BigFloat r(prec()); mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat cbrt() const { BigFloat r(prec()); mpfr_cbrt(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat log() const { BigFloat r(prec()); mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat exp() const { BigFloat r(prec()); mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat cos() const { BigFloat r(prec()); mpfr_cos(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat sin() const { BigFloat r(prec()); mpfr_sin(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat floor() const { BigFloat r(prec()); mpfr_rint(r.v_, v_, MPFR_RNDD); return r; }
    BigFloat round_nearest() const { BigFloat r(prec()); mpfr_rint(r.v_, v_, MPFR_RNDN); return r; }
    BigFloat atan2(const BigFloat& x) const {  // atan2(*this, x)
        BigFloat r(join(*this, x)); mpfr_atan2(r.v_, v_, x.v_, MPFR_RNDN); return r;
    }
    BigFloat pow_ui(unsigned long e) const {
        BigFloat r(prec()); mpfr_pow_ui(r.v_, v_, e, MPFR_RNDN); return r;
    }
    // 2^e as a BigFloat of this value's precision
    static BigFloat pow2(long e, mpfr_prec_t prec) {
        BigFloat r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    mpz_class to_mpz_floor() const {
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
        return z;
    }
    mpz_class to_mpz_round() const {
        mpz_class z;
        mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
        return z;
    }

    // log2 of |value|, -inf for 0; cheap exponent peek for tolerance checks
    long exponent() const { return is_zero() ? LONG_MIN : mpfr_get_exp(v_); }

    std::string to_string(size_t digits = 0) const;

  private:
    static mpfr_prec_t join(const BigFloat& a, const BigFloat& b) {
        return a.prec() < b.prec() ? a.prec() : b.prec();
    }
    mpfr_t v_;
};

}  // namespace hg
