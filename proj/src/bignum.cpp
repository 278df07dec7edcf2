#include "heegner/bigcomplex.hpp"

#include <cstdio>
#include <vector>

namespace hg {

std::string BigFloat::to_string(size_t digits) const {
    if (digits == 0) digits = static_cast<size_t>(prec() * 0.3010) + 2;
    char fmt[32];
    std::snprintf(fmt, sizeof fmt, "%%.%zuRg", digits);
    std::vector<char> buf(digits + 64);
    mpfr_snprintf(buf.data(), buf.size(), fmt, v_);
    return std::string(buf.data());
}

std::string BigComplex::to_string(size_t digits) const {
    std::string s = re_.to_string(digits);
    if (!im_.is_zero() || true) {
        s += im_.sign() < 0 ? " - " : " + ";
        s += im_.abs().to_string(digits);
        s += "i";
    }
    return s;
}

BigComplex BigComplex::pow_int(long e) const {
    if (e == 0) return BigComplex(1, prec());
    BigComplex base = e > 0 ? *this : inverse();
    unsigned long k = e > 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
    BigComplex acc(1, prec());
    while (k) {
        if (k & 1) acc *= base;
        base = base.square();
        k >>= 1;
    }
    return acc;
}

BigComplex BigComplex::sqrt() const {
    mpfr_prec_t p = prec();
    BigFloat r = abs();
    // sqrt((r+re)/2) + i sign(im) sqrt((r-re)/2), guarding cancellation
    BigFloat u = ((r + re_) / 2).sqrt();
    BigFloat v = ((r - re_) / 2).sqrt();
    if (im_.sign() < 0) v = -v;
    if (u.is_zero() && re_.sign() < 0) {
        // pure negative real: principal root is +i sqrt(|z|)
        return {BigFloat(0L, p), (-re_).sqrt()};
    }
    return {std::move(u), std::move(v)};
}

}  // namespace hg
