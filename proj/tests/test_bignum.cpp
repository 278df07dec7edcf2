#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heegner/bigcomplex.hpp"

using namespace hg;

TEST_CASE("precision contract: results carry the min of operand precisions") {
    BigFloat a(1.0, 256), b(2.0, 128);
    CHECK((a + b).prec() == 128);
    CHECK((a * b).prec() == 128);
    BigComplex z(BigFloat(1.0, 192), BigFloat(0.5, 192));
    BigComplex w(BigFloat(2.0, 320), BigFloat(0.25, 320));
    CHECK((z * w).prec() == 192);
}

TEST_CASE("exp/log round trip") {
    mpfr_prec_t p = 256;
    BigComplex z(BigFloat(0.7, p), BigFloat(-1.3, p));
    BigComplex w = z.log().exp();
    CHECK(z.dist_exponent(w) < -(long)p + 16);
}

TEST_CASE("omega is a primitive cube root of unity") {
    mpfr_prec_t p = 256;
    BigComplex w = BigComplex::omega(p);
    CHECK((w * w * w - BigComplex(1, p)).abs().exponent() < -(long)p + 8);
    CHECK((w * w + w + BigComplex(1, p)).abs().exponent() < -(long)p + 8);
}

TEST_CASE("principal square root") {
    mpfr_prec_t p = 192;
    BigComplex z(BigFloat(-9.0, p), BigFloat(0L, p));
    BigComplex r = z.sqrt();
    CHECK(r.re().is_zero());
    CHECK((r.im() - BigFloat(3L, p)).abs().exponent() < -(long)p + 8);
    // sqrt(-3) has positive imaginary part
    CHECK(BigComplex::sqrt_minus3(p).im() > 0L);
}

TEST_CASE("integer powers") {
    mpfr_prec_t p = 192;
    BigComplex z(BigFloat(1.25, p), BigFloat(0.5, p));
    BigComplex z5 = z.pow_int(5);
    BigComplex z5m = z.pow_int(-5);
    CHECK((z5 * z5m - BigComplex(1, p)).abs().exponent() < -(long)p + 16);
}
