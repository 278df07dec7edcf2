#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heegner/curves.hpp"
#include "heegner/pipeline.hpp"

using namespace hg;

namespace {

CxPoint random_cx_point(std::mt19937_64& rng, const BigComplex& D, mpfr_prec_t p) {
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    BigComplex x(BigFloat(d(rng), p), BigFloat(d(rng), p));
    BigComplex y = (x.pow_int(3) + D).sqrt();
    return CxPoint::make(x, y);
}

}  // namespace

TEST_CASE("exact group law on E_1") {
    mpq_class D(1);
    RatPoint P = RatPoint::make(2, 3);
    RatPoint Q = RatPoint::make(0, 1);
    CHECK(rat_on_curve(P, D));
    CHECK(rat_on_curve(Q, D));
    // chord through (2,3) and (0,1): lambda = 1, x3 = -1, y3 = 0
    RatPoint R = rat_add(P, Q, D);
    CHECK(R.x == -1);
    CHECK(R.y == 0);
    CHECK(rat_on_curve(R, D));
    // identity and inverses
    CHECK(rat_add(P, RatPoint::O(), D).x == P.x);
    CHECK(rat_add(P, rat_neg(P), D).infinity);
    // mul(3, P) = P + P + P
    RatPoint three = rat_mul(3, P, D);
    RatPoint sum = rat_add(rat_add(P, P, D), P, D);
    CHECK(three.x == sum.x);
    CHECK(three.y == sum.y);
}

TEST_CASE("exact associativity on multiples of a generator") {
    mpq_class D(5);
    RatPoint G = RatPoint::make(-1, 2);
    REQUIRE(rat_on_curve(G, D));
    for (long a = 1; a <= 4; ++a)
        for (long b = 1; b <= 3; ++b)
            for (long c = 1; c <= 3; ++c) {
                RatPoint lhs = rat_add(rat_add(rat_mul(a, G, D), rat_mul(b, G, D), D),
                                       rat_mul(c, G, D), D);
                RatPoint rhs = rat_add(rat_mul(a, G, D),
                                       rat_add(rat_mul(b, G, D), rat_mul(c, G, D), D), D);
                CHECK(lhs.infinity == rhs.infinity);
                if (!lhs.infinity) {
                    CHECK(lhs.x == rhs.x);
                    CHECK(lhs.y == rhs.y);
                }
            }
}

TEST_CASE("numeric group law: associativity to tolerance") {
    mpfr_prec_t p = 256;
    std::mt19937_64 rng(41);
    BigComplex D(7, p);
    for (int i = 0; i < 100; ++i) {
        CxPoint P = random_cx_point(rng, D, p);
        CxPoint Q = random_cx_point(rng, D, p);
        CxPoint R = random_cx_point(rng, D, p);
        CxPoint lhs = cx_add(cx_add(P, Q, D), R, D);
        CxPoint rhs = cx_add(P, cx_add(Q, R, D), D);
        REQUIRE(!lhs.infinity);
        REQUIRE(!rhs.infinity);
        CHECK(lhs.x.dist_exponent(rhs.x) < -(long)p + 64);
        CHECK(cx_curve_residual(lhs, D).exponent() < -(long)p + 64);
    }
}

TEST_CASE("phi_N basics") {
    mpfr_prec_t p = 192;
    BigComplex N(1, p);
    // (3, 0) on E_{-27} maps to (1, 1) on tilde E_2
    CxPoint P = CxPoint::make(BigComplex(3, p), BigComplex(0, p));
    TildePoint T = phi_N(P, N);
    CHECK(T.x.dist_exponent(BigComplex(1, p)) < -150);
    CHECK(T.y.dist_exponent(BigComplex(1, p)) < -150);
    // identity maps to identity
    CHECK(phi_N(CxPoint::O(), N).identity);
    CHECK(phi_N_inv(TildePoint::O(), N).infinity);
}

TEST_CASE("phi_N round trip on random points") {
    mpfr_prec_t p = 256;
    std::mt19937_64 rng(43);
    for (int64_t nn : {1, 4}) {
        BigComplex N(nn, p);
        BigComplex D = N.square() * (-27L);
        for (int i = 0; i < 25; ++i) {
            CxPoint P = random_cx_point(rng, D, p);
            CxPoint back = phi_N_inv(phi_N(P, N), N);
            CHECK(P.x.dist_exponent(back.x) < -(long)p + 48);
            CHECK(P.y.dist_exponent(back.y) < -(long)p + 48);
        }
    }
}

TEST_CASE("lambda_AB") {
    mpfr_prec_t p = 192;
    BigComplex A(1, p), B(2, p);
    // (-1, 1) on C_{1,2} maps to (1, 1) on X^3 + Y^3 = 2
    CabPoint P = CabPoint::make(BigComplex(-1, p), BigComplex(1, p));
    CHECK(cab_residual(P, A, B).exponent() < -150);
    TildePoint T = lambda_AB(P, A, B);
    CHECK(T.x.dist_exponent(BigComplex(1, p)) < -150);
    CHECK(T.y.dist_exponent(BigComplex(1, p)) < -150);
    // degenerate x y = 0 rejected
    CHECK_THROWS(lambda_AB(CabPoint::make(BigComplex(0, p), BigComplex(1, p)), A, B));
}

TEST_CASE("lambda_{n^2,2} lands on X^3+Y^3 = 2n^2") {
    mpfr_prec_t p = 256;
    std::mt19937_64 rng(47);
    int64_t n = 5;
    BigComplex A(n * n, p), B(2, p);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        // random point on C_{n^2,2}: pick x, solve B y^3 = 1 - A x^3
        BigComplex x(BigFloat(d(rng), p), BigFloat(d(rng), p));
        BigComplex y3 = (BigComplex(1, p) - A * x.pow_int(3)) / B;
        if (y3.is_zero()) continue;
        // principal cube root via exp(log/3)
        BigComplex y = (y3.log() / 3L).exp();
        CabPoint P = CabPoint::make(x, y);
        REQUIRE(cab_residual(P, A, B).exponent() < -(long)p + 48);
        TildePoint T = lambda_AB(P, A, B);
        CHECK(tilde_residual(T, BigComplex(2 * n * n, p)).exponent() < -(long)p + 60);
    }
}

TEST_CASE("sextic twists") {
    mpfr_prec_t p = 192;
    std::mt19937_64 rng(53);
    BigComplex one(1, p);
    CxPoint P = random_cx_point(rng, one, p);
    // t = 1 is the identity map
    CxPoint P1 = sextic_twist(P, BigComplex(1, p));
    CHECK(P1.x.dist_exponent(P.x) < -150);
    // t = sqrt(-3): E_1 -> E_{-27}
    CxPoint P2 = sextic_twist(P, BigComplex::sqrt_minus3(p));
    CHECK(cx_curve_residual(P2, BigComplex(-27, p)).exponent() < -150);
    // t^6 ratios of the twist chain
    int64_t n = 5;
    int rho = 1;
    BigComplex t1 = BigComplex(BigFloat(static_cast<long>(n), p).sqrt(), BigFloat(0L, p)) /
                    static_cast<long>(n);
    BigComplex ratio = t1.pow_int(6);
    BigComplex expect = BigComplex(static_cast<long>(rho * n), p) /
                        BigComplex(static_cast<long>(n * n * n * n), p);
    CHECK(ratio.dist_exponent(expect) < -150);
    BigComplex t2 = BigComplex::i(p) / BigFloat(3L, p).sqrt();
    CHECK((t2.square() + BigComplex(BigFloat(mpq_class(1, 3), p), BigFloat(0L, p)))
              .abs()
              .exponent() < -150);
}

TEST_CASE("g and h maps preserve membership and identity") {
    mpfr_prec_t p = 256;
    int64_t n = 5;
    TildePoint T = tilde_point(n, p);
    REQUIRE(tilde_residual(T, BigComplex(2, p)).exponent() < -(long)p + 48);
    CabPoint G = g_map(T, n, p);
    CHECK(cab_residual(G, BigComplex(n * n, p), BigComplex(2, p)).exponent() < -(long)p + 48);
    CabPoint H = h_map(T, n, p);
    CHECK(cab_residual(H, BigComplex(1, p), BigComplex(2 * n * n, p)).exponent() < -(long)p + 48);
    CHECK(g_map(TildePoint::O(), n, p).identity);
    CHECK(h_map(TildePoint::O(), n, p).identity);
}

TEST_CASE("full chain membership on a random complex point") {
    mpfr_prec_t p = 320;
    std::mt19937_64 rng(59);
    for (int64_t n : {5, 7}) {
        int rho = (n % 4 == 1) ? 1 : -1;
        CxPoint P1 = random_cx_point(rng, BigComplex(1, p), p);
        ChainResult cr = push_through_chain(P1, n, rho, p);
        for (double r : cr.residuals) CHECK(r < -(double)p + 80);
        CHECK(cx_curve_residual(cr.end, BigComplex(static_cast<long>(rho * n), p)).exponent() <
              -(long)p + 80);
    }
}

TEST_CASE("descent map special values and homomorphism") {
    CubicField K = CubicField::create(5);
    int rho = 1;
    CHECK(descent_r(K, RatPoint::O(), rho).value == K.one());

    mpq_class D(5);
    RatPoint G = RatPoint::make(-1, 2);
    // r(P) r(Q) r(P+Q) is a square for sampled points
    for (auto [a, b] : {std::pair<long, long>{1, 1}, {1, 2}, {2, 3}}) {
        RatPoint P = rat_mul(a, G, D), Q = rat_mul(b, G, D);
        RatPoint S = rat_add(P, Q, D);
        CFElem prod = K.mul(K.mul(descent_r(K, P, rho).value, descent_r(K, Q, rho).value),
                            descent_r(K, S, rho).value);
        CHECK(is_square_in_K(K, prod, 768, 60));
    }
}

TEST_CASE("sqrt recognition in K") {
    CubicField K = CubicField::create(7);
    CFElem w{mpq_class(2, 3), mpq_class(-1), mpq_class(4)};
    CFElem v = K.mul(w, w);
    auto r = sqrt_in_K(K, v, 320, 40);
    REQUIRE(r.has_value());
    CHECK(K.mul(*r, *r) == v);
    // a non-square is rejected
    CFElem notsq{mpq_class(2), mpq_class(0), mpq_class(0)};
    CHECK(!sqrt_in_K(K, notsq, 320, 40).has_value());
}

TEST_CASE("rational recognition") {
    mpfr_prec_t p = 384;
    auto half = recognize_rational(BigFloat(0.5, p), 10);
    REQUIRE(half.has_value());
    CHECK(*half == mpq_class(1, 2));
    auto f = recognize_rational(BigFloat(mpq_class(22, 7), p), 100);
    REQUIRE(f.has_value());
    CHECK(*f == mpq_class(22, 7));
    // irrational input yields nothing
    CHECK(!recognize_rational(BigFloat(2L, p).sqrt(), 20).has_value());
    // a 40-digit rational recovered at 384 bits
    mpz_class big("12345678901234567890123456789012345678901");
    mpq_class q(big, mpz_class("98765432109876543210987654321098765432103"));
    q.canonicalize();
    auto r = recognize_rational(BigFloat(q, p), 45);
    REQUIRE(r.has_value());
    CHECK(*r == q);
}
