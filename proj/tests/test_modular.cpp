#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "heegner/cm.hpp"
#include "heegner/curves.hpp"
#include "heegner/modular.hpp"

using namespace hg;

namespace {

BigComplex random_tau(std::mt19937_64& rng, mpfr_prec_t p, double im_lo = 0.2,
                      double im_hi = 3.0) {
    std::uniform_real_distribution<double> re(-2.0, 2.0), im(im_lo, im_hi);
    return BigComplex(BigFloat(re(rng), p), BigFloat(im(rng), p));
}

Mat2Z random_gamma6(std::mt19937_64& rng) {
    // a = 1 (6), c = 0 (6), gcd(a, c) = 1, then solve for b, d
    std::uniform_int_distribution<int64_t> d(-4, 4);
    for (;;) {
        int64_t a = 1 + 6 * d(rng), c = 6 * d(rng);
        if (a == 0 || std::gcd(std::abs(a), std::abs(c)) != 1) continue;
        // extended gcd for a d0 - b0 c = 1
        int64_t old_r = a, r = c, old_s = 1, s = 0, old_t = 0, t = 1;
        while (r != 0) {
            int64_t q = old_r / r, tmp;
            tmp = old_r - q * r; old_r = r; r = tmp;
            tmp = old_s - q * s; old_s = s; s = tmp;
            tmp = old_t - q * t; old_t = t; t = tmp;
        }
        if (old_r == -1) { old_s = -old_s; old_t = -old_t; }
        int64_t d0 = old_s, b0 = -old_t;
        // adjust b = 0 (mod 6): b0 + k a = 0 (6); a invertible mod 6
        int64_t ainv = (((a % 6) + 6) % 6 == 1) ? 1 : 5;
        int64_t k = ((-b0 % 6) * ainv % 6 + 6) % 6;
        Mat2Z g{a, b0 + k * a, c, d0 + k * c};
        if (g.det() != 1) continue;
        if ((g.b % 6) || ((g.d - 1) % 6)) continue;
        return g;
    }
}

}  // namespace

TEST_CASE("fundamental domain reduction") {
    mpfr_prec_t p = 192;
    std::mt19937_64 rng(3);
    SUBCASE("translation lands on the boundary orbit of omega") {
        BigComplex tau = BigComplex::omega(p) + 5;
        auto red = reduce_to_fundamental_domain(tau);
        // omega and omega + 1 are both admissible boundary representatives
        CHECK((red.tau0.norm2() - BigFloat(1L, p)).abs().exponent() < -150);
        CHECK(red.gamma.moebius(red.tau0).dist_exponent(tau) < -150);
    }
    SUBCASE("inversion") {
        BigComplex tau(BigFloat(0L, p), BigFloat(mpq_class(1, 100), p));
        auto red = reduce_to_fundamental_domain(tau);
        CHECK((red.tau0.im() - BigFloat(100L, p)).abs().exponent() < -120);
    }
    SUBCASE("random points stay reduced and transported") {
        for (int i = 0; i < 50; ++i) {
            BigComplex tau = random_tau(rng, p);
            auto red = reduce_to_fundamental_domain(tau);
            CHECK(red.tau0.im().to_double() >= 0.866 - 1e-9);
            CHECK(red.tau0.re().to_double() <= 0.5 + 1e-9);
            CHECK(red.tau0.re().to_double() >= -0.5 - 1e-9);
            CHECK(red.gamma.moebius(red.tau0).dist_exponent(tau) < -(long)p + 48);
        }
    }
    SUBCASE("exact reduction of CM points") {
        RatOmega tau{mpq_class(17, 3), mpq_class(1, 7)};
        auto red = reduce_to_fundamental_domain(tau);
        CHECK(red.tau0.norm() >= 1);
        // gamma tau0 = tau exactly
        RatOmega back = red.gamma.moebius(red.tau0);
        CHECK(back == tau);
    }
}

TEST_CASE("transform_index") {
    DivisionValueIndex idx{6, 2, 5};
    CHECK(transform_index(idx, Mat2Z::identity()) == DivisionValueIndex::normalized(6, 2, 5));
    // S: (a, b) -> (b, -a)
    CHECK(transform_index(idx, Mat2Z::S()) == DivisionValueIndex::normalized(6, 5, -2));
    // T: (a, b) -> (a, a + b)
    CHECK(transform_index(idx, Mat2Z::T()) == DivisionValueIndex::normalized(6, 2, 7));
}

TEST_CASE("division value: doubling precision is stable") {
    BigComplex tau0(BigFloat(0.2, 256), BigFloat(1.2, 256));
    BigComplex tau1(BigFloat(0.2, 512), BigFloat(1.2, 512));
    DivisionValueIndex idx{6, 1, 4};
    BigComplex v0 = division_value(idx, tau0);
    BigComplex v1 = division_value(idx, tau1);
    CHECK(v0.dist_exponent(v1) < -250);
}

TEST_CASE("weight-2 covariance under random SL2(Z)") {
    mpfr_prec_t p = 256;
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int64_t> d(-6, 6);
    int done = 0;
    while (done < 50) {
        int64_t a = d(rng), b = d(rng), c = d(rng);
        // complete to det 1
        if (a == 0 && b == 0) continue;
        int64_t g = std::gcd(std::abs(a), std::abs(b));
        (void)g;
        // choose c, d with a d - b c = 1 when possible
        int64_t den = 0, dd = 0;
        bool ok = false;
        for (dd = -8; dd <= 8 && !ok; ++dd)
            if (b != 0 && (a * dd - 1) % b == 0) {
                den = (a * dd - 1) / b;
                ok = true;
                break;
            }
        if (!ok) continue;
        Mat2Z gamma{a, b, den, dd};
        if (gamma.det() != 1) continue;
        (void)c;
        BigComplex tau = random_tau(rng, p, 0.4, 2.0);
        DivisionValueIndex idx{6, (int)(1 + (done % 5)), (int)(done % 6)};
        if (idx.alpha == 0 && idx.beta == 0) continue;
        BigComplex lhs = division_value_at(idx, gamma.moebius(tau));
        BigComplex co = gamma.cocycle(tau);
        BigComplex rhs = co * co * division_value_at(transform_index(idx, gamma), tau);
        CHECK(lhs.dist_exponent(rhs) < -(long)p + 48);
        ++done;
    }
}

TEST_CASE("Gamma(6)-invariance of X") {
    mpfr_prec_t p = 256;
    std::mt19937_64 rng(13);
    for (int i = 0; i < 20; ++i) {
        Mat2Z g = random_gamma6(rng);
        BigComplex tau = random_tau(rng, p);
        BigComplex x1 = eval_X(tau);
        BigComplex x2 = eval_X(g.moebius(tau));
        long scale = std::max(0L, x1.abs().exponent());
        CHECK(x1.dist_exponent(x2) < scale - (long)p + 32);
    }
}

TEST_CASE("parametrization identity Y^2 = X^3 + 1") {
    mpfr_prec_t p = 256;
    std::mt19937_64 rng(17);
    for (int i = 0; i < 30; ++i) {
        BigComplex tau = random_tau(rng, p);
        PhiValue v = eval_phi(tau);
        BigComplex resid = v.y * v.y - v.x * v.x * v.x - BigComplex(1, p);
        CHECK(resid.abs().exponent() < -(long)p + 32);
    }
}

TEST_CASE("special values at cusps (exact and as limits)") {
    // phi(1/3) = (0, 1), phi(1/2) = (-omega, 0), phi(-3/2) = (-1, 0),
    // phi(-1) = (2 omega, -3), phi(-1/2) = (-omega^2, 0)
    struct Row {
        Cusp s;
        QOmega x, y;
    };
    std::vector<Row> rows = {
        {{1, 3}, QOmega(0), QOmega(1)},
        {{1, 2}, QOmega(mpq_class(0), mpq_class(-1)), QOmega(0)},
        {{-3, 2}, QOmega(-1), QOmega(0)},
        {{-1, 1}, QOmega(mpq_class(0), mpq_class(2)), QOmega(-3)},
        {{-1, 2}, QOmega(mpq_class(1), mpq_class(1)), QOmega(0)},  // -omega^2 = 1 + omega
    };
    for (const auto& r : rows) {
        auto v = phi_cusp_value(r.s);
        REQUIRE(v.has_value());
        CHECK(v->first == r.x);
        CHECK(v->second == r.y);
    }
    CHECK(!phi_cusp_value({1, 0}).has_value());  // pole at infinity

    // numeric cusp limits at P = 256: evaluate at gamma(iY) for large Y
    mpfr_prec_t p = 256;
    double Y = (p - 32) * 0.6931 * 6.0 / (2 * M_PI) * 1.1 + 8;
    for (const auto& r : rows) {
        Mat2Z g = cusp_matrix(r.s);
        BigComplex tau = g.moebius(BigComplex(BigFloat(0L, p), BigFloat(Y, p)));
        PhiValue v = eval_phi(tau);
        CHECK((v.x - r.x.embed(p)).abs().exponent() < -(long)p + 32);
        CHECK((v.y - r.y.embed(p)).abs().exponent() < -(long)p + 32);
    }
}

TEST_CASE("transformation laws for gamma_pm and gamma_prime") {
    mpfr_prec_t p = 256;
    std::mt19937_64 rng(23);
    BigComplex one(1, p);
    BigComplex w = BigComplex::omega(p);
    for (int i = 0; i < 10; ++i) {
        BigComplex tau = random_tau(rng, p, 0.3, 2.5);
        PhiValue v = eval_phi(tau);
        CxPoint P = CxPoint::make(v.x, v.y);

        // phi(gamma' tau) = phi(tau) + (0, 1)
        PhiValue vp = eval_phi(gamma_prime().moebius(tau));
        CxPoint expect = cx_add(P, CxPoint::make(BigComplex(0, p), one), one);
        CHECK(vp.x.dist_exponent(expect.x) < -(long)p + 40);
        CHECK(vp.y.dist_exponent(expect.y) < -(long)p + 40);

        // phi(gamma_pm tau) = [omega^{-+1}] phi(tau) + (-omega^{-+1}, 0)
        for (int sign = 0; sign < 2; ++sign) {
            Mat2Z g = sign ? gamma_minus() : gamma_plus();
            int e = sign ? 1 : -1;  // omega^{-+1}
            PhiValue vg = eval_phi(g.moebius(tau));
            CxPoint twisted = CxPoint::make(w.pow_int(e) * P.x, P.y);
            CxPoint shift = CxPoint::make(-w.pow_int(e), BigComplex(0, p));
            CxPoint want = cx_add(twisted, shift, one);
            CHECK(vg.x.dist_exponent(want.x) < -(long)p + 40);
            CHECK(vg.y.dist_exponent(want.y) < -(long)p + 40);
        }
    }
}

TEST_CASE("f_pm: conjugate symmetry and tilde membership") {
    mpfr_prec_t p = 256;
    std::mt19937_64 rng(29);
    for (int i = 0; i < 5; ++i) {
        BigComplex tau = random_tau(rng, p, 0.5, 2.0);
        auto [fp, fm] = eval_f_pm(tau);
        // tau -> -conj(tau) conjugates X and Y but flips sqrt(-3), so the pair
        // swaps and negates: f_{+-}(-conj tau) = -conj(f_{-+}(tau))
        BigComplex tau_c(-tau.re(), tau.im());
        auto [fp2, fm2] = eval_f_pm(tau_c);
        CHECK(fp2.dist_exponent(-(fm.conj())) < -(long)p + 48);
        CHECK(fm2.dist_exponent(-(fp.conj())) < -(long)p + 48);
        // (f-, -f+) lies on X^3 + Y^3 = 2
        BigComplex m = fm.pow_int(3) - fp.pow_int(3);
        CHECK((m - BigComplex(2, p)).abs().exponent() < -(long)p + 48);
    }
}

TEST_CASE("cusp catalogs") {
    auto g06 = cusp_catalog(CongruenceGroup::Gamma0N, 6);
    REQUIRE(g06.size() == 4);
    CHECK(g06[0] == Cusp{0, 1});
    CHECK(g06[3] == Cusp{1, 0});
    CHECK(cusp_catalog(CongruenceGroup::GammaN, 6).size() == 12);
    auto g01 = cusp_catalog(CongruenceGroup::Gamma0N, 1);
    REQUIRE(g01.size() == 1);
    CHECK(g01[0] == Cusp{1, 0});
}

TEST_CASE("order table at the cusps of Gamma_0(6)") {
    const Cusp c0{0, 1}, cinf{1, 0}, c12{1, 2}, c13{1, 3};
    struct Row {
        ModularFnId f;
        long o0, oinf, o12, o13;
    };
    std::vector<Row> table = {
        {ModularFnId::A3, 3, 1, 0, 2}, {ModularFnId::B3, 3, 2, 0, 1},
        {ModularFnId::C, 1, 0, 1, 0},  {ModularFnId::D2, 2, 1, 1, 0},
        {ModularFnId::X3, 0, -1, 0, 1}, {ModularFnId::Y2, 0, -1, 1, 0},
    };
    for (const auto& r : table) {
        CHECK(order_at_cusp(r.f, c0, CongruenceGroup::Gamma0N, 6) == r.o0);
        CHECK(order_at_cusp(r.f, cinf, CongruenceGroup::Gamma0N, 6) == r.oinf);
        CHECK(order_at_cusp(r.f, c12, CongruenceGroup::Gamma0N, 6) == r.o12);
        CHECK(order_at_cusp(r.f, c13, CongruenceGroup::Gamma0N, 6) == r.o13);
    }
}

TEST_CASE("zero/pole bookkeeping: weighted order sums") {
    // weight-k forms for Gamma_0(6): total order = k n_Gamma / 12 = k
    struct Row {
        ModularFnId f;
        long weight;
    };
    for (const auto& r : std::vector<Row>{{ModularFnId::A3, 6},
                                          {ModularFnId::B3, 6},
                                          {ModularFnId::C, 2},
                                          {ModularFnId::D2, 4},
                                          {ModularFnId::X3, 0},
                                          {ModularFnId::Y2, 0}}) {
        mpq_class total(0);
        for (const auto& s : cusp_catalog(CongruenceGroup::Gamma0N, 6))
            total += order_at_cusp(r.f, s, CongruenceGroup::Gamma0N, 6);
        CHECK(total == r.weight);
    }
}

TEST_CASE("orders and leading coefficients of X+1 on X(6)") {
    // -2 if 6 | beta; 2 if 3 | alpha and 2 | beta; 0 otherwise
    mpq_class total(0);
    for (const auto& s : cusp_catalog(CongruenceGroup::GammaN, 6)) {
        mpq_class o = order_at_cusp(ModularFnId::XPlus1, s, CongruenceGroup::GammaN, 6);
        int64_t am = ((s.alpha % 3) + 3) % 3, b2 = ((s.beta % 2) + 2) % 2,
                b6 = ((s.beta % 6) + 6) % 6;
        if (b6 == 0) CHECK(o == -2);
        else if (am == 0 && b2 == 0) CHECK(o == 2);
        else CHECK(o == 0);
        total += o;
        // leading coefficient: |C| = 1 if 3 | beta, 3 if 3 | alpha, sqrt(3) otherwise
        mpq_class c2 = leading_coeff_x_plus_1(s).norm();
        int64_t b3 = ((s.beta % 3) + 3) % 3;
        if (b3 == 0) CHECK(c2 == 1);
        else if (am == 0) CHECK(c2 == 9);
        else CHECK(c2 == 3);
    }
    CHECK(total == 0);  // weight-0 function on X(6)
}
