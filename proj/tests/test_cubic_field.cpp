#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "heegner/cubic_field.hpp"

using namespace hg;

TEST_CASE("field constants and integral basis") {
    CubicField K5 = CubicField::create(5);
    CHECK(K5.h() == 5);
    CHECK(K5.k() == 1);
    CHECK(K5.np() == 5);
    CHECK(K5.disc() == -675);
    verify_integral_basis(K5);

    CubicField K25 = CubicField::create(25);
    CHECK(K25.h() == 1);
    CHECK(K25.k() == 5);
    CHECK(K25.np() == 5);
    CHECK(K25.disc() == -675);
    verify_integral_basis(K25);

    for (int64_t n : {7, 11, 13, 29, 41, 77}) verify_integral_basis(CubicField::create(n));

    CHECK_THROWS(CubicField::create(10));   // not coprime to 6
    CHECK_THROWS(CubicField::create(17));   // -1 mod 9
    CHECK_THROWS(CubicField::create(40));   // 8 | 40: not cube-free
}

TEST_CASE("ring arithmetic") {
    CubicField K = CubicField::create(47);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-9, 9);
    for (int i = 0; i < 200; ++i) {
        mpq_class q1(d(rng), 1 + std::abs(d(rng))), q2(d(rng), 1 + std::abs(d(rng)));
        q1.canonicalize();
        q2.canonicalize();
        CFElem x{q1, mpq_class(d(rng)), mpq_class(d(rng))};
        CFElem y{mpq_class(d(rng)), q2, mpq_class(d(rng))};
        // norm multiplicativity
        CHECK(K.norm(K.mul(x, y)) == K.norm(x) * K.norm(y));
        // associativity and commutativity spot checks
        CFElem z{mpq_class(d(rng)), mpq_class(d(rng)), mpq_class(d(rng))};
        CHECK(K.mul(K.mul(x, y), z) == K.mul(x, K.mul(y, z)));
        CHECK(K.mul(x, y) == K.mul(y, x));
        if (!x.is_zero() && K.norm(x) != 0) {
            CFElem inv = K.inverse(x);
            CHECK(K.mul(x, inv) == K.one());
        }
    }
    // theta^3 = n
    CHECK(K.mul(K.theta(), K.mul(K.theta(), K.theta())) == K.from_rational(47));
}

TEST_CASE("embeddings are consistent with the norm") {
    CubicField K = CubicField::create(7);
    CFElem x{mpq_class(3), mpq_class(-2), mpq_class(1)};
    mpfr_prec_t p = 256;
    BigFloat s0 = K.embed_real(x, p);
    BigComplex s1 = K.embed_complex(x, p);
    BigFloat prod = s0 * s1.norm2();
    BigFloat nrm(K.norm(x), p);
    CHECK((prod - nrm).abs().exponent() < -(long)p + 40);
    // trace
    BigFloat tr = s0 + s1.re() * 2;
    CHECK((tr - BigFloat(K.trace(x), p)).abs().exponent() < -(long)p + 40);
}

TEST_CASE("fundamental unit via the Voronoi chain against the box oracle") {
    struct Known {
        int64_t n;
        double B;  // box bound certifying minimality at small scale
    };
    for (auto [n, B] : {Known{5, 300.0}, Known{7, 60.0}, Known{11, 400.0}}) {
        CubicField K = CubicField::create(n);
        UnitCertificate cert = fundamental_unit(K);
        CHECK((cert.unit_norm == 1 || cert.unit_norm == -1));
        CHECK(K.norm(cert.u) == cert.unit_norm);
        CHECK(cert.log_u > 0L);
        CHECK(cert.cycle_length > 0);
        // u * u^{-1} = 1 exactly
        CHECK(K.mul(cert.u, K.inverse(cert.u)) == K.one());
        auto box = unit_box_search(K, B);
        REQUIRE(box.has_value());
        CHECK(*box == cert.u);
        // doubling the oracle region returns the same unit
        auto box2 = unit_box_search(K, 2 * B);
        REQUIRE(box2.has_value());
        CHECK(*box2 == cert.u);
    }
}

TEST_CASE("known fundamental units") {
    CubicField K5 = CubicField::create(5);
    UnitCertificate c5 = fundamental_unit(K5);
    CHECK(c5.u == CFElem{41, 24, 14});
    CubicField K7 = CubicField::create(7);
    CHECK(fundamental_unit(K7).u == CFElem{4, 2, 1});
}

TEST_CASE("unit exceeds the discriminant lower bound") {
    // for a complex cubic field, |d| < 4 u^3 + 24
    for (int64_t n : {5, 7, 11, 13, 23}) {
        CubicField K = CubicField::create(n);
        UnitCertificate cert = fundamental_unit(K);
        double u = K.embed_real(cert.u, 128).to_double();
        double d = std::abs(K.disc().get_d());
        CHECK(d < 4 * u * u * u + 24);
    }
}

TEST_CASE("class numbers from the reduced-lattice cycles") {
    CHECK(class_number(CubicField::create(5)) == 1);
    CHECK(class_number(CubicField::create(7)) == 3);
    CHECK(class_number(CubicField::create(11)) == 2);
    CHECK(class_number(CubicField::create(13)) == 3);
    CHECK(class_number(CubicField::create(23)) == 1);
}

TEST_CASE("minkowski bound") {
    CubicField K = CubicField::create(5);
    CHECK(minkowski_bound(K) == doctest::Approx(1.4706 * 5).epsilon(0.01));
    auto primes = prime_ideals_up_to(K, minkowski_bound(K));
    CHECK(primes.size() >= 3);
    for (auto& [I, nrm] : primes) {
        CHECK(nrm <= static_cast<int64_t>(minkowski_bound(K)));
        (void)I;
    }
}

TEST_CASE("unit identity at n = 5 and n = 25") {
    UnitIdentityReport r5 = verify_unit_identity(5, 384, 2);
    CHECK(r5.pass);
    CHECK(r5.h_K == 1);
    CHECK(r5.sigma == 1);
    CHECK(std::lround(r5.recovered_exponent) == 3);

    // n = 25: n' = 5, sigma(5) = 6, exponent 18 h
    UnitIdentityReport r25 = verify_unit_identity(25, 384, 2);
    CHECK(r25.pass);
    CHECK(r25.sigma == 6);
    CHECK(std::lround(r25.recovered_exponent) == 3 * r25.h_K * 6);
}

TEST_CASE("unit identity is stable under precision doubling") {
    UnitIdentityReport a = verify_unit_identity(7, 384, 2);
    UnitIdentityReport b = verify_unit_identity(7, 768, 2);
    CHECK(a.pass);
    CHECK(b.pass);
    CHECK(std::lround(a.recovered_exponent) == std::lround(b.recovered_exponent));
}
