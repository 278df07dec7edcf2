#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heegner/modular.hpp"
#include "heegner/qseries.hpp"

using namespace hg;

namespace {

void check_expansion(const QSeries& s, const std::vector<std::pair<int, long>>& terms,
                     int through) {
    for (int e = s.lo(); e <= through; ++e) {
        long expect = 0;
        for (auto& [ee, c] : terms)
            if (ee == e) expect = c;
        const QOmega& c = s.coeff(e);
        CHECK(c.b == 0);
        CHECK(c.a == expect);
    }
}

}  // namespace

TEST_CASE("golden q-expansion of X through q^40") {
    QSeries X = X_series(Mat2Z::identity(), 48);
    check_expansion(X, {{-2, 1}, {4, 1}, {10, 1}, {16, -1}, {22, -1}, {34, 1}, {40, 2}}, 40);
}

TEST_CASE("golden q-expansion of Y through q^33") {
    QSeries Y = Y_series(Mat2Z::identity(), 45);
    check_expansion(Y, {{-3, 1}, {3, 2}, {9, 1}, {21, -2}, {27, -2}, {33, 2}}, 33);
}

TEST_CASE("division value symmetry e_{a,b} = e_{N-a,N-b}") {
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            if (a == 0 && b == 0) continue;
            QSeries s1 = division_value_series(a, b, 30);
            QSeries s2 = division_value_series(6 - a, 6 - b, 30);
            CHECK(s1 == s2);
        }
}

TEST_CASE("rotation identity e_{1,5}(q) = e_{1,3}(omega q) = e_{1,1}(omega^2 q)") {
    QSeries e15 = division_value_series(1, 5, 36);
    QSeries e13 = division_value_series(1, 3, 36);
    QSeries e11 = division_value_series(1, 1, 36);
    CHECK(e15 == e13.twist_by_omega(1));
    CHECK(e15 == e11.twist_by_omega(2));
}

TEST_CASE("series arithmetic round trips") {
    QSeries B = B_series(Mat2Z::identity(), 40);
    QSeries prod = B * B.inverse();
    REQUIRE(prod.order().has_value());
    CHECK(*prod.order() == 0);
    CHECK(prod.coeff(0) == QOmega(1));
    for (int e = 1; e <= prod.hi(); ++e) CHECK(prod.coeff(e).is_zero());
}

TEST_CASE("series evaluation matches the direct numeric sum") {
    mpfr_prec_t p = 256;
    BigComplex tau0(BigFloat(0.11, p), BigFloat(1.4, p));
    BigComplex q = (BigComplex(BigFloat(0L, p), BigFloat::pi(p) / 3) * tau0).exp();
    for (auto [a, b] : {std::pair<int, int>{2, 1}, {0, 1}, {3, 4}, {1, 5}}) {
        QSeries s = division_value_series(a, b, 120);
        BigComplex via_series = s.eval(q);
        BigComplex direct = division_value(DivisionValueIndex::normalized(6, a, b), tau0);
        CHECK(direct.dist_exponent(via_series) < -(long)p + 60);
    }
}

TEST_CASE("Y^2 - X^3 - 1 vanishes identically as a q-series") {
    int hi = 36;
    QSeries X = X_series(Mat2Z::identity(), hi + 14);
    QSeries Y = Y_series(Mat2Z::identity(), hi + 14);
    QSeries lhs = Y * Y - X * X * X - QSeries::constant(QOmega(1), hi);
    for (int e = lhs.lo(); e <= std::min(hi - 9, lhs.hi()); ++e)
        CHECK(lhs.coeff(e).is_zero());
}
