#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "heegner/bigcomplex.hpp"

namespace hg {

// Element a + b*omega of Z[omega], omega = e^{2 pi i/3}, omega^2 = -1-omega.
struct EisensteinInt {
    int64_t a = 0;
    int64_t b = 0;

    constexpr EisensteinInt() = default;
    constexpr EisensteinInt(int64_t a_, int64_t b_) : a(a_), b(b_) {}

    static constexpr EisensteinInt omega() { return {0, 1}; }
    static constexpr EisensteinInt one() { return {1, 0}; }

    constexpr bool is_zero() const { return a == 0 && b == 0; }
    constexpr int64_t norm() const { return a * a - a * b + b * b; }
    constexpr EisensteinInt conj() const { return {a - b, -b}; }
    constexpr EisensteinInt operator-() const { return {-a, -b}; }

    friend constexpr EisensteinInt operator+(EisensteinInt x, EisensteinInt y) {
        return {x.a + y.a, x.b + y.b};
    }
    friend constexpr EisensteinInt operator-(EisensteinInt x, EisensteinInt y) {
        return {x.a - y.a, x.b - y.b};
    }
    friend constexpr EisensteinInt operator*(EisensteinInt x, EisensteinInt y) {
        return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
    }
    friend constexpr bool operator==(EisensteinInt x, EisensteinInt y) {
        return x.a == y.a && x.b == y.b;
    }
    friend constexpr bool operator!=(EisensteinInt x, EisensteinInt y) { return !(x == y); }
    // canonical ordering key
    friend constexpr bool operator<(EisensteinInt x, EisensteinInt y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }

    bool is_unit() const { return norm() == 1; }

    BigComplex embed(mpfr_prec_t prec) const {
        BigComplex w = BigComplex::omega(prec);
        return w * b + BigComplex(a, prec);
    }
};

// The six units, indexed so that unit(k) * unit(j) = unit(k+j mod 6): omega_6^k
// with omega_6 = 1 + omega = -omega^2.
EisensteinInt eis_unit(int k);

// Euclidean division: x = q*y + r with norm(r) < norm(y).
std::pair<EisensteinInt, EisensteinInt> eis_divmod(EisensteinInt x, EisensteinInt y);
EisensteinInt eis_mod(EisensteinInt x, EisensteinInt y);
bool eis_divides(EisensteinInt d, EisensteinInt x);
EisensteinInt eis_gcd(EisensteinInt x, EisensteinInt y);

struct EisFactor {
    EisensteinInt prime;
    int exponent;
};

struct EisFactorization {
    EisensteinInt unit;  // unit * prod(prime^exponent) == x
    std::vector<EisFactor> factors;
};

// Factorization into Z[omega] primes: split primes found by exhaustive search
// for a^2 - a b + b^2 = p, inert rational primes q = 2 mod 3 kept as-is, and
// the ramified prime 1 - omega.
EisFactorization eis_factor(EisensteinInt x);

// Cubic residue symbol (x/lambda)_3 in {0,1,2} as the exponent k of omega with
// x^{(N(lambda)-1)/3} = omega^k  (mod lambda). Requires lambda prime, N != 3,
// lambda not dividing x.
int cubic_residue_symbol(EisensteinInt x, EisensteinInt lambda);

// Cubic character attached to a rational integer n coprime to 3: the product
// of (x/lambda_i)_3^{c_i} over the Z[omega] prime factorization n = prod
// lambda_i^{c_i}. Values reported as the exponent of omega.
class CubicCharacter {
  public:
    explicit CubicCharacter(int64_t n);
    // exponent of omega; requires gcd(norm(x), 3n) = 1
    int operator()(EisensteinInt x) const;
    // symbol defined (argument coprime to the modulus)?
    bool defined_at(EisensteinInt x) const;
    int64_t modulus() const { return n_; }

  private:
    int64_t n_;
    std::vector<EisFactor> primes_;
};

// f(n) = n * prod_{p | n} (1 - p^{-1} legendre(p,3));  n coprime to 3.
int64_t f_of_n(int64_t n);
// largest squarefree divisor
int64_t squarefree_kernel(int64_t n);
// sum of divisors
int64_t sigma_divisors(int64_t n);

// n admissible for the CM machinery: coprime to 6, not +-1 mod 9, cube-free.
bool admissible_n(int64_t n);
void require_admissible_n(int64_t n);

// Conjugate index sets: A_i are representatives in {a + b omega : 0 <= a,b < 6n}
// of (O/n)^x / (Z/n)^x lifted to be = omega^i (mod 2) and = 1 (mod 3); B_i is
// the kernel of the cubic character inside A_i.
struct ConjugateSet {
    int64_t n;
    std::vector<EisensteinInt> A[3];
    std::vector<EisensteinInt> B[3];

    std::vector<EisensteinInt> all_B() const {
        std::vector<EisensteinInt> v;
        for (const auto& Bi : B) v.insert(v.end(), Bi.begin(), Bi.end());
        return v;
    }
};

ConjugateSet enumerate_conjugates(int64_t n);

// Representatives of (O/n)^x / ((Z/n)^x * <omega>), CRT-lifted to be = 1 mod 6
// with coordinates in [0, 6n)^2; canonical deterministic ordering.
std::vector<EisensteinInt> galois_reps_mod_n(int64_t n);

// ---------------------------------------------------------------------------
// Exact elements of Q(omega): a + b omega with rational coordinates.
struct RatOmega {
    mpq_class a, b;

    RatOmega() = default;
    RatOmega(mpq_class a_, mpq_class b_) : a(std::move(a_)), b(std::move(b_)) {}
    RatOmega(const EisensteinInt& x) : a(static_cast<long>(x.a)), b(static_cast<long>(x.b)) {}

    mpq_class norm() const { return a * a - a * b + b * b; }
    RatOmega conj() const { return {a - b, -b}; }
    bool is_zero() const { return a == 0 && b == 0; }

    friend RatOmega operator+(const RatOmega& x, const RatOmega& y) { return {x.a + y.a, x.b + y.b}; }
    friend RatOmega operator-(const RatOmega& x, const RatOmega& y) { return {x.a - y.a, x.b - y.b}; }
    friend RatOmega operator*(const RatOmega& x, const RatOmega& y) {
        return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
    }
    friend RatOmega operator/(const RatOmega& x, const RatOmega& y) {
        mpq_class n = y.norm();
        if (n == 0) throw std::domain_error("RatOmega: division by zero");
        RatOmega num = x * y.conj();
        return {num.a / n, num.b / n};
    }
    friend bool operator==(const RatOmega& x, const RatOmega& y) { return x.a == y.a && x.b == y.b; }

    // real part a - b/2, imaginary part b*sqrt(3)/2 > 0 iff b > 0
    mpq_class re2() const { return 2 * a - b; }  // twice the real part, exact
    bool in_upper_half_plane() const { return b > 0; }

    BigComplex embed(mpfr_prec_t prec) const {
        BigComplex w = BigComplex::omega(prec);
        return w * BigComplex(BigFloat(b, prec), BigFloat(0L, prec)) +
               BigComplex(BigFloat(a, prec), BigFloat(0L, prec));
    }
};

}  // namespace hg
