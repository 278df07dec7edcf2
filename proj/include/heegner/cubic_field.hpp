#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "heegner/bigcomplex.hpp"

namespace hg {

// Element of K = Q(cbrt(n)) in coordinates over the integral basis
// {1, theta, theta^2/k} where n = h k^2 with h, k squarefree and coprime.
struct CFElem {
    mpq_class c0, c1, c2;

    bool is_zero() const { return c0 == 0 && c1 == 0 && c2 == 0; }
    bool is_rational() const { return c1 == 0 && c2 == 0; }
    friend bool operator==(const CFElem& x, const CFElem& y) {
        return x.c0 == y.c0 && x.c1 == y.c1 && x.c2 == y.c2;
    }
};

// Pure cubic field K = Q(cbrt(n)) with its multiplication structure,
// embeddings and ideal/lattice machinery.
class CubicField {
  public:
    static CubicField create(int64_t n);

    int64_t n() const { return n_; }
    int64_t h() const { return h_; }
    int64_t k() const { return k_; }
    int64_t np() const { return h_ * k_; }  // largest squarefree divisor of n
    mpz_class disc() const;                 // -27 (hk)^2

    CFElem one() const { return {1, 0, 0}; }
    CFElem theta() const { return {0, 1, 0}; }
    CFElem from_rational(const mpq_class& q) const { return {q, 0, 0}; }

    CFElem add(const CFElem& x, const CFElem& y) const;
    CFElem sub(const CFElem& x, const CFElem& y) const;
    CFElem neg(const CFElem& x) const;
    CFElem mul(const CFElem& x, const CFElem& y) const;
    CFElem mul_scalar(const CFElem& x, const mpq_class& s) const;
    CFElem inverse(const CFElem& x) const;
    CFElem pow(const CFElem& x, long e) const;

    mpq_class norm(const CFElem& x) const;
    mpq_class trace(const CFElem& x) const;
    bool is_integral(const CFElem& x) const;

    BigFloat embed_real(const CFElem& x, mpfr_prec_t prec) const;
    BigComplex embed_complex(const CFElem& x, mpfr_prec_t prec) const;

    std::string to_string(const CFElem& x) const;

  private:
    CubicField(int64_t n, int64_t h, int64_t k) : n_(n), h_(h), k_(k) {}
    int64_t n_, h_, k_;
};

// Dedekind-criterion verification that {1, theta, theta^2/k} spans the
// maximal order (checked at every prime of 3 n'); throws on failure.
void verify_integral_basis(const CubicField& K);

struct UnitCertificate {
    CFElem u;
    BigFloat log_u;       // log of the real embedding, > 0
    mpz_class unit_norm;  // +1 or -1
    std::string method;   // "voronoi-cycle" or "box-search"
    int64_t cycle_length = 0;
    double box_bound = 0;  // embedding bound exhausted by the box search
};

// Fundamental unit > 1 of O_K via the chain of adjacent lattice minima; the
// period of the chain enumerates every unit in (1, u], which is the
// minimality certificate.
UnitCertificate fundamental_unit(const CubicField& K);

// Independent small-scale oracle: exhaustive search over elements with both
// embeddings bounded by B; returns the least unit > 1 in the region, if any.
std::optional<CFElem> unit_box_search(const CubicField& K, double B);

// Class number via Minkowski-bound prime enumeration and reduced-lattice
// cycles (principality decided by cycle membership).
int64_t class_number(const CubicField& K);

// Minkowski bound for K (about 1.47 n')
double minkowski_bound(const CubicField& K);

// Ideal as a 3x3 rational basis matrix (columns = basis vectors in
// integral-basis coordinates), kept in canonical HNF-derived form.
struct IdealLattice {
    std::array<CFElem, 3> basis;
};

std::vector<std::pair<IdealLattice, int64_t>> prime_ideals_up_to(const CubicField& K,
                                                                 double bound);

struct UnitIdentityReport {
    int64_t n;
    int64_t f_n;
    int64_t sigma;   // sigma(n/n')
    int64_t h_K;
    BigFloat log_u;
    BigFloat log_norm;      // log N_{R_{6n}/K}(X(n omega) + 1)
    double recovered_exponent;
    double exponent_error;  // |e - round(e)|
    bool pass;
};

// Theorem-level identity checker: the norm from the CM machinery against
// 3^{f(n)} u^{3 h sigma(n/n')}.
UnitIdentityReport verify_unit_identity(int64_t n, mpfr_prec_t prec, int threads = 0);

}  // namespace hg
