#include "heegner/cubic_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "heegner/eisenstein.hpp"

namespace hg {

namespace {

std::vector<std::pair<int64_t, int>> factor_int(int64_t n) {
    std::vector<std::pair<int64_t, int>> f;
    for (int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.push_back({p, e});
        }
    if (n > 1) f.push_back({n, 1});
    return f;
}

}  // namespace

CubicField CubicField::create(int64_t n) {
    if (n < 2 || std::gcd(n, int64_t{6}) != 1)
        throw std::invalid_argument("CubicField: n must be >= 2 and coprime to 6");
    int64_t m9 = n % 9;
    if (m9 == 1 || m9 == 8)
        throw std::invalid_argument("CubicField: n = +-1 (mod 9) not supported by this basis");
    int64_t h = 1, k = 1;
    for (auto [p, e] : factor_int(n)) {
        if (e == 1) h *= p;
        else if (e == 2) k *= p;
        else throw std::invalid_argument("CubicField: n must be cube-free");
    }
    return CubicField(n, h, k);
}

mpz_class CubicField::disc() const {
    mpz_class d(static_cast<long>(h_ * k_));
    return -27 * d * d;
}

CFElem CubicField::add(const CFElem& x, const CFElem& y) const {
    return {x.c0 + y.c0, x.c1 + y.c1, x.c2 + y.c2};
}
CFElem CubicField::sub(const CFElem& x, const CFElem& y) const {
    return {x.c0 - y.c0, x.c1 - y.c1, x.c2 - y.c2};
}
CFElem CubicField::neg(const CFElem& x) const { return {-x.c0, -x.c1, -x.c2}; }

CFElem CubicField::mul(const CFElem& x, const CFElem& y) const {
    // e1^2 = k e2, e1 e2 = hk, e2^2 = h e1
    long h = static_cast<long>(h_), k = static_cast<long>(k_);
    mpq_class hk(static_cast<long>(h_ * k_));
    return {x.c0 * y.c0 + hk * (x.c1 * y.c2 + x.c2 * y.c1),
            x.c0 * y.c1 + x.c1 * y.c0 + h * x.c2 * y.c2,
            x.c0 * y.c2 + x.c2 * y.c0 + k * x.c1 * y.c1};
}

CFElem CubicField::mul_scalar(const CFElem& x, const mpq_class& s) const {
    return {x.c0 * s, x.c1 * s, x.c2 * s};
}

mpq_class CubicField::norm(const CFElem& x) const {
    long n = static_cast<long>(n_);
    mpq_class h2k(static_cast<long>(h_ * h_ * k_)), hk3(3 * static_cast<long>(h_ * k_));
    return x.c0 * x.c0 * x.c0 + n * x.c1 * x.c1 * x.c1 + h2k * x.c2 * x.c2 * x.c2 -
           hk3 * x.c0 * x.c1 * x.c2;
}

mpq_class CubicField::trace(const CFElem& x) const { return 3 * x.c0; }

bool CubicField::is_integral(const CFElem& x) const {
    return x.c0.get_den() == 1 && x.c1.get_den() == 1 && x.c2.get_den() == 1;
}

CFElem CubicField::inverse(const CFElem& x) const {
    mpq_class N = norm(x);
    if (N == 0) throw std::domain_error("CubicField: inverse of zero");
    // x^{-1} = (x * x') / N with x' the product of the two conjugates; compute
    // via the adjugate of the multiplication matrix applied to (1,0,0)
    // multiplication matrix M columns: x*1, x*e1, x*e2
    long h = static_cast<long>(h_), k = static_cast<long>(k_);
    mpq_class hk(static_cast<long>(h_ * k_));
    mpq_class M[3][3] = {{x.c0, hk * x.c2, hk * x.c1},
                         {x.c1, x.c0, h * x.c2},
                         {x.c2, k * x.c1, x.c0}};
    // solve M y = (1,0,0)^T by Cramer
    auto det3 = [](mpq_class m[3][3]) -> mpq_class {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    mpq_class D = det3(M);
    CFElem y;
    mpq_class* out[3] = {&y.c0, &y.c1, &y.c2};
    for (int col = 0; col < 3; ++col) {
        mpq_class Mc[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) Mc[i][j] = (j == col) ? (i == 0 ? 1 : 0) : M[i][j];
        *out[col] = det3(Mc) / D;
    }
    return y;
}

CFElem CubicField::pow(const CFElem& x, long e) const {
    CFElem base = e >= 0 ? x : inverse(x);
    unsigned long m = e >= 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
    CFElem acc = one();
    while (m) {
        if (m & 1) acc = mul(acc, base);
        base = mul(base, base);
        m >>= 1;
    }
    return acc;
}

BigFloat CubicField::embed_real(const CFElem& x, mpfr_prec_t prec) const {
    BigFloat nu = BigFloat(static_cast<long>(n_), prec).cbrt();
    BigFloat nu2k = nu * nu / static_cast<long>(k_);
    return BigFloat(x.c0, prec) + BigFloat(x.c1, prec) * nu + BigFloat(x.c2, prec) * nu2k;
}

BigComplex CubicField::embed_complex(const CFElem& x, mpfr_prec_t prec) const {
    BigFloat nu = BigFloat(static_cast<long>(n_), prec).cbrt();
    BigComplex w = BigComplex::omega(prec);
    BigComplex t1 = w * nu;
    BigComplex t2 = w.square() * (nu * nu / static_cast<long>(k_));
    return BigComplex(BigFloat(x.c0, prec), BigFloat(0L, prec)) +
           t1 * BigComplex(BigFloat(x.c1, prec), BigFloat(0L, prec)) +
           t2 * BigComplex(BigFloat(x.c2, prec), BigFloat(0L, prec));
}

std::string CubicField::to_string(const CFElem& x) const {
    std::ostringstream os;
    os << x.c0 << " + " << x.c1 << "*cbrt(" << n_ << ") + " << x.c2 << "*cbrt(" << n_
       << ")^2/" << k_;
    return os.str();
}

// --- Dedekind criterion -------------------------------------------------------

namespace {

using Poly = std::vector<int64_t>;  // coefficients mod p, low degree first

Poly poly_trim(Poly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

Poly poly_mul(const Poly& f, const Poly& g, int64_t p) {
    if (f.empty() || g.empty()) return {};
    Poly r(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) r[i + j] = (r[i + j] + f[i] * g[j]) % p;
    return poly_trim(r);
}

Poly poly_mod(Poly f, Poly g, int64_t p) {
    f = poly_trim(f);
    g = poly_trim(g);
    auto inv_mod = [p](int64_t a) {
        int64_t r = 1, b = ((a % p) + p) % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    int64_t glead_inv = inv_mod(g.back());
    while (f.size() >= g.size() && !f.empty()) {
        int64_t c = f.back() * glead_inv % p;
        size_t shift = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i)
            f[i + shift] = ((f[i + shift] - c * g[i]) % p + p) % p;
        f = poly_trim(f);
    }
    return f;
}

Poly poly_gcd(Poly f, Poly g, int64_t p) {
    f = poly_trim(f);
    g = poly_trim(g);
    while (!g.empty()) {
        Poly r = poly_mod(f, g, p);
        f = g;
        g = r;
    }
    return f;
}

// distinct monic irreducible factors of x^3 - m over F_p (p odd, p not 3 | disc handled too)
std::vector<std::pair<Poly, int>> factor_cubic(int64_t m, int64_t p) {
    auto md = [p](int64_t v) { return ((v % p) + p) % p; };
    std::vector<int64_t> roots;
    for (int64_t r = 0; r < p; ++r)
        if (md(r * r * r - m) == 0) roots.push_back(r);
    std::vector<std::pair<Poly, int>> out;
    if (roots.empty()) {
        out.push_back({Poly{md(-m), 0, 0, 1}, 1});  // irreducible cubic
        return out;
    }
    if (roots.size() == 1) {
        int64_t r = roots[0];
        // multiplicity: does (x-r)^2 divide?
        Poly lin{md(-r), 1};
        Poly f{md(-m), 0, 0, 1};
        Poly q1 = poly_mod(f, poly_mul(lin, lin, p), p);
        if (q1.empty()) {
            Poly q2 = poly_mod(f, poly_mul(poly_mul(lin, lin, p), lin, p), p);
            out.push_back({lin, q2.empty() ? 3 : 2});
            if (!q2.empty()) {
                // (x-r)^2 * (x-s): find s
                for (int64_t s = 0; s < p; ++s)
                    if (s != r && md(s * s * s - m) == 0) out.push_back({Poly{md(-s), 1}, 1});
            }
            return out;
        }
        out.push_back({lin, 1});
        // remaining quadratic is irreducible (no other roots)
        // f/(x-r): synthetic division
        // x^3 - m = (x - r)(x^2 + r x + r^2) + (r^3 - m)
        Poly quad{md(r * r), md(r), 1};
        out.push_back({quad, 1});
        return out;
    }
    // three distinct roots
    for (int64_t r : roots) out.push_back({Poly{md(-r), 1}, 1});
    return out;
}

// Dedekind criterion for f = x^3 - m at p: true iff Z[x]/(f) is p-maximal
bool dedekind_maximal(int64_t m, int64_t p) {
    auto md = [p](int64_t v) { return ((v % p) + p) % p; };
    auto factors = factor_cubic(m, p);
    // g* = prod g_i, h* = prod g_i^{e_i - 1} (monic lifts with coefficients in [0, p))
    Poly gstar{1}, hstar{1};
    for (auto& [g, e] : factors) {
        gstar = poly_mul(gstar, g, std::numeric_limits<int64_t>::max() / 4);  // lift: no mod
        for (int i = 0; i < e - 1; ++i)
            hstar = poly_mul(hstar, g, std::numeric_limits<int64_t>::max() / 4);
    }
    // F = (g* h* - f)/p over Z, then reduce mod p
    Poly gh = poly_mul(gstar, hstar, std::numeric_limits<int64_t>::max() / 4);
    Poly f{-m, 0, 0, 1};
    size_t len = std::max(gh.size(), f.size());
    Poly F(len, 0);
    for (size_t i = 0; i < len; ++i) {
        int64_t a = i < gh.size() ? gh[i] : 0;
        int64_t b = i < f.size() ? f[i] : 0;
        int64_t diff = a - b;
        if (diff % p != 0) throw std::logic_error("dedekind: g*h* != f mod p");
        F[i] = md(diff / p);
    }
    Poly Fbar = poly_trim(F);
    Poly gbar, hbar;
    gbar = gstar;
    for (auto& c : gbar) c = md(c);
    hbar = hstar;
    for (auto& c : hbar) c = md(c);
    Poly d = poly_gcd(poly_gcd(poly_trim(gbar), poly_trim(hbar), p), Fbar, p);
    return d.size() == 1;  // gcd is a nonzero constant
}

}  // namespace

void verify_integral_basis(const CubicField& K) {
    // trace-form discriminant must be -27 (hk)^2
    // basis {1, e1, e2}: Tr(1)=3, Tr(e1)=Tr(e2)=0, Tr(e1^2)=Tr(k e2)=0,
    // Tr(e2^2)=Tr(h e1)=0, Tr(e1 e2)=Tr(hk)=3hk
    long h = static_cast<long>(K.h()), k = static_cast<long>(K.k());
    mpz_class hk(h * k);
    mpz_class tr[3][3] = {{3, 0, 0}, {0, 0, 3 * hk}, {0, 3 * hk, 0}};
    mpz_class det = tr[0][0] * (tr[1][1] * tr[2][2] - tr[1][2] * tr[2][1]);
    if (det != K.disc())
        throw std::logic_error("verify_integral_basis: trace-form discriminant mismatch");

    // maximality at every prime of 3 n': p | h via theta = cbrt(n); p | k via
    // eta = cbrt(h^2 k) (the same module in the other generator); p = 3 via theta
    for (auto [p, e] : factor_int(3 * K.np())) {
        (void)e;
        bool ok;
        if (K.k() % p == 0)
            ok = dedekind_maximal(K.h() * K.h() * K.k(), p);
        else
            ok = dedekind_maximal(K.n(), p);
        if (!ok) throw std::logic_error("verify_integral_basis: order not maximal at p=" +
                                        std::to_string(p));
    }
}

// --- lattices and the Voronoi chain -------------------------------------------

namespace {

struct Lat {
    // basis rows in integral-basis coordinates
    std::array<CFElem, 3> rows;
};

// canonical integer HNF representation: rows*den are integers, matrix in row
// HNF with the rational direction isolated last (coordinate order c2, c1, c0)
struct CanonLat {
    mpz_class A[3][3];
    mpz_class den;
    std::string key() const {
        std::ostringstream os;
        os << den.get_str();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) os << "|" << A[i][j].get_str();
        return os.str();
    }
};

// row HNF of an m x 3 integer matrix (full rank 3), echelon from the left
void hnf_rows(std::vector<std::array<mpz_class, 3>>& M) {
    size_t rows = M.size();
    size_t pivot_row = 0;
    for (int col = 0; col < 3 && pivot_row < rows; ++col) {
        // gcd-eliminate below
        for (size_t r = pivot_row + 1; r < rows; ++r) {
            while (M[r][col] != 0) {
                if (M[pivot_row][col] == 0) {
                    std::swap(M[pivot_row], M[r]);
                    continue;
                }
                mpz_class q = M[r][col] / M[pivot_row][col];
                for (int j = 0; j < 3; ++j) M[r][j] -= q * M[pivot_row][j];
                if (M[r][col] != 0) std::swap(M[pivot_row], M[r]);
            }
        }
        if (M[pivot_row][col] != 0) {
            if (M[pivot_row][col] < 0)
                for (int j = 0; j < 3; ++j) M[pivot_row][j] = -M[pivot_row][j];
            // reduce rows above
            for (size_t r = 0; r < pivot_row; ++r) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), M[r][col].get_mpz_t(), M[pivot_row][col].get_mpz_t());
                if (q != 0)
                    for (int j = 0; j < 3; ++j) M[r][j] -= q * M[pivot_row][j];
            }
            ++pivot_row;
        }
    }
    M.resize(pivot_row);
}

CanonLat canonicalize(const Lat& L) {
    // common denominator
    mpz_class den(1);
    for (const auto& r : L.rows) {
        den = lcm(den, r.c0.get_den());
        den = lcm(den, r.c1.get_den());
        den = lcm(den, r.c2.get_den());
    }
    std::vector<std::array<mpz_class, 3>> M;
    for (const auto& r : L.rows) {
        // coordinate order (c2, c1, c0) so the rational direction is the last pivot
        mpz_class a2 = r.c2.get_num() * (den / r.c2.get_den());
        mpz_class a1 = r.c1.get_num() * (den / r.c1.get_den());
        mpz_class a0 = r.c0.get_num() * (den / r.c0.get_den());
        M.push_back({a2, a1, a0});
    }
    hnf_rows(M);
    if (M.size() != 3) throw std::logic_error("canonicalize: lattice not full rank");
    CanonLat c;
    c.den = den;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c.A[i][j] = M[i][j];
    // normalize content against denominator
    mpz_class g = c.den;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g = gcd(g, c.A[i][j]);
    if (g > 1) {
        c.den /= g;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c.A[i][j] /= g;
    }
    return c;
}

Lat from_canon(const CanonLat& c) {
    Lat L;
    for (int i = 0; i < 3; ++i) {
        mpq_class c2(c.A[i][0]), c1(c.A[i][1]), c0(c.A[i][2]);
        mpq_class d(c.den);
        L.rows[i] = CFElem{c0 / d, c1 / d, c2 / d};
    }
    return L;
}

Lat lat_OK() {
    Lat L;
    L.rows = {CFElem{1, 0, 0}, CFElem{0, 1, 0}, CFElem{0, 0, 1}};
    return L;
}

Lat lat_scale_div(const CubicField& K, const Lat& L, const CFElem& t) {
    CFElem tinv = K.inverse(t);
    Lat out;
    for (int i = 0; i < 3; ++i) out.rows[i] = K.mul(L.rows[i], tinv);
    return out;
}

Lat lat_mul(const CubicField& K, const Lat& A, const Lat& B) {
    // HNF of the 9 pairwise products
    mpz_class den(1);
    std::vector<CFElem> prods;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) prods.push_back(K.mul(A.rows[i], B.rows[j]));
    for (const auto& r : prods) {
        den = lcm(den, r.c0.get_den());
        den = lcm(den, r.c1.get_den());
        den = lcm(den, r.c2.get_den());
    }
    std::vector<std::array<mpz_class, 3>> M;
    for (const auto& r : prods)
        M.push_back({r.c2.get_num() * (den / r.c2.get_den()),
                     r.c1.get_num() * (den / r.c1.get_den()),
                     r.c0.get_num() * (den / r.c0.get_den())});
    hnf_rows(M);
    if (M.size() != 3) throw std::logic_error("lat_mul: product not full rank");
    CanonLat c;
    c.den = den;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c.A[i][j] = M[i][j];
    return from_canon(c);
}

struct EmbBasis {
    // rows of the real embedding (sigma0, Re sigma1, Im sigma1)
    BigFloat v[3][3];
};

EmbBasis embed_lat(const CubicField& K, const Lat& L, mpfr_prec_t prec) {
    EmbBasis E;
    for (int i = 0; i < 3; ++i) {
        BigFloat s0 = K.embed_real(L.rows[i], prec);
        BigComplex s1 = K.embed_complex(L.rows[i], prec);
        E.v[i][0] = s0;
        E.v[i][1] = s1.re();
        E.v[i][2] = s1.im();
    }
    return E;
}

// one pass of textbook LLL (delta = 0.99) on the embedded rows; the integer
// transform (new = U * old) is returned so callers can update exact rows.
// Returns true when any operation was applied.
bool lll3_pass(EmbBasis& E, mpz_class U[3][3], mpfr_prec_t prec) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) U[i][j] = (i == j) ? 1 : 0;
    bool changed = false;
    auto dot = [&](int i, int j) {
        return E.v[i][0] * E.v[j][0] + E.v[i][1] * E.v[j][1] + E.v[i][2] * E.v[j][2];
    };
    auto row_sub = [&](int i, int j, const mpz_class& q) {
        BigFloat qf(q, prec);
        for (int t = 0; t < 3; ++t) E.v[i][t] -= E.v[j][t] * qf;
        for (int t = 0; t < 3; ++t) U[i][t] -= q * U[j][t];
        changed = true;
    };
    BigFloat delta(0.99, prec);
    int k = 1;
    for (int guard = 0; k < 3 && guard < 10000; ++guard) {
        for (int j = k - 1; j >= 0; --j) {
            BigFloat B0 = dot(0, 0);
            BigFloat mu10 = dot(1, 0) / B0;
            BigFloat mukj(prec);
            if (j == 0) {
                mukj = dot(k, 0) / B0;
            } else {
                BigFloat B1 = dot(1, 1) - mu10 * mu10 * B0;
                BigFloat mu20 = dot(2, 0) / B0;
                mukj = (dot(2, 1) - mu20 * mu10 * B0) / B1;
            }
            mpz_class q = mukj.round_nearest().to_mpz_round();
            if (q != 0) row_sub(k, j, q);
        }
        BigFloat B0 = dot(0, 0);
        BigFloat mu10 = dot(1, 0) / B0;
        BigFloat B1 = dot(1, 1) - mu10 * mu10 * B0;
        bool lovasz;
        if (k == 1) {
            lovasz = !(B1 < (delta - mu10 * mu10) * B0);
        } else {
            BigFloat mu20 = dot(2, 0) / B0;
            BigFloat mu21 = (dot(2, 1) - mu20 * mu10 * B0) / B1;
            BigFloat B2 = dot(2, 2) - mu20 * mu20 * B0 - mu21 * mu21 * B1;
            lovasz = !(B2 < (delta - mu21 * mu21) * B1);
        }
        if (lovasz) {
            ++k;
        } else {
            std::swap(E.v[k - 1], E.v[k]);
            for (int t = 0; t < 3; ++t) std::swap(U[k - 1][t], U[k][t]);
            changed = true;
            k = std::max(1, k - 1);
        }
    }
    return changed;
}

// LLL-reduce the exact rows of a lattice (re-embedding between passes so that
// float cancellation cannot corrupt the basis)
Lat lll_rows(const CubicField& K, Lat L, mpfr_prec_t prec) {
    for (int pass = 0; pass < 6; ++pass) {
        EmbBasis E = embed_lat(K, L, prec);
        mpz_class U[3][3];
        if (!lll3_pass(E, U, prec)) break;
        std::array<CFElem, 3> nr;
        for (int i = 0; i < 3; ++i) {
            CFElem acc{0, 0, 0};
            for (int j = 0; j < 3; ++j)
                acc = K.add(acc, K.mul_scalar(L.rows[j], mpq_class(U[i][j])));
            nr[i] = acc;
        }
        L.rows = nr;
    }
    return L;
}

struct AdjacentMin {
    CFElem theta;
    BigFloat sigma0;
};

// relative minimum adjacent to 1 in the sigma0 direction: the lattice point
// with minimal sigma0 > 1 inside the open cylinder |sigma1| < 1
AdjacentMin adjacent_minimum(const CubicField& K, const Lat& Lin, mpfr_prec_t prec) {
    Lat L = lll_rows(K, Lin, prec);
    EmbBasis E = embed_lat(K, L, prec);

    // covolume and Minkowski bound for the sigma0 extent
    BigFloat det = E.v[0][0] * (E.v[1][1] * E.v[2][2] - E.v[1][2] * E.v[2][1]) -
                   E.v[0][1] * (E.v[1][0] * E.v[2][2] - E.v[1][2] * E.v[2][0]) +
                   E.v[0][2] * (E.v[1][0] * E.v[2][1] - E.v[1][1] * E.v[2][0]);
    double covol = std::abs(det.to_double());
    double X = 4.0 / M_PI * covol * 1.05 + 2.0;

    // coefficient ranges from the inverse basis: |w_i| <= sum_j |Vinv[j][i]| box_j
    double V[3][3], Vinv[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) V[i][j] = E.v[i][j].to_double();
    double d = V[0][0] * (V[1][1] * V[2][2] - V[1][2] * V[2][1]) -
               V[0][1] * (V[1][0] * V[2][2] - V[1][2] * V[2][0]) +
               V[0][2] * (V[1][0] * V[2][1] - V[1][1] * V[2][0]);
    Vinv[0][0] = (V[1][1] * V[2][2] - V[1][2] * V[2][1]) / d;
    Vinv[0][1] = (V[0][2] * V[2][1] - V[0][1] * V[2][2]) / d;
    Vinv[0][2] = (V[0][1] * V[1][2] - V[0][2] * V[1][1]) / d;
    Vinv[1][0] = (V[1][2] * V[2][0] - V[1][0] * V[2][2]) / d;
    Vinv[1][1] = (V[0][0] * V[2][2] - V[0][2] * V[2][0]) / d;
    Vinv[1][2] = (V[0][2] * V[1][0] - V[0][0] * V[1][2]) / d;
    Vinv[2][0] = (V[1][0] * V[2][1] - V[1][1] * V[2][0]) / d;
    Vinv[2][1] = (V[0][1] * V[2][0] - V[0][0] * V[2][1]) / d;
    Vinv[2][2] = (V[0][0] * V[1][1] - V[0][1] * V[1][0]) / d;
    double box[3] = {X, 1.0, 1.0};
    long range[3];
    for (int i = 0; i < 3; ++i) {
        double bound = 0;
        for (int j = 0; j < 3; ++j) bound += std::abs(Vinv[j][i]) * box[j];
        range[i] = static_cast<long>(std::floor(bound)) + 1;
        if (range[i] > 4096) throw std::logic_error("adjacent_minimum: enumeration range too large");
    }

    std::optional<AdjacentMin> best;
    BigFloat one(1L, prec);
    long margin_exp = -static_cast<long>(prec) / 3;
    BigFloat eps = BigFloat::pow2(margin_exp, prec);
    for (long a = -range[0]; a <= range[0]; ++a)
        for (long b = -range[1]; b <= range[1]; ++b)
            for (long c = -range[2]; c <= range[2]; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                BigFloat s0 = E.v[0][0] * a + E.v[1][0] * b + E.v[2][0] * c;
                if (!(s0 > one)) continue;
                BigFloat re = E.v[0][1] * a + E.v[1][1] * b + E.v[2][1] * c;
                BigFloat im = E.v[0][2] * a + E.v[1][2] * b + E.v[2][2] * c;
                BigFloat s1sq = re * re + im * im;
                if (!(s1sq < one)) continue;
                // grey-zone guards
                if ((s0 - one).abs() < eps || (s1sq - one).abs() < eps)
                    throw std::logic_error("adjacent_minimum: precision margin violated");
                if (best && !(s0 < best->sigma0)) continue;
                CFElem elem{0, 0, 0};
                long w[3] = {a, b, c};
                for (int j = 0; j < 3; ++j)
                    elem = K.add(elem, K.mul_scalar(L.rows[j], mpq_class(w[j])));
                best = AdjacentMin{elem, s0};
            }
    if (!best) throw std::logic_error("adjacent_minimum: no candidate found");
    return *best;
}

// make 1 a member and a relative minimum of the lattice
Lat reduce_lattice(const CubicField& K, Lat L, mpfr_prec_t prec) {
    // scale so that 1 is in the lattice: divide by the generator of L cap Q
    CanonLat c = canonicalize(L);
    // last HNF row is (0, 0, a) in (c2, c1, c0) order: the rational element a/den
    if (c.A[2][0] != 0 || c.A[2][1] != 0)
        throw std::logic_error("reduce_lattice: HNF missing rational direction");
    mpq_class rat(c.A[2][2], c.den);
    rat.canonicalize();
    L = from_canon(c);
    for (int i = 0; i < 3; ++i) L.rows[i] = K.mul_scalar(L.rows[i], mpq_class(1) / rat);

    BigFloat one(1L, prec);
    for (int guard = 0; guard < 512; ++guard) {
        // find a point with both embeddings strictly inside the unit cylinder
        L = lll_rows(K, L, prec);
        EmbBasis E = embed_lat(K, L, prec);
        double V[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) V[i][j] = E.v[i][j].to_double();
        double d = V[0][0] * (V[1][1] * V[2][2] - V[1][2] * V[2][1]) -
                   V[0][1] * (V[1][0] * V[2][2] - V[1][2] * V[2][0]) +
                   V[0][2] * (V[1][0] * V[2][1] - V[1][1] * V[2][0]);
        double Vinv[3][3];
        Vinv[0][0] = (V[1][1] * V[2][2] - V[1][2] * V[2][1]) / d;
        Vinv[0][1] = (V[0][2] * V[2][1] - V[0][1] * V[2][2]) / d;
        Vinv[0][2] = (V[0][1] * V[1][2] - V[0][2] * V[1][1]) / d;
        Vinv[1][0] = (V[1][2] * V[2][0] - V[1][0] * V[2][2]) / d;
        Vinv[1][1] = (V[0][0] * V[2][2] - V[0][2] * V[2][0]) / d;
        Vinv[1][2] = (V[0][2] * V[1][0] - V[0][0] * V[1][2]) / d;
        Vinv[2][0] = (V[1][0] * V[2][1] - V[1][1] * V[2][0]) / d;
        Vinv[2][1] = (V[0][1] * V[2][0] - V[0][0] * V[2][1]) / d;
        Vinv[2][2] = (V[0][0] * V[1][1] - V[0][1] * V[1][0]) / d;
        long range[3];
        for (int i = 0; i < 3; ++i) {
            double bound = 0;
            for (int j = 0; j < 3; ++j) bound += std::abs(Vinv[j][i]);
            range[i] = static_cast<long>(std::floor(bound)) + 1;
            if (range[i] > 4096) throw std::logic_error("reduce_lattice: range too large");
        }
        std::optional<std::pair<CFElem, BigFloat>> found;  // minimize |N|
        for (long a = -range[0]; a <= range[0]; ++a)
            for (long b = -range[1]; b <= range[1]; ++b)
                for (long c3 = -range[2]; c3 <= range[2]; ++c3) {
                    if (a == 0 && b == 0 && c3 == 0) continue;
                    BigFloat s0 = (E.v[0][0] * a + E.v[1][0] * b + E.v[2][0] * c3).abs();
                    if (!(s0 < one)) continue;
                    BigFloat re = E.v[0][1] * a + E.v[1][1] * b + E.v[2][1] * c3;
                    BigFloat im = E.v[0][2] * a + E.v[1][2] * b + E.v[2][2] * c3;
                    BigFloat s1sq = re * re + im * im;
                    if (!(s1sq < one)) continue;
                    BigFloat nrm = s0 * s1sq;
                    if (!found || nrm < found->second) {
                        long w[3] = {a, b, c3};
                        CFElem elem{0, 0, 0};
                        for (int j = 0; j < 3; ++j)
                            elem = K.add(elem, K.mul_scalar(L.rows[j], mpq_class(w[j])));
                        found = {elem, nrm};
                    }
                }
        if (!found) return L;  // 1 is a relative minimum now
        L = lat_scale_div(K, L, found->first);
    }
    throw std::logic_error("reduce_lattice: did not stabilize");
}

// all canonical forms in the Voronoi cycle of a reduced lattice, plus the
// product of the chain divisors (a unit when the lattice is O_K)
struct CycleResult {
    std::vector<CanonLat> members;
    CFElem chain_product;
    std::string label;  // lexicographically least member key
};

CycleResult voronoi_cycle(const CubicField& K, const Lat& start, mpfr_prec_t prec) {
    CycleResult out;
    out.chain_product = CFElem{1, 0, 0};
    CanonLat c0 = canonicalize(start);
    std::string k0 = c0.key();
    Lat L = start;
    out.members.push_back(c0);
    for (int step = 0; step < 100000; ++step) {
        AdjacentMin am = adjacent_minimum(K, L, prec);
        out.chain_product = K.mul(out.chain_product, am.theta);
        L = lat_scale_div(K, L, am.theta);
        CanonLat c = canonicalize(L);
        if (c.key() == k0) break;
        out.members.push_back(c);
        if (step == 99999) throw std::logic_error("voronoi_cycle: no period found");
    }
    out.label = k0;
    for (const auto& m : out.members) out.label = std::min(out.label, m.key());
    return out;
}

}  // namespace

UnitCertificate fundamental_unit(const CubicField& K) {
    mpfr_prec_t prec = 320;
    CycleResult cyc = voronoi_cycle(K, lat_OK(), prec);
    CFElem u = cyc.chain_product;
    mpq_class N = K.norm(u);
    if (N != 1 && N != -1) throw std::logic_error("fundamental_unit: chain product is not a unit");
    UnitCertificate cert;
    cert.u = u;
    cert.unit_norm = N.get_num();
    cert.method = "voronoi-cycle";
    cert.cycle_length = static_cast<int64_t>(cyc.members.size());
    mpfr_prec_t p2 = 320;
    BigFloat s0 = K.embed_real(u, p2);
    if (!(s0 > 1L)) throw std::logic_error("fundamental_unit: real embedding not > 1");
    cert.log_u = s0.log();
    return cert;
}

std::optional<CFElem> unit_box_search(const CubicField& K, double B) {
    double nu = std::cbrt(static_cast<double>(K.n()));
    long b0 = static_cast<long>(std::floor((B + 2) / 3)) + 1;
    long b1 = static_cast<long>(std::floor((B + 2) / (3 * nu))) + 1;
    long b2 = static_cast<long>(std::floor((B + 2) * K.k() / (3 * nu * nu))) + 1;
    std::optional<CFElem> best;
    double best_s0 = 0;
    mpfr_prec_t prec = 128;
    for (long c0 = -b0; c0 <= b0; ++c0)
        for (long c1 = -b1; c1 <= b1; ++c1)
            for (long c2 = -b2; c2 <= b2; ++c2) {
                if (c0 == 0 && c1 == 0 && c2 == 0) continue;
                CFElem x{mpq_class(c0), mpq_class(c1), mpq_class(c2)};
                mpq_class N = K.norm(x);
                if (N != 1 && N != -1) continue;
                double s0 = K.embed_real(x, prec).to_double();
                if (s0 <= 1.0 + 1e-12 || s0 > B) continue;
                double s1 = std::sqrt(K.embed_complex(x, prec).norm2().to_double());
                if (s1 > B) continue;
                if (!best || s0 < best_s0) {
                    best = x;
                    best_s0 = s0;
                }
            }
    return best;
}

double minkowski_bound(const CubicField& K) {
    // (4/pi) (3!/3^3) sqrt|d| with |d| = 27 (n')^2
    return 4.0 / M_PI * (6.0 / 27.0) * std::sqrt(27.0) * static_cast<double>(K.np());
}

std::vector<std::pair<IdealLattice, int64_t>> prime_ideals_up_to(const CubicField& K,
                                                                 double bound) {
    std::vector<std::pair<IdealLattice, int64_t>> out;
    auto push_two_gen = [&](int64_t p, const CFElem& g, int64_t norm) {
        // lattice = p O_K + g O_K
        Lat L;
        std::vector<CFElem> gens;
        std::array<CFElem, 3> basis = {CFElem{1, 0, 0}, CFElem{0, 1, 0}, CFElem{0, 0, 1}};
        std::vector<std::array<mpz_class, 3>> M;
        for (const auto& e : basis) {
            CFElem pe = K.mul_scalar(e, mpq_class(static_cast<long>(p)));
            CFElem ge = K.mul(g, e);
            gens.push_back(pe);
            gens.push_back(ge);
        }
        for (const auto& r : gens)
            M.push_back({r.c2.get_num(), r.c1.get_num(), r.c0.get_num()});
        hnf_rows(M);
        if (M.size() != 3) throw std::logic_error("prime ideal lattice not full rank");
        CanonLat c;
        c.den = 1;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c.A[i][j] = M[i][j];
        Lat lat = from_canon(c);
        IdealLattice I;
        I.basis = lat.rows;
        out.push_back({I, norm});
    };

    for (int64_t p = 2; p <= static_cast<int64_t>(bound); ++p) {
        bool isprime = p >= 2;
        for (int64_t q = 2; q * q <= p; ++q)
            if (p % q == 0) { isprime = false; break; }
        if (!isprime) continue;
        if (p == 3) {
            // totally ramified: (3, theta - a) with a = n mod 3
            int64_t a = K.n() % 3;
            push_two_gen(3, CFElem{mpq_class(-static_cast<long>(a)), 1, 0}, 3);
            continue;
        }
        if (K.h() % p == 0) {
            push_two_gen(p, CFElem{0, 1, 0}, p);  // (p, theta)
            continue;
        }
        if (K.k() % p == 0) {
            push_two_gen(p, CFElem{0, 0, 1}, p);  // (p, theta^2/k)
            continue;
        }
        // unramified: factor x^3 - n mod p
        auto md = [p](int64_t v) { return ((v % p) + p) % p; };
        std::vector<int64_t> roots;
        for (int64_t r = 0; r < p; ++r)
            if (md(r * r * r - K.n()) == 0) roots.push_back(r);
        if (roots.empty()) continue;  // inert: norm p^3 > bound for our ranges
        if (roots.size() == 1) {
            // (p, theta - r) norm p; quadratic factor has norm p^2
            push_two_gen(p, CFElem{mpq_class(-static_cast<long>(roots[0])), 1, 0}, p);
            if (static_cast<double>(p) * static_cast<double>(p) <= bound) {
                int64_t r = roots[0];
                // theta^2 + r theta + r^2 expressed on the basis: theta^2 = k e2
                CFElem g{mpq_class(static_cast<long>(md(r * r))), mpq_class(static_cast<long>(r)),
                         mpq_class(static_cast<long>(K.k()))};
                push_two_gen(p, g, p * p);
            }
        } else {
            for (int64_t r : roots)
                push_two_gen(p, CFElem{mpq_class(-static_cast<long>(r)), 1, 0}, p);
        }
    }
    return out;
}

int64_t class_number(const CubicField& K) {
    mpfr_prec_t prec = 320;
    auto primes = prime_ideals_up_to(K, minkowski_bound(K));

    std::map<std::string, int> classes;
    std::vector<Lat> reps;

    Lat OK = lat_OK();
    CycleResult pcyc = voronoi_cycle(K, OK, prec);
    classes[pcyc.label] = 0;
    reps.push_back(OK);

    std::vector<size_t> queue{0};
    while (!queue.empty()) {
        size_t idx = queue.back();
        queue.pop_back();
        Lat R = reps[idx];
        for (const auto& [P, nrm] : primes) {
            (void)nrm;
            Lat PL;
            PL.rows = P.basis;
            Lat prod = lat_mul(K, R, PL);
            Lat red = reduce_lattice(K, prod, prec);
            CycleResult cyc = voronoi_cycle(K, red, prec);
            if (classes.find(cyc.label) == classes.end()) {
                classes[cyc.label] = static_cast<int>(reps.size());
                reps.push_back(red);
                queue.push_back(reps.size() - 1);
            }
        }
    }
    return static_cast<int64_t>(classes.size());
}

}  // namespace hg
