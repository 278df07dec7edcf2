#include "heegner/eisenstein.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace hg {

EisensteinInt eis_unit(int k) {
    static const EisensteinInt units[6] = {
        {1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1},
    };
    return units[((k % 6) + 6) % 6];
}

std::pair<EisensteinInt, EisensteinInt> eis_divmod(EisensteinInt x, EisensteinInt y) {
    if (y.is_zero()) throw std::domain_error("eis_divmod: division by zero");
    // x/y = (x * conj(y)) / norm(y); round both coordinates to nearest
    EisensteinInt num = x * y.conj();
    int64_t n = y.norm();
    auto round_div = [](int64_t p, int64_t q) -> int64_t {
        // nearest integer to p/q, q > 0
        return static_cast<int64_t>(std::llround(static_cast<double>(p) / static_cast<double>(q)));
    };
    int64_t qa = round_div(num.a, n);
    int64_t qb = round_div(num.b, n);
    // guard against double rounding on large inputs
    EisensteinInt q{qa, qb};
    EisensteinInt r = x - q * y;
    if (r.norm() >= n) {
        for (int da = -1; da <= 1; ++da)
            for (int db = -1; db <= 1; ++db) {
                EisensteinInt q2{qa + da, qb + db};
                EisensteinInt r2 = x - q2 * y;
                if (r2.norm() < r.norm()) { q = q2; r = r2; }
            }
    }
    return {q, r};
}

EisensteinInt eis_mod(EisensteinInt x, EisensteinInt y) { return eis_divmod(x, y).second; }

bool eis_divides(EisensteinInt d, EisensteinInt x) { return eis_mod(x, d).is_zero(); }

EisensteinInt eis_gcd(EisensteinInt x, EisensteinInt y) {
    while (!y.is_zero()) {
        EisensteinInt r = eis_mod(x, y);
        x = y;
        y = r;
    }
    return x;
}

namespace {

std::vector<std::pair<int64_t, int>> factor_int(int64_t n) {
    std::vector<std::pair<int64_t, int>> f;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.push_back({p, e});
        }
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

// prime of norm p for p = 1 mod 3, via exhaustive search on a^2 - ab + b^2 = p
EisensteinInt split_prime_above(int64_t p) {
    for (int64_t b = 1; 3 * b * b <= 4 * p; ++b) {
        int64_t disc = 4 * p - 3 * b * b;
        int64_t s = static_cast<int64_t>(std::llround(std::sqrt(static_cast<double>(disc))));
        while (s * s < disc) ++s;
        while (s * s > disc) --s;
        if (s * s != disc) continue;
        if ((b + s) % 2 == 0) return {(b + s) / 2, b};
        if ((b - s) % 2 == 0 && (b - s) / 2 != 0) return {(b - s) / 2, b};
    }
    throw std::logic_error("split_prime_above: no representation found");
}

}  // namespace

EisFactorization eis_factor(EisensteinInt x) {
    if (x.is_zero()) throw std::domain_error("eis_factor: zero");
    EisFactorization out;
    int64_t n = x.norm();
    for (auto [p, e] : factor_int(n)) {
        EisensteinInt pi;
        if (p == 3) {
            pi = {1, -1};  // ramified: 3 = -omega^2 (1-omega)^2
        } else if (p % 3 == 1) {
            pi = split_prime_above(p);
            if (!eis_divides(pi, x)) pi = pi.conj();
        } else {
            pi = {p, 0};  // inert
        }
        int cnt = 0;
        while (eis_divides(pi, x)) {
            x = eis_divmod(x, pi).first;
            ++cnt;
        }
        if (cnt) out.factors.push_back({pi, cnt});
        // split case: the conjugate prime may also divide
        if (p % 3 == 1) {
            EisensteinInt pib = pi.conj();
            int cnt2 = 0;
            while (eis_divides(pib, x)) {
                x = eis_divmod(x, pib).first;
                ++cnt2;
            }
            if (cnt2) out.factors.push_back({pib, cnt2});
        }
    }
    if (!x.is_unit()) throw std::logic_error("eis_factor: non-unit remainder");
    out.unit = x;
    return out;
}

int cubic_residue_symbol(EisensteinInt x, EisensteinInt lambda) {
    int64_t nl = lambda.norm();
    if (nl <= 1 || nl == 3) throw std::domain_error("cubic_residue_symbol: bad modulus");
    if ((nl - 1) % 3 != 0) throw std::domain_error("cubic_residue_symbol: modulus not prime to 3");
    x = eis_mod(x, lambda);
    if (x.is_zero()) throw std::domain_error("cubic_residue_symbol: argument divisible by modulus");
    int64_t e = (nl - 1) / 3;
    EisensteinInt acc{1, 0};
    EisensteinInt base = x;
    while (e) {
        if (e & 1) acc = eis_mod(acc * base, lambda);
        base = eis_mod(base * base, lambda);
        e >>= 1;
    }
    for (int k = 0; k < 3; ++k) {
        EisensteinInt wk = (k == 0) ? EisensteinInt{1, 0} : (k == 1 ? EisensteinInt{0, 1} : EisensteinInt{-1, -1});
        if (eis_mod(acc - wk, lambda).is_zero()) return k;
    }
    throw std::logic_error("cubic_residue_symbol: result not a cube root of unity");
}

CubicCharacter::CubicCharacter(int64_t n) : n_(n) {
    if (n <= 0 || n % 3 == 0) throw std::domain_error("CubicCharacter: modulus must be positive and prime to 3");
    for (auto [p, e] : factor_int(n)) {
        if (p % 3 == 1) {
            EisensteinInt pi = split_prime_above(p);
            primes_.push_back({pi, e});
            primes_.push_back({pi.conj(), e});
        } else {
            primes_.push_back({EisensteinInt{p, 0}, e});
        }
    }
}

bool CubicCharacter::defined_at(EisensteinInt x) const {
    int64_t nx = x.norm();
    return std::gcd(nx % n_, n_) == 1;
}

int CubicCharacter::operator()(EisensteinInt x) const {
    if (!defined_at(x)) throw std::domain_error("CubicCharacter: argument not coprime to modulus");
    int k = 0;
    for (const auto& f : primes_) k += f.exponent * cubic_residue_symbol(x, f.prime);
    return ((k % 3) + 3) % 3;
}

int64_t f_of_n(int64_t n) {
    if (n < 1 || n % 3 == 0) throw std::domain_error("f_of_n: n must be positive and prime to 3");
    int64_t f = n;
    for (auto [p, e] : factor_int(n)) {
        (void)e;
        int legendre = (p % 3 == 1) ? 1 : -1;  // (p/3)
        f = f / p * (p - legendre);
    }
    return f;
}

int64_t squarefree_kernel(int64_t n) {
    int64_t k = 1;
    for (auto [p, e] : factor_int(n)) {
        (void)e;
        k *= p;
    }
    return k;
}

int64_t sigma_divisors(int64_t n) {
    int64_t s = 1;
    for (auto [p, e] : factor_int(n)) {
        int64_t t = 1, pk = 1;
        for (int i = 0; i < e; ++i) { pk *= p; t += pk; }
        s *= t;
    }
    return s;
}

bool admissible_n(int64_t n) {
    if (n < 2 || std::gcd(n, int64_t{6}) != 1) return false;
    int64_t m = n % 9;
    if (m == 1 || m == 8) return false;
    for (auto [p, e] : factor_int(n)) {
        (void)p;
        if (e % 3 == 0) return false;
    }
    return true;
}

void require_admissible_n(int64_t n) {
    if (!admissible_n(n))
        throw std::invalid_argument("n must be coprime to 6, not +-1 mod 9, with cube-free factorization");
}

namespace {

int64_t mod_pos(int64_t x, int64_t m) { return ((x % m) + m) % m; }

// CRT on each coordinate for moduli 2, 3, n; result reduced into [0, 6n)^2
EisensteinInt crt_lift(EisensteinInt mod2, EisensteinInt mod3, EisensteinInt modn, int64_t n) {
    auto crt1 = [n](int64_t r2, int64_t r3, int64_t rn) -> int64_t {
        int64_t ninv = (mod_pos(n, 6) == 1)   ? 1
                       : (mod_pos(n, 6) == 5) ? 5
                                              : -1;
        if (ninv < 0) throw std::logic_error("crt_lift: n not coprime to 6");
        // combine r2 mod 2, r3 mod 3 into r6 mod 6, then x = rn + n*t
        int64_t r6 = -1;
        for (int64_t c = 0; c < 6; ++c)
            if (c % 2 == mod_pos(r2, 2) && c % 3 == mod_pos(r3, 3)) { r6 = c; break; }
        int64_t t = mod_pos((r6 - rn) % 6 * ninv, 6);
        return mod_pos(rn + n * t, 6 * n);
    };
    return {crt1(mod2.a, mod3.a, modn.a), crt1(mod2.b, mod3.b, modn.b)};
}

EisensteinInt omega_pow_mod2_rep(int i) {
    // residues of omega^i mod 2 as 0/1 coordinates
    static const EisensteinInt reps[3] = {{1, 0}, {0, 1}, {1, 1}};
    return reps[i];
}

// canonical class representatives of (O/n)^x / (Z/n)^x as points of [0,n)^2
std::vector<EisensteinInt> class_reps_mod_n(int64_t n) {
    std::vector<uint8_t> seen(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
    std::vector<int64_t> units;
    for (int64_t c = 1; c < n; ++c)
        if (std::gcd(c, n) == 1) units.push_back(c);

    std::vector<EisensteinInt> reps;
    for (int64_t a = 0; a < n; ++a) {
        for (int64_t b = 0; b < n; ++b) {
            if (seen[static_cast<size_t>(a) * n + b]) continue;
            EisensteinInt x{a, b};
            if (std::gcd(x.norm() % n, n) != 1) continue;
            // orbit under scalar multiplication
            EisensteinInt best = x;
            for (int64_t c : units) {
                EisensteinInt y{mod_pos(c * a, n), mod_pos(c * b, n)};
                seen[static_cast<size_t>(y.a) * n + y.b] = 1;
                if (y < best) best = y;
            }
            reps.push_back(best);
        }
    }
    std::sort(reps.begin(), reps.end());
    return reps;
}

}  // namespace

ConjugateSet enumerate_conjugates(int64_t n) {
    // the index-set combinatorics only need cube-free n coprime to 6; the
    // stricter mod-9 hypothesis is enforced where the Galois bijection is used
    if (n < 2 || std::gcd(n, int64_t{6}) != 1)
        throw std::invalid_argument("enumerate_conjugates: n must be >= 2 and coprime to 6");
    for (int64_t p = 2; p * p * p <= n; ++p)
        if (n % (p * p * p) == 0)
            throw std::invalid_argument("enumerate_conjugates: n must be cube-free");
    ConjugateSet cs;
    cs.n = n;
    CubicCharacter chi(n);
    auto reps = class_reps_mod_n(n);
    for (int i = 0; i < 3; ++i) {
        for (const auto& r : reps) {
            EisensteinInt x = crt_lift(omega_pow_mod2_rep(i), {1, 0}, r, n);
            cs.A[i].push_back(x);
            if (chi(x) == 0) cs.B[i].push_back(x);
        }
        std::sort(cs.A[i].begin(), cs.A[i].end());
        std::sort(cs.B[i].begin(), cs.B[i].end());
        if (3 * cs.B[i].size() != cs.A[i].size())
            throw std::logic_error("enumerate_conjugates: character kernel is not of index 3");
    }
    return cs;
}

std::vector<EisensteinInt> galois_reps_mod_n(int64_t n) {
    require_admissible_n(n);
    auto reps = class_reps_mod_n(n);
    // orbit of the class representatives under multiplication by omega
    std::vector<int64_t> units;
    for (int64_t c = 1; c < n; ++c)
        if (std::gcd(c, n) == 1) units.push_back(c);

    auto canonical_class_rep = [&](EisensteinInt x) {
        EisensteinInt best{-1, -1};
        bool first = true;
        for (int64_t c : units) {
            EisensteinInt y{mod_pos(c * x.a, n), mod_pos(c * x.b, n)};
            if (first || y < best) { best = y; first = false; }
        }
        return best;
    };

    std::vector<EisensteinInt> orbit_reps;
    std::vector<EisensteinInt> used;
    for (const auto& r : reps) {
        bool found = false;
        for (const auto& u : used)
            if (u == r) { found = true; break; }
        if (found) continue;
        // orbit {r, omega r, omega^2 r} as canonical classes
        EisensteinInt w = EisensteinInt::omega();
        EisensteinInt y = r;
        EisensteinInt best = r;
        for (int j = 0; j < 3; ++j) {
            EisensteinInt cls = canonical_class_rep(y);
            used.push_back(cls);
            if (cls < best) best = cls;
            y = EisensteinInt{mod_pos((w * y).a, n), mod_pos((w * y).b, n)};
        }
        orbit_reps.push_back(best);
    }
    std::sort(orbit_reps.begin(), orbit_reps.end());

    std::vector<EisensteinInt> lifted;
    lifted.reserve(orbit_reps.size());
    for (const auto& r : orbit_reps) lifted.push_back(crt_lift({1, 0}, {1, 0}, r, n));
    std::sort(lifted.begin(), lifted.end());
    return lifted;
}

}  // namespace hg
