#include "heegner/cm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace hg {

Mat2Q matrix_M(EisensteinInt x, int64_t n) {
    if (x.is_zero()) throw std::domain_error("matrix_M: x must be nonzero");
    mpq_class a(static_cast<long>(x.a)), b(static_cast<long>(x.b));
    mpq_class bn(static_cast<long>(x.b), static_cast<long>(n));
    bn.canonicalize();
    return {a - b, -b * static_cast<long>(n), bn, a};
}

namespace {

int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }

// minimal-|r| solution of r*u + s*v = k with gcd(u, v) = 1
std::pair<int64_t, int64_t> solve_bezout_min_r(int64_t u, int64_t v, int64_t k) {
    if (v == 0) {
        // u = +-1
        return {k / u, 0};
    }
    // extended gcd
    int64_t old_r = u, r = v, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        int64_t q = old_r / r, tmp;
        tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    // old_r = gcd = +-1
    int64_t g = old_r;
    int64_t r0 = old_s * k / g, s0 = old_t * k / g;
    // r = r0 + t v, s = s0 - t u: minimize |r|
    double tstar = -static_cast<double>(r0) / static_cast<double>(v);
    int64_t tbest = static_cast<int64_t>(std::llround(tstar));
    int64_t best_r = r0 + tbest * v, best_s = s0 - tbest * u;
    for (int64_t dt = -1; dt <= 1; ++dt) {
        int64_t rr = r0 + (tbest + dt) * v;
        if (std::abs(rr) < std::abs(best_r) ||
            (std::abs(rr) == std::abs(best_r) && rr > best_r)) {
            best_r = rr;
            best_s = s0 - (tbest + dt) * u;
        }
    }
    return {best_r, best_s};
}

}  // namespace

Mat2Q matrix_S(EisensteinInt x, int64_t n) {
    int64_t nx = x.norm();
    if (gcd64(nx, 6 * n) != 1) throw std::domain_error("matrix_S: norm(x) must be coprime to 6n");
    int64_t q = gcd64(std::abs(x.a), std::abs(x.b));
    if (((q % 6) + 6) % 6 != 1) q = -q;  // sign fixed by q = 1 (mod 6)
    int64_t a_q = x.a / q, b_q = x.b / q;
    if ((nx / (q * q) - 1) % 6 != 0)
        throw std::logic_error("matrix_S: norm not 1 mod 6 after primitive scaling");
    int64_t k = (nx / (q * q) - 1) / 6;
    auto [r, s] = solve_bezout_min_r(a_q, b_q, k);

    mpq_class m00(static_cast<long>((x.a - x.b) / q - 6 * r));
    mpq_class m01(static_cast<long>(-(b_q - 6 * s)) * static_cast<long>(n));
    mpq_class m10(static_cast<long>(b_q), static_cast<long>(n));
    m10.canonicalize();
    mpq_class m11(static_cast<long>(a_q));
    Mat2Q S{m00, m01, m10, m11};
    if (S.det() != 1) throw std::logic_error("matrix_S: determinant is not 1");
    return S;
}

Mat2Q matrix_R(EisensteinInt x, int64_t n) {
    Mat2Q S = matrix_S(x, n);
    long ln = static_cast<long>(n);
    return {S.a * ln, S.b, S.c * ln, S.d};
}

Mat2Z gamma_plus() { return {1, 2, 4, 9}; }
Mat2Z gamma_minus() { return {5, 2, 22, 9}; }
Mat2Z gamma_prime() { return {1, 3, 3, 10}; }

int omega_class_mod2(EisensteinInt x) {
    int a = static_cast<int>(((x.a % 2) + 2) % 2), b = static_cast<int>(((x.b % 2) + 2) % 2);
    if (a == 1 && b == 0) return 0;
    if (a == 0 && b == 1) return 1;
    if (a == 1 && b == 1) return 2;
    throw std::domain_error("omega_class_mod2: x even");
}

std::pair<int, int> omega_class_mod3(EisensteinInt x) {
    auto m3 = [](int64_t v) { return static_cast<int>(((v % 3) + 3) % 3); };
    int a = m3(x.a), b = m3(x.b);
    static const std::pair<int, int> pow[3] = {{1, 0}, {0, 1}, {2, 2}};  // omega^j mod 3
    for (int j = 0; j < 3; ++j) {
        if (a == pow[j].first && b == pow[j].second) return {j, +1};
        if (a == m3(-pow[j].first) && b == m3(-pow[j].second)) return {j, -1};
    }
    throw std::domain_error("omega_class_mod3: x not a unit mod 3");
}

bool check_randj_congruence(EisensteinInt x, int64_t n) {
    Mat2Q S = matrix_S(x, n);
    int r = omega_class_mod2(x);
    auto [j, sign] = omega_class_mod3(x);
    (void)sign;
    int legendre_n3 = (n % 3 == 1) ? 1 : -1;
    Mat2Z g = (legendre_n3 == 1) ? gamma_minus() : gamma_plus();  // gamma_{-(n/3)}
    Mat2Z gp = gamma_prime();
    Mat2Z G = Mat2Z::identity();
    for (int i = 0; i < r; ++i) G = G * gp;
    for (int i = 0; i < j; ++i) G = G * g;
    Mat2Q Gq(G), Gneg(Mat2Z{-G.a, -G.b, -G.c, -G.d});
    bool mod2 = congruent_mod(S, Gq, 2);
    bool mod3 = congruent_mod(S, Gq, 3) || congruent_mod(S, Gneg, 3);
    return mod2 && mod3;
}

RatOmega conjugate_point_tau(EisensteinInt x, int64_t n) {
    Mat2Q R = matrix_R(x, n);
    RatOmega omega_pt{mpq_class(0), mpq_class(1)};
    RatOmega z = R.moebius(omega_pt);
    if (!z.in_upper_half_plane())
        throw std::logic_error("conjugate_point_tau: transported point left the upper half-plane");
    return z;
}

BigComplex conjugate_value(EisensteinInt x, int64_t n, mpfr_prec_t prec) {
    RatOmega z = conjugate_point_tau(x, n);
    return eval_X(z, prec) + 1;
}

namespace {

BigComplex balanced_product(const std::vector<BigComplex>& v, size_t lo, size_t hi) {
    if (hi - lo == 1) return v[lo];
    size_t mid = lo + (hi - lo) / 2;
    return balanced_product(v, lo, mid) * balanced_product(v, mid, hi);
}

BigFloat balanced_log_sum(const std::vector<BigFloat>& v, size_t lo, size_t hi) {
    if (hi - lo == 1) return v[lo];
    size_t mid = lo + (hi - lo) / 2;
    return balanced_log_sum(v, lo, mid) + balanced_log_sum(v, mid, hi);
}

}  // namespace

NormUResult norm_U(int64_t n, mpfr_prec_t prec, int threads) {
    ConjugateSet cs = enumerate_conjugates(n);
    std::vector<EisensteinInt> xs = cs.all_B();
    std::sort(xs.begin(), xs.end());
    if (xs.empty()) throw std::logic_error("norm_U: empty conjugate set");

    std::vector<BigComplex> vals(xs.size());
    unsigned hw = std::thread::hardware_concurrency();
    size_t nthreads = threads > 0 ? static_cast<size_t>(threads) : (hw ? hw : 1);
    nthreads = std::min(nthreads, xs.size());
    if (nthreads <= 1) {
        for (size_t i = 0; i < xs.size(); ++i) vals[i] = conjugate_value(xs[i], n, prec);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (size_t t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= xs.size()) return;
                    vals[i] = conjugate_value(xs[i], n, prec);
                }
            });
        for (auto& th : pool) th.join();
    }

    NormUResult out;
    out.conjugate_count = xs.size();
    out.U = balanced_product(vals, 0, vals.size());
    std::vector<BigFloat> logs(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) logs[i] = vals[i].norm2().log() / 2;
    out.log_norm_K = balanced_log_sum(logs, 0, logs.size()) * 2;
    return out;
}

// --- section 4 combinatorics -------------------------------------------------

namespace {

int mod2_class_of_cusp(int64_t alpha, int64_t beta) {
    // class of alpha - beta omega mod 2
    return omega_class_mod2(EisensteinInt{alpha, -beta});
}

int64_t chi_exponent_or_minus1(int64_t alpha, int64_t beta, int64_t n) {
    // exponent of omega of chi_n(alpha - beta omega); -1 when undefined
    EisensteinInt arg{alpha, -beta};
    if (std::gcd(arg.norm() % n, n) != 1) return -1;
    CubicCharacter chi(n);
    return chi(arg);
}

std::vector<int64_t> divisors(int64_t n) {
    std::vector<int64_t> d;
    for (int64_t i = 1; i * i <= n; ++i)
        if (n % i == 0) {
            d.push_back(i);
            if (i != n / i) d.push_back(n / i);
        }
    std::sort(d.begin(), d.end());
    return d;
}

mpq_class prod_one_minus_p2(int64_t d) {
    mpq_class r(1);
    for (int64_t p = 2; p * p <= d; ++p)
        if (d % p == 0) {
            while (d % p == 0) d /= p;
            mpq_class t(static_cast<long>(p * p - 1), static_cast<long>(p * p));
            t.canonicalize();
            r *= t;
        }
    if (d > 1) {
        mpq_class t(static_cast<long>(d * d - 1), static_cast<long>(d * d));
        t.canonicalize();
        r *= t;
    }
    return r;
}

}  // namespace

int64_t c_coeff(int64_t alpha, int64_t beta, int64_t d, int64_t n) {
    if (std::gcd(alpha, beta) != 1) throw std::domain_error("c_coeff: alpha, beta must be coprime");
    if (d <= 0 || n % d != 0) throw std::domain_error("c_coeff: d must divide n");
    ConjugateSet cs = enumerate_conjugates(n);
    int i = mod2_class_of_cusp(alpha, beta);
    int64_t count = 0;
    for (const auto& x : cs.B[i])
        if (((x.a % d) * (beta % d) + (x.b % d) * (alpha % d)) % d == 0) ++count;
    return count;
}

int64_t c_coeff_closed(int64_t alpha, int64_t beta, int64_t d, int64_t n) {
    if (std::gcd(alpha, beta) != 1) throw std::domain_error("c_coeff_closed: alpha, beta must be coprime");
    if (d <= 0 || n % d != 0) throw std::domain_error("c_coeff_closed: d must divide n");
    int64_t np = squarefree_kernel(n);
    int64_t delta = std::gcd(n, alpha * alpha + alpha * beta + beta * beta);
    if (d % np == 0) {
        if (std::gcd(d, delta) != 1) return 0;
        int64_t chi = chi_exponent_or_minus1(alpha, beta, n);
        return (chi == 0) ? f_of_n(n) / f_of_n(d) : 0;
    }
    if (std::gcd(d, delta) != 1) return 0;
    return f_of_n(n) / (3 * f_of_n(d));
}

mpq_class C_of(int64_t alpha, int64_t beta, int64_t n) {
    int64_t np = squarefree_kernel(n);
    int64_t delta = std::gcd(n, alpha * alpha + alpha * beta + beta * beta);
    mpq_class total(0);
    for (int64_t d : divisors(n)) {
        if (std::gcd(d, delta) == 1) {
            mpq_class fr(static_cast<long>(f_of_n(n)), static_cast<long>(3 * f_of_n(d)));
            fr.canonicalize();
            total += mpq_class(static_cast<long>(d)) * static_cast<long>(d) * fr *
                     prod_one_minus_p2(d);
        }
    }
    int64_t chi = chi_exponent_or_minus1(alpha, beta, n);
    mpq_class re2;  // 2 Re chi
    if (chi == 0) re2 = 2;
    else if (chi > 0) re2 = -1;
    else re2 = 0;  // undefined symbol: some lambda_i divides the argument
    if (re2 != 0) {
        mpq_class second(0);
        for (int64_t d : divisors(n)) {
            if (d % np != 0) continue;
            second += mpq_class(static_cast<long>(d)) * static_cast<long>(n) *
                      prod_one_minus_p2(d);
        }
        total += mpq_class(1, 3) * re2 * second;
    }
    return total;
}

int64_t order_of_U(int64_t alpha, int64_t beta, int64_t n) {
    if (std::gcd(alpha, beta) != 1) throw std::domain_error("order_of_U: alpha, beta must be coprime");
    int w = (alpha % 3 == 0) ? 1 : ((beta % 3 == 0) ? -1 : 0);
    if (w == 0) return 0;
    mpq_class C = C_of(alpha, beta, n);
    mpq_class val = 2 * w * C;
    if (val.get_den() != 1) throw std::logic_error("order_of_U: non-integral order");
    return static_cast<int64_t>(mpz_get_si(val.get_num().get_mpz_t()));
}

int64_t order_of_U_brute(int64_t alpha, int64_t beta, int64_t n) {
    if (std::gcd(alpha, beta) != 1)
        throw std::domain_error("order_of_U_brute: alpha, beta must be coprime");
    int w = (alpha % 3 == 0) ? 1 : ((beta % 3 == 0) ? -1 : 0);
    if (w == 0) return 0;
    ConjugateSet cs = enumerate_conjugates(n);
    int i = mod2_class_of_cusp(alpha, beta);
    int64_t total = 0;
    for (const auto& x : cs.B[i]) {
        int64_t lam = std::gcd(n, x.b * alpha + x.a * beta);
        total += 2 * w * lam * lam;
    }
    return total;
}

namespace {

// coprime representative of (a, b) mod 3n
std::pair<int64_t, int64_t> coprime_lift(int64_t a, int64_t b, int64_t m) {
    for (int64_t t = 0; t < 4 * m + 4; ++t) {
        int64_t bb = b + m * t;
        if (std::gcd(a, bb) == 1) return {a, bb};
    }
    throw std::logic_error("coprime_lift: no lift found");
}

}  // namespace

mpq_class degree_sum(int64_t n) {
    mpq_class total(0);
    for (int64_t a = 3; a <= 3 * n; a += 3) {
        for (int64_t b = 1; b <= 3 * n; b += 3) {
            if (std::gcd(std::gcd(a, b), n) != 1) continue;
            auto [al, be] = coprime_lift(a, b, 3 * n);
            total += C_of(al, be, n);
        }
    }
    return total;
}

mpq_class degree_expected(int64_t n) {
    // |B_0| * [Gamma(6) : Gamma(6n)] = (f(n)/3) * n^3 * prod_{p|n} (1 - p^-2)
    mpq_class nn(static_cast<long>(n));
    mpq_class third(static_cast<long>(f_of_n(n)), 3);
    third.canonicalize();
    return third * nn * nn * nn * prod_one_minus_p2(n);
}

}  // namespace hg
