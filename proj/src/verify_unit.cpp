#include "heegner/cm.hpp"
#include "heegner/cubic_field.hpp"

#include <cmath>

namespace hg {

UnitIdentityReport verify_unit_identity(int64_t n, mpfr_prec_t prec, int threads) {
    require_admissible_n(n);
    UnitIdentityReport rep;
    rep.n = n;
    rep.f_n = f_of_n(n);
    CubicField K = CubicField::create(n);
    rep.sigma = sigma_divisors(n / K.np());
    rep.h_K = class_number(K);
    UnitCertificate cert = fundamental_unit(K);
    rep.log_u = K.embed_real(cert.u, prec).log();

    NormUResult nu = norm_U(n, prec, threads);
    rep.log_norm = nu.log_norm_K;

    BigFloat log3 = BigFloat(3L, prec).log();
    BigFloat e = (rep.log_norm - log3 * rep.f_n) / rep.log_u;
    double ed = e.to_double();
    double rounded = std::round(ed);
    rep.recovered_exponent = ed;
    rep.exponent_error = std::abs(ed - rounded);
    rep.pass = rep.exponent_error < 1e-8 &&
               static_cast<int64_t>(rounded) == 3 * rep.h_K * rep.sigma;
    return rep;
}

}  // namespace hg
