#ifndef REPLKIT_ETA_ORACLE_HPP
#define REPLKIT_ETA_ORACLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "replkit/qseries.hpp"

namespace replkit::oracle {

struct EtaFactor {
    std::int64_t m = 1;  // eta(m tau)
    std::int64_t e = 0;  // raised to e
};

/// prod eta(m tau)^e, plus an additive constant.
struct EtaQuotientSpec {
    std::vector<EtaFactor> factors;
    Int shift = 0;
};

/// Parses "1^24/2^24" style products. Factors are `m^e` (or bare `m` for
/// e = 1) joined by `*` or `.`; everything after a `/` is a denominator.
EtaQuotientSpec parse_eta_spec(const std::string& text, const Int& shift = 0);
std::string format_eta_spec(const EtaQuotientSpec& spec);

/// q^(1/24) prod_{k>=1} (1 - q^k), scale 24, every exponent below order + 1 exact.
series::QSeries eta_expansion(std::int64_t order);

/// Exact expansion of the quotient through q^order. When `required_scale`
/// is positive the leading power must be a multiple of 1/required_scale,
/// otherwise FractionalPowerMismatch is thrown.
series::QSeries eta_quotient(const EtaQuotientSpec& spec, std::int64_t order, std::int64_t required_scale = 0);

/// t + t|W_N + shift for t = prod eta(m tau)^e (weight zero, every m | N).
/// t|W_N is again an eta quotient, with m -> N/m and the constant
/// prod (N/m)^(e/2), which must be an integer.
series::QSeries eta_fricke_sum(const EtaQuotientSpec& spec, std::int64_t level, std::int64_t order);

/// sigma_k(n) for n >= 1.
Int divisor_sigma(unsigned k, std::int64_t n);

/// 1 + 240 sum sigma_3(n) q^n through q^order.
series::QSeries eisenstein_e4(std::int64_t order);

/// Delta = q prod (1 - q^n)^24 through q^order.
series::QSeries delta(std::int64_t order);

/// j = E4^3 / Delta through q^order (constant term 744).
series::QSeries j_series(std::int64_t order);

}  // namespace replkit::oracle

#endif
