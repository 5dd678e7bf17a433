#ifndef REPLKIT_FABER_HPP
#define REPLKIT_FABER_HPP

#include <cstdint>
#include <vector>

#include "replkit/qseries.hpp"

namespace replkit::faber {

/// Monic polynomial x^n + c[n-1] x^(n-1) + ... + c[0].
struct FaberPolynomial {
    unsigned n = 1;
    std::vector<Int> c;  // c[0] .. c[n-1]; the leading 1 is implicit
    /// Highest exponent through which P(f) was known when the polynomial was
    /// built from f; the vanishing of exponents -n+1 .. 0 is certified.
    std::int64_t certified_through = 0;

    bool operator==(const FaberPolynomial& o) const { return n == o.n && c == o.c; }
};

/// The unique monic degree-n polynomial P with P(f) = q^-n + O(q).
///
/// f must be normalized: scale 1, leading term exactly q^-1. A constant term
/// is allowed. Needs f through exponent n-1 (prec >= n); otherwise the
/// constant coefficient cannot be certified.
FaberPolynomial faber_poly(const series::QSeries& f, unsigned n);

/// Horner evaluation of p at f.
series::QSeries faber_apply(const FaberPolynomial& p, const series::QSeries& f);

/// Evaluation by summing precomputed powers; powers[k] must hold f^k.
series::QSeries faber_apply_powers(const FaberPolynomial& p, const std::vector<series::QSeries>& powers);

/// Throws NotNormalized unless f = q^-1 + (terms of exponent >= 0) at scale 1.
void require_normalized(const series::QSeries& f);

nlohmann::json to_json(const FaberPolynomial& p);

}  // namespace replkit::faber

#endif
