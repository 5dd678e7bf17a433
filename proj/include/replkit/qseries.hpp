#ifndef REPLKIT_QSERIES_HPP
#define REPLKIT_QSERIES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace replkit {

using Int = mpz_class;

namespace series {

/// A truncated Puiseux series in q with exact integer coefficients.
///
/// Exponents are `k / scale` for integers k. The stored window covers
/// `lo <= k < prec`; `coeffs()[i]` is the coefficient of q^((lo + i) / scale).
/// Every coefficient with k < prec is exact. Nothing is claimed at or
/// beyond `prec`, and no operation ever reports a coefficient there.
class QSeries {
public:
    /// The series 0 known below q^(prec/scale); the window is [prec-1, prec).
    QSeries();
    QSeries(std::int64_t scale, std::int64_t lo, std::vector<Int> coeffs, std::int64_t prec);

    /// Integer exponents starting at `lo`, exact up to lo + coeffs.size().
    static QSeries from_coefficients(std::int64_t lo, std::vector<Int> coeffs);
    /// c * q^e with e an integer, known below q^prec.
    static QSeries monomial(const Int& c, std::int64_t e, std::int64_t prec);
    static QSeries constant(const Int& c, std::int64_t prec);

    std::int64_t scale() const { return scale_; }
    std::int64_t lo() const { return lo_; }
    std::int64_t prec() const { return prec_; }
    const std::vector<Int>& coeffs() const { return coeffs_; }

    /// Exact coefficient of q^(num/den). Throws IncompatibleScale when the
    /// exponent is not a multiple of 1/scale and OutOfWindow outside [lo, prec).
    Int coeff(std::int64_t num, std::int64_t den = 1) const;
    /// Coefficient at scaled index k, with zero below lo. Requires k < prec.
    Int at(std::int64_t k) const;

    /// Scaled index of the first nonzero coefficient, if any.
    std::optional<std::int64_t> valuation() const;

    /// Same series written over the finer scale `new_scale` (a multiple of scale()).
    QSeries with_scale(std::int64_t new_scale) const;
    /// Coarsest equivalent representation.
    QSeries reduced() const;
    /// Drop everything at and beyond scaled index `new_prec` (must not exceed prec()).
    QSeries truncated(std::int64_t new_prec) const;

    /// Exponent bounds as rationals num/scale (largest certified exponent is (prec-1)/scale).
    std::string describe_window() const;

    QSeries operator-() const;

private:
    std::int64_t scale_;
    std::int64_t lo_;
    std::int64_t prec_;
    std::vector<Int> coeffs_;
};

QSeries add(const QSeries& f, const QSeries& g);
QSeries sub(const QSeries& f, const QSeries& g);
QSeries mul(const QSeries& f, const QSeries& g);
QSeries scalar_mul(const Int& c, const QSeries& f);
QSeries div_exact(const QSeries& f, const QSeries& g);
QSeries pow(const QSeries& f, unsigned k);
/// tau -> r*tau, i.e. q -> q^r, for r = num/den > 0.
QSeries rescale_exponents(const QSeries& f, std::int64_t num, std::int64_t den = 1);

inline QSeries operator+(const QSeries& f, const QSeries& g) { return add(f, g); }
inline QSeries operator-(const QSeries& f, const QSeries& g) { return sub(f, g); }
inline QSeries operator*(const QSeries& f, const QSeries& g) { return mul(f, g); }

/// Result of comparing two series on the intersection of their windows,
/// written over their common scale.
struct Agreement {
    std::int64_t scale = 1;
    std::int64_t lo = 0;    // first scaled index compared
    std::int64_t hi = -1;   // last scaled index compared (hi < lo when empty)
    std::optional<std::int64_t> first_mismatch;
    bool equal() const { return !first_mismatch.has_value(); }
};

Agreement compare(const QSeries& f, const QSeries& g);
/// True iff f and g agree on their shared window (and the window is nonempty).
bool agree(const QSeries& f, const QSeries& g);

nlohmann::json to_json(const QSeries& f);
QSeries qseries_from_json(const nlohmann::json& j);

Int parse_int(const std::string& s);

}  // namespace series
}  // namespace replkit

#endif
