#include "replkit/faber.hpp"

#include <string>

#include "replkit/error.hpp"

namespace replkit::faber {

using series::QSeries;

void require_normalized(const QSeries& f) {
    const QSeries r = f.reduced();
    if (r.scale() != 1) throw Error(ErrorKind::NotNormalized, "series is not an ordinary q-expansion");
    auto v = r.valuation();
    if (!v || *v != -1 || r.at(-1) != 1) {
        throw Error(ErrorKind::NotNormalized, "series does not start with q^-1");
    }
}

FaberPolynomial faber_poly(const QSeries& f0, unsigned n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "Faber polynomial degree must be positive");
    require_normalized(f0);
    const QSeries f = f0.reduced();
    if (f.prec() < static_cast<std::int64_t>(n)) {
        throw Error(ErrorKind::InsufficientPrecision,
                    "need the series through q^" + std::to_string(n - 1) + " for degree " + std::to_string(n));
    }

    std::vector<QSeries> powers(n + 1);
    powers[0] = series::pow(f, 0);
    for (unsigned k = 1; k <= n; ++k) powers[k] = k == 1 ? f : series::mul(powers[k - 1], f);

    FaberPolynomial p;
    p.n = n;
    p.c.assign(n, 0);
    QSeries acc = powers[n];
    // Eliminate exponents -(n-1) .. 0 in increasing order; f^k is the only
    // power still able to touch exponent -k.
    for (std::int64_t e = -static_cast<std::int64_t>(n) + 1; e <= 0; ++e) {
        const unsigned k = static_cast<unsigned>(-e);
        const Int residue = acc.at(e);
        if (sgn(residue) == 0) continue;
        p.c[k] = -residue;
        acc = series::add(acc, series::scalar_mul(p.c[k], powers[k]));
    }
    p.certified_through = acc.prec() - 1;
    return p;
}

QSeries faber_apply(const FaberPolynomial& p, const QSeries& f0) {
    const QSeries f = f0.reduced();
    // Horner: (((f + c[n-1]) f + c[n-2]) f + ...) + c[0]
    QSeries acc = f;
    for (unsigned k = p.n; k-- > 0;) {
        if (sgn(p.c[k]) != 0) {
            if (acc.scale() != 1 || acc.prec() <= 0) {
                throw Error(ErrorKind::InsufficientPrecision, "series too short to evaluate the polynomial");
            }
            acc = series::add(acc, QSeries::constant(p.c[k], acc.prec()));
        }
        if (k > 0) acc = series::mul(acc, f);
    }
    return acc;
}

QSeries faber_apply_powers(const FaberPolynomial& p, const std::vector<QSeries>& powers) {
    if (powers.size() <= p.n) throw Error(ErrorKind::InvalidArgument, "not enough powers supplied");
    QSeries acc = powers[p.n];
    for (unsigned k = 0; k < p.n; ++k) {
        if (sgn(p.c[k]) != 0) acc = series::add(acc, series::scalar_mul(p.c[k], powers[k]));
    }
    return acc;
}

nlohmann::json to_json(const FaberPolynomial& p) {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : p.c) cs.push_back(c.get_str());
    return nlohmann::json{{"n", p.n}, {"c", cs}};
}

}  // namespace replkit::faber
