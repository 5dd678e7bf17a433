#include "replkit/qseries.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "replkit/error.hpp"

namespace replkit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::OutOfWindow: return "OutOfWindow";
        case ErrorKind::IncompatibleScale: return "IncompatibleScale";
        case ErrorKind::NonUnitLeading: return "NonUnitLeading";
        case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::MissingReplicate: return "MissingReplicate";
        case ErrorKind::NonIntegralSolution: return "NonIntegralSolution";
        case ErrorKind::Inconsistent: return "Inconsistent";
        case ErrorKind::Stuck: return "Stuck";
        case ErrorKind::FractionalPowerMismatch: return "FractionalPowerMismatch";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::UnresolvableReplicate: return "UnresolvableReplicate";
        case ErrorKind::UnknownLabel: return "UnknownLabel";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace series {

namespace {

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

std::pair<QSeries, QSeries> common_scale(const QSeries& f, const QSeries& g) {
    if (f.scale() == g.scale()) return {f, g};
    const std::int64_t s = lcm64(f.scale(), g.scale());
    return {f.with_scale(s), g.with_scale(s)};
}

// Effective start for precision bookkeeping: the valuation when the window
// holds a nonzero coefficient, otherwise the end of the window.
std::int64_t leading_index(const QSeries& f) {
    auto v = f.valuation();
    return v ? *v : f.prec();
}

}  // namespace

Int parse_int(const std::string& s) {
    Int v;
    if (s.empty() || v.set_str(s, 10) != 0) {
        throw Error(ErrorKind::ParseError, "not a decimal integer: '" + s + "'");
    }
    return v;
}

QSeries::QSeries() : scale_(1), lo_(0), prec_(1), coeffs_(1) {}

QSeries::QSeries(std::int64_t scale, std::int64_t lo, std::vector<Int> coeffs, std::int64_t prec)
    : scale_(scale), lo_(lo), prec_(prec), coeffs_(std::move(coeffs)) {
    if (scale_ < 1) throw Error(ErrorKind::InvalidArgument, "scale must be positive");
    if (lo_ >= prec_) throw Error(ErrorKind::InvalidArgument, "series window is empty (lo >= prec)");
    if (static_cast<std::int64_t>(coeffs_.size()) != prec_ - lo_) {
        throw Error(ErrorKind::InvalidArgument, "coefficient count does not match prec - lo");
    }
}

QSeries QSeries::from_coefficients(std::int64_t lo, std::vector<Int> coeffs) {
    const auto n = static_cast<std::int64_t>(coeffs.size());
    return QSeries(1, lo, std::move(coeffs), lo + n);
}

QSeries QSeries::monomial(const Int& c, std::int64_t e, std::int64_t prec) {
    if (e >= prec) {
        throw Error(ErrorKind::InvalidArgument, "monomial exponent must lie below its precision");
    }
    std::vector<Int> cs(static_cast<std::size_t>(prec - e));
    cs[0] = c;
    return QSeries(1, e, std::move(cs), prec);
}

QSeries QSeries::constant(const Int& c, std::int64_t prec) { return monomial(c, 0, prec); }

Int QSeries::coeff(std::int64_t num, std::int64_t den) const {
    if (den <= 0) throw Error(ErrorKind::InvalidArgument, "exponent denominator must be positive");
    const Int scaled_num = Int(static_cast<long>(num)) * static_cast<long>(scale_);
    if (scaled_num % static_cast<long>(den) != 0) {
        std::ostringstream os;
        os << "exponent " << num << "/" << den << " is not a multiple of 1/" << scale_;
        throw Error(ErrorKind::IncompatibleScale, os.str());
    }
    const std::int64_t k = num * scale_ / den;
    if (k < lo_ || k >= prec_) {
        std::ostringstream os;
        os << "exponent " << num << "/" << den << " outside window " << describe_window();
        throw Error(ErrorKind::OutOfWindow, os.str());
    }
    return coeffs_[static_cast<std::size_t>(k - lo_)];
}

Int QSeries::at(std::int64_t k) const {
    if (k >= prec_) {
        std::ostringstream os;
        os << "scaled index " << k << " beyond precision " << prec_;
        throw Error(ErrorKind::OutOfWindow, os.str());
    }
    if (k < lo_) return 0;
    return coeffs_[static_cast<std::size_t>(k - lo_)];
}

std::optional<std::int64_t> QSeries::valuation() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (sgn(coeffs_[i]) != 0) return lo_ + static_cast<std::int64_t>(i);
    }
    return std::nullopt;
}

QSeries QSeries::with_scale(std::int64_t new_scale) const {
    if (new_scale < 1 || new_scale % scale_ != 0) {
        throw Error(ErrorKind::IncompatibleScale, "target scale must be a multiple of the current scale");
    }
    const std::int64_t t = new_scale / scale_;
    if (t == 1) return *this;
    std::vector<Int> cs(static_cast<std::size_t>((prec_ - lo_) * t));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) cs[i * static_cast<std::size_t>(t)] = coeffs_[i];
    return QSeries(new_scale, lo_ * t, std::move(cs), prec_ * t);
}

QSeries QSeries::reduced() const {
    std::int64_t g = std::gcd(scale_, std::gcd(prec_, lo_));
    for (std::size_t i = 0; i < coeffs_.size() && g > 1; ++i) {
        if (sgn(coeffs_[i]) != 0) g = std::gcd(g, lo_ + static_cast<std::int64_t>(i));
    }
    if (g <= 1) return *this;
    std::vector<Int> cs(static_cast<std::size_t>((prec_ - lo_) / g));
    for (std::size_t j = 0; j < cs.size(); ++j) cs[j] = coeffs_[j * static_cast<std::size_t>(g)];
    return QSeries(scale_ / g, lo_ / g, std::move(cs), prec_ / g);
}

QSeries QSeries::truncated(std::int64_t new_prec) const {
    if (new_prec > prec_) {
        throw Error(ErrorKind::InsufficientPrecision, "cannot extend a series by truncation");
    }
    if (new_prec <= lo_) {
        return QSeries(scale_, new_prec - 1, std::vector<Int>(1), new_prec);
    }
    std::vector<Int> cs(coeffs_.begin(), coeffs_.begin() + (new_prec - lo_));
    return QSeries(scale_, lo_, std::move(cs), new_prec);
}

std::string QSeries::describe_window() const {
    std::ostringstream os;
    auto frac = [&](std::int64_t k) {
        const std::int64_t g = std::gcd(k < 0 ? -k : k, scale_);
        const std::int64_t d = scale_ / (g == 0 ? scale_ : g);
        if (k == 0) return std::string("0");
        std::string s = std::to_string(k / (g == 0 ? 1 : g));
        if (d != 1) s += "/" + std::to_string(d);
        return s;
    };
    os << "[" << frac(lo_) << ", " << frac(prec_) << ")";
    return os.str();
}

QSeries QSeries::operator-() const {
    std::vector<Int> cs(coeffs_.size());
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = -coeffs_[i];
    return QSeries(scale_, lo_, std::move(cs), prec_);
}

QSeries add(const QSeries& f0, const QSeries& g0) {
    auto [f, g] = common_scale(f0, g0);
    const std::int64_t lo = std::min(f.lo(), g.lo());
    const std::int64_t prec = std::min(f.prec(), g.prec());
    if (prec <= lo) return QSeries(f.scale(), prec - 1, std::vector<Int>(1), prec);
    std::vector<Int> cs(static_cast<std::size_t>(prec - lo));
    for (std::int64_t k = lo; k < prec; ++k) cs[static_cast<std::size_t>(k - lo)] = f.at(k) + g.at(k);
    return QSeries(f.scale(), lo, std::move(cs), prec);
}

QSeries sub(const QSeries& f, const QSeries& g) { return add(f, -g); }

QSeries scalar_mul(const Int& c, const QSeries& f) {
    std::vector<Int> cs(f.coeffs().size());
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = c * f.coeffs()[i];
    return QSeries(f.scale(), f.lo(), std::move(cs), f.prec());
}

QSeries mul(const QSeries& f0, const QSeries& g0) {
    auto [f, g] = common_scale(f0, g0);
    const std::int64_t vf = leading_index(f);
    const std::int64_t vg = leading_index(g);
    const std::int64_t prec = std::min(f.prec() + vg, g.prec() + vf);
    const std::int64_t lo = vf + vg;
    if (prec <= lo) return QSeries(f.scale(), prec - 1, std::vector<Int>(1), prec);

    const std::int64_t n = prec - lo;
    const Int* fc = f.coeffs().data() + (vf - f.lo());
    const Int* gc = g.coeffs().data() + (vg - g.lo());
    const std::int64_t nf = std::min<std::int64_t>(n, f.prec() - vf);
    const std::int64_t ng = std::min<std::int64_t>(n, g.prec() - vg);

    std::vector<Int> cs(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < nf; ++i) {
        if (sgn(fc[i]) == 0) continue;
        const std::int64_t jmax = std::min(ng, n - i);
        mpz_srcptr a = fc[i].get_mpz_t();
        for (std::int64_t j = 0; j < jmax; ++j) {
            mpz_addmul(cs[static_cast<std::size_t>(i + j)].get_mpz_t(), a, gc[j].get_mpz_t());
        }
    }
    return QSeries(f.scale(), lo, std::move(cs), prec);
}

QSeries div_exact(const QSeries& f0, const QSeries& g0) {
    auto [f, g] = common_scale(f0, g0);
    const auto vg = g.valuation();
    if (!vg) throw Error(ErrorKind::NonUnitLeading, "divisor vanishes on its whole window");
    const Int u = g.at(*vg);
    if (abs(u) != 1) {
        throw Error(ErrorKind::NonUnitLeading, "divisor leading coefficient " + u.get_str() + " is not a unit");
    }
    // Inverse of g / q^vg as a power series, exact to relative order R.
    const std::int64_t R = g.prec() - *vg;
    const Int* gc = g.coeffs().data() + (*vg - g.lo());
    std::vector<Int> w(static_cast<std::size_t>(R));
    w[0] = u;
    Int acc;
    for (std::int64_t i = 1; i < R; ++i) {
        acc = 0;
        for (std::int64_t j = 1; j <= i; ++j) {
            mpz_addmul(acc.get_mpz_t(), gc[j].get_mpz_t(), w[static_cast<std::size_t>(i - j)].get_mpz_t());
        }
        w[static_cast<std::size_t>(i)] = -u * acc;
    }
    QSeries inv(f.scale(), -*vg, std::move(w), -*vg + R);
    return mul(f, inv);
}

QSeries pow(const QSeries& f, unsigned k) {
    const std::int64_t v = leading_index(f);
    const std::int64_t rel = std::max<std::int64_t>(1, f.prec() - v);
    std::vector<Int> one(static_cast<std::size_t>(rel));
    one[0] = 1;
    QSeries result(f.scale(), 0, std::move(one), rel);
    if (k == 0) return result;
    QSeries base = f;
    bool first = true;
    while (k > 0) {
        if (k & 1u) {
            result = first ? base : mul(result, base);
            first = false;
        }
        k >>= 1u;
        if (k > 0) base = mul(base, base);
    }
    return result;
}

QSeries rescale_exponents(const QSeries& f, std::int64_t num, std::int64_t den) {
    if (num <= 0 || den <= 0) throw Error(ErrorKind::InvalidArgument, "rescale factor must be positive");
    const std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    const std::int64_t n = f.prec() - f.lo();
    std::vector<Int> cs(static_cast<std::size_t>(n * num));
    for (std::int64_t i = 0; i < n; ++i) cs[static_cast<std::size_t>(i * num)] = f.coeffs()[static_cast<std::size_t>(i)];
    return QSeries(f.scale() * den, f.lo() * num, std::move(cs), f.prec() * num).reduced();
}

Agreement compare(const QSeries& f0, const QSeries& g0) {
    auto [f, g] = common_scale(f0, g0);
    Agreement a;
    a.scale = f.scale();
    a.lo = std::min(f.lo(), g.lo());
    a.hi = std::min(f.prec(), g.prec()) - 1;
    for (std::int64_t k = a.lo; k <= a.hi; ++k) {
        if (f.at(k) != g.at(k)) {
            a.first_mismatch = k;
            break;
        }
    }
    return a;
}

bool agree(const QSeries& f, const QSeries& g) {
    const Agreement a = compare(f, g);
    return a.hi >= a.lo && a.equal();
}

nlohmann::json to_json(const QSeries& f) {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : f.coeffs()) cs.push_back(c.get_str());
    return nlohmann::json{{"scale", f.scale()}, {"lo", f.lo()}, {"prec", f.prec()}, {"coeffs", cs}};
}

QSeries qseries_from_json(const nlohmann::json& j) {
    try {
        std::vector<Int> cs;
        for (const auto& c : j.at("coeffs")) cs.push_back(parse_int(c.get<std::string>()));
        return QSeries(j.at("scale").get<std::int64_t>(), j.at("lo").get<std::int64_t>(), std::move(cs),
                       j.at("prec").get<std::int64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("malformed series JSON: ") + e.what());
    }
}

}  // namespace series
}  // namespace replkit
