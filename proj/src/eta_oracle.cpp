#include "replkit/eta_oracle.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

#include "replkit/error.hpp"

namespace replkit::oracle {

using series::QSeries;

namespace {

// prod_{k>=1} (1 - x^k) mod x^D from Euler's pentagonal number theorem.
std::vector<Int> euler_product(std::int64_t D) {
    std::vector<Int> p(static_cast<std::size_t>(D));
    for (std::int64_t j = 0;; ++j) {
        const std::int64_t a = j * (3 * j - 1) / 2;
        const std::int64_t b = j * (3 * j + 1) / 2;
        if (a >= D) break;
        const int s = (j % 2 == 0) ? 1 : -1;
        p[static_cast<std::size_t>(a)] += s;
        if (j > 0 && b < D) p[static_cast<std::size_t>(b)] += s;
    }
    return p;
}

// prod_k (1 - q^(mk)) as a power series known to D terms.
QSeries euler_at(std::int64_t m, std::int64_t D) {
    const std::int64_t inner = (D + m - 1) / m;
    const std::vector<Int> base = euler_product(inner);
    std::vector<Int> out(static_cast<std::size_t>(D));
    for (std::int64_t i = 0; i < inner && i * m < D; ++i) out[static_cast<std::size_t>(i * m)] = base[static_cast<std::size_t>(i)];
    return QSeries(1, 0, std::move(out), D);
}

QSeries power_series_one(std::int64_t D) { return QSeries::constant(1, D); }

// prod (1 - q^(mk))^e over all factors, to D terms.
QSeries product_part(const EtaQuotientSpec& spec, std::int64_t D) {
    QSeries acc = power_series_one(D);
    for (const auto& f : spec.factors) {
        if (f.m <= 0) throw Error(ErrorKind::InvalidArgument, "eta factor argument must be positive");
        if (f.e == 0) continue;
        const QSeries base = euler_at(f.m, D);
        const unsigned k = static_cast<unsigned>(f.e < 0 ? -f.e : f.e);
        const QSeries pw = series::pow(base, k).truncated(D);
        acc = f.e > 0 ? series::mul(acc, pw) : series::div_exact(acc, pw);
        acc = acc.truncated(D);
    }
    return acc;
}

std::int64_t leading_numerator(const EtaQuotientSpec& spec) {
    std::int64_t s = 0;
    for (const auto& f : spec.factors) s += f.m * f.e;
    return s;  // leading exponent is s / 24
}

}  // namespace

EtaQuotientSpec parse_eta_spec(const std::string& text, const Int& shift) {
    EtaQuotientSpec spec;
    spec.shift = shift;
    std::string cleaned;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) cleaned.push_back(ch);
    }
    if (cleaned.empty() || cleaned == "1" ) {
        if (cleaned == "1") spec.factors.push_back({1, 1});
        return spec;
    }
    int sign = 1;
    std::size_t i = 0;
    auto read_int = [&](bool allow_sign) -> std::int64_t {
        std::size_t start = i;
        if (allow_sign && i < cleaned.size() && (cleaned[i] == '-' || cleaned[i] == '+')) ++i;
        while (i < cleaned.size() && std::isdigit(static_cast<unsigned char>(cleaned[i]))) ++i;
        if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(cleaned[start])))) {
            throw Error(ErrorKind::ParseError, "bad eta quotient '" + text + "' near position " + std::to_string(start));
        }
        return std::stoll(cleaned.substr(start, i - start));
    };
    while (i < cleaned.size()) {
        const std::int64_t m = read_int(false);
        std::int64_t e = 1;
        if (i < cleaned.size() && cleaned[i] == '^') {
            ++i;
            e = read_int(true);
        }
        spec.factors.push_back({m, sign * e});
        if (i == cleaned.size()) break;
        const char sep = cleaned[i++];
        if (sep == '/') {
            sign = -1;
        } else if (sep != '*' && sep != '.') {
            throw Error(ErrorKind::ParseError, std::string("unexpected '") + sep + "' in eta quotient '" + text + "'");
        }
        if (i == cleaned.size()) throw Error(ErrorKind::ParseError, "eta quotient ends with a separator");
    }
    return spec;
}

std::string format_eta_spec(const EtaQuotientSpec& spec) {
    std::ostringstream os;
    bool first = true;
    for (const auto& f : spec.factors) {
        if (!first) os << '*';
        first = false;
        os << f.m << '^' << f.e;
    }
    if (first) os << "1";
    return os.str();
}

QSeries eta_expansion(std::int64_t order) {
    EtaQuotientSpec spec;
    spec.factors.push_back({1, 1});
    return eta_quotient(spec, order);
}

QSeries eta_quotient(const EtaQuotientSpec& spec, std::int64_t order, std::int64_t required_scale) {
    const std::int64_t num = leading_numerator(spec);
    const std::int64_t g = std::gcd(num < 0 ? -num : num, std::int64_t{24});
    const std::int64_t scale = num == 0 ? 1 : 24 / g;
    const std::int64_t lead = num == 0 ? 0 : num / g;  // leading exponent lead / scale
    if (required_scale > 0 && required_scale % scale != 0) {
        std::ostringstream os;
        os << "leading power q^(" << num << "/24) is not a multiple of 1/" << required_scale;
        throw Error(ErrorKind::FractionalPowerMismatch, os.str());
    }
    // Product terms q^i are needed while lead/scale + i <= order.
    const std::int64_t target = (order + 1) * scale;
    std::int64_t D = (target - lead + scale - 1) / scale;
    if (D < 1) D = 1;
    const QSeries part = product_part(spec, D);
    std::vector<Int> cs(static_cast<std::size_t>(D * scale));
    for (std::int64_t i = 0; i < D; ++i) cs[static_cast<std::size_t>(i * scale)] = part.coeffs()[static_cast<std::size_t>(i)];
    QSeries out(scale, lead, std::move(cs), lead + D * scale);
    if (out.prec() > target && target > out.lo()) out = out.truncated(target);
    if (sgn(spec.shift) != 0) {
        if (out.prec() <= 0) throw Error(ErrorKind::InsufficientPrecision, "order too small to carry the shift");
        std::vector<Int> c0(static_cast<std::size_t>(out.prec()));
        c0[0] = spec.shift;
        out = series::add(out, QSeries(scale, 0, std::move(c0), out.prec()));
    }
    return out.reduced();
}

QSeries eta_fricke_sum(const EtaQuotientSpec& spec, std::int64_t level, std::int64_t order) {
    if (level <= 0) throw Error(ErrorKind::InvalidArgument, "level must be positive");
    EtaQuotientSpec image;
    Int numer = 1;
    Int denom = 1;
    std::int64_t weight = 0;
    for (const auto& f : spec.factors) {
        if (level % f.m != 0) {
            throw Error(ErrorKind::InvalidArgument, "eta factor " + std::to_string(f.m) + " does not divide the level");
        }
        const std::int64_t c = level / f.m;
        image.factors.push_back({c, f.e});
        weight += f.e;
        Int p;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(c), static_cast<unsigned long>(f.e < 0 ? -f.e : f.e));
        (f.e > 0 ? numer : denom) *= p;
    }
    if (weight != 0) throw Error(ErrorKind::InvalidArgument, "eta quotient must have weight zero");
    if (numer % denom != 0) throw Error(ErrorKind::NonIntegralSolution, "Fricke constant is not an integer");
    const Int square = numer / denom;
    Int root;
    mpz_sqrt(root.get_mpz_t(), square.get_mpz_t());
    if (root * root != square) throw Error(ErrorKind::NonIntegralSolution, "Fricke constant is not an integer");

    EtaQuotientSpec base = spec;
    base.shift = 0;
    const QSeries t = eta_quotient(base, order, 1);
    const QSeries tw = series::scalar_mul(root, eta_quotient(image, order, 1));
    QSeries sum = series::add(t, tw);
    if (sgn(spec.shift) != 0) sum = series::add(sum, QSeries::constant(spec.shift, sum.prec()));
    return sum;
}

Int divisor_sigma(unsigned k, std::int64_t n) {
    if (n <= 0) throw Error(ErrorKind::InvalidArgument, "sigma needs a positive argument");
    Int total = 0;
    Int p;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), k);
        total += p;
        const std::int64_t e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(e), k);
            total += p;
        }
    }
    return total;
}

QSeries eisenstein_e4(std::int64_t order) {
    std::vector<Int> sig(static_cast<std::size_t>(order + 1));
    for (std::int64_t n = 1; n <= order; ++n) sig[static_cast<std::size_t>(n)] = divisor_sigma(3, n);
    // sigma_3 is multiplicative; a broken divisor sum shows up here first.
    for (std::int64_t a = 2; a <= 12; ++a) {
        for (std::int64_t b = a + 1; b <= 12 && a * b <= order; ++b) {
            if (std::gcd(a, b) == 1 && sig[static_cast<std::size_t>(a * b)] != sig[static_cast<std::size_t>(a)] * sig[static_cast<std::size_t>(b)]) {
                throw Error(ErrorKind::Inconsistent, "sigma_3 failed multiplicativity");
            }
        }
    }
    std::vector<Int> cs(static_cast<std::size_t>(order + 1));
    cs[0] = 1;
    for (std::int64_t n = 1; n <= order; ++n) cs[static_cast<std::size_t>(n)] = 240 * sig[static_cast<std::size_t>(n)];
    return QSeries(1, 0, std::move(cs), order + 1);
}

QSeries delta(std::int64_t order) {
    EtaQuotientSpec spec;
    spec.factors.push_back({1, 24});
    return eta_quotient(spec, order, 1);
}

QSeries j_series(std::int64_t order) {
    const std::int64_t D = order + 2;  // q-power-series terms needed on both sides
    const QSeries e4 = eisenstein_e4(D - 1);
    const QSeries e4cubed = series::pow(e4, 3).truncated(D);
    const QSeries delta_over_q = series::pow(euler_at(1, D), 24).truncated(D);
    const QSeries ratio = series::div_exact(e4cubed, delta_over_q);  // q * j
    std::vector<Int> cs(ratio.coeffs().begin(), ratio.coeffs().begin() + (order + 2));
    return QSeries(1, -1, std::move(cs), order + 1);
}

}  // namespace replkit::oracle
