#ifndef REPLKIT_TESTS_NAIVE_SERIES_HPP
#define REPLKIT_TESTS_NAIVE_SERIES_HPP

// Sparse Laurent arithmetic used only as an oracle in tests. Everything is
// written from the definitions with no shared code paths: std::map storage,
// schoolbook loops, long division, trial-division divisor sums.

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "replkit/qseries.hpp"

namespace naive {

using Int = mpz_class;

// Coefficients of q^k, exact for k < bound; absent keys are zero and `lo`
// is the first nonzero exponent (bound when there is none).
struct Laurent {
    std::map<std::int64_t, Int> c;
    std::int64_t lo = 0;
    std::int64_t bound = 1;

    Int at(std::int64_t k) const {
        if (k >= bound) throw std::out_of_range("naive coefficient beyond bound");
        auto it = c.find(k);
        return it == c.end() ? Int(0) : it->second;
    }
};

inline Laurent from(const replkit::series::QSeries& f) {
    if (f.scale() != 1) throw std::invalid_argument("naive oracle handles scale 1 only");
    Laurent out;
    out.bound = f.prec();
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (f.coeffs()[i] != 0) out.c[f.lo() + static_cast<std::int64_t>(i)] = f.coeffs()[i];
    }
    out.lo = out.c.empty() ? out.bound : out.c.begin()->first;
    return out;
}

inline Laurent add(const Laurent& a, const Laurent& b) {
    Laurent out;
    out.lo = std::min(a.lo, b.lo);
    out.bound = std::min(a.bound, b.bound);
    for (const auto* s : {&a, &b}) {
        for (const auto& [k, v] : s->c) {
            if (k < out.bound) out.c[k] += v;
        }
    }
    return out;
}

inline Laurent mul(const Laurent& a, const Laurent& b) {
    Laurent out;
    out.lo = a.lo + b.lo;
    out.bound = std::min(a.bound + b.lo, b.bound + a.lo);
    for (const auto& [i, x] : a.c) {
        for (const auto& [j, y] : b.c) {
            if (i + j < out.bound) out.c[i + j] += x * y;
        }
    }
    return out;
}

// sum_{d | n} d^k by trial division.
inline Int sigma(unsigned k, std::int64_t n) {
    Int s = 0;
    for (std::int64_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        Int p = 1;
        for (unsigned i = 0; i < k; ++i) p *= d;
        s += p;
    }
    return s;
}

// Power series 1 + c * sum sigma_k(n) q^n, exact below `bound`.
inline Laurent eisenstein(const Int& c, unsigned k, std::int64_t bound) {
    Laurent e;
    e.lo = 0;
    e.bound = bound;
    e.c[0] = 1;
    for (std::int64_t n = 1; n < bound; ++n) e.c[n] = c * sigma(k, n);
    return e;
}

// Long division of a by b, where b's lowest term has coefficient `lead`
// and every quotient coefficient must come out integral.
inline Laurent divide(const Laurent& a, const Laurent& b, std::int64_t bound) {
    const std::int64_t vb = b.c.begin()->first;
    const Int lead = b.c.begin()->second;
    Laurent rem = a;
    Laurent q;
    q.lo = a.lo - vb;
    q.bound = bound;
    for (std::int64_t k = q.lo; k < bound; ++k) {
        const Int r = rem.at(k + vb);
        if (r == 0) continue;
        if (r % lead != 0) throw std::domain_error("naive division is not integral");
        const Int t = r / lead;
        q.c[k] = t;
        for (const auto& [j, y] : b.c) rem.c[k + j] -= t * y;
    }
    return q;
}

// j = E4^3 / ((E4^3 - E6^2) / 1728), exact for exponents below `bound`.
inline Laurent j_invariant(std::int64_t bound) {
    const std::int64_t pb = bound + 2;
    const Laurent e4 = eisenstein(240, 3, pb);
    const Laurent e6 = eisenstein(-504, 5, pb);
    const Laurent e4c = mul(mul(e4, e4), e4);
    const Laurent e6s = mul(e6, e6);
    Laurent delta;
    delta.lo = 1;
    delta.bound = pb;
    for (std::int64_t k = 1; k < pb; ++k) {
        const Int d = e4c.at(k) - e6s.at(k);
        if (d % 1728 != 0) throw std::domain_error("E4^3 - E6^2 not divisible by 1728");
        if (d != 0) delta.c[k] = d / 1728;
    }
    return divide(e4c, delta, bound);
}

// prod_{n >= 1} (1 - q^(m n))^e as a power series below `bound`, built one
// binomial factor at a time (multiplying by 1 - q^t or by 1/(1 - q^t)).
inline Laurent eta_product_part(const std::vector<std::pair<std::int64_t, std::int64_t>>& factors,
                                std::int64_t bound) {
    std::vector<Int> p(static_cast<std::size_t>(bound));
    p[0] = 1;
    for (const auto& [m, e] : factors) {
        for (std::int64_t t = m; t < bound; t += m) {
            for (std::int64_t rep = 0; rep < (e < 0 ? -e : e); ++rep) {
                if (e > 0) {
                    for (std::int64_t k = bound - 1; k >= t; --k) p[k] -= p[k - t];
                } else {
                    for (std::int64_t k = t; k < bound; ++k) p[k] += p[k - t];
                }
            }
        }
    }
    Laurent out;
    out.lo = 0;
    out.bound = bound;
    for (std::int64_t k = 0; k < bound; ++k) {
        if (p[k] != 0) out.c[k] = p[k];
    }
    return out;
}

}  // namespace naive

#endif
