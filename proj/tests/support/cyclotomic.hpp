#ifndef REPLKIT_TESTS_CYCLOTOMIC_HPP
#define REPLKIT_TESTS_CYCLOTOMIC_HPP

// Brute-force evaluation of sum_{ad = n, 0 <= b < d} f^(a)((a tau + b) / d)
// that keeps every root of unity: each coefficient lives in Z[x] / Phi_d(x)
// with x = exp(2 pi i / d), and only the fully reduced sum is read back.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "replkit/replication.hpp"

namespace cyclo {

using Int = mpz_class;
using Poly = std::vector<Int>;  // coefficient of x^i at index i

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of a modulo the monic polynomial m.
inline Poly reduce(Poly a, const Poly& m) {
    const std::size_t dm = m.size() - 1;
    trim(a);
    while (a.size() > dm) {
        const Int t = a.back();
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] -= t * m[i];
        trim(a);
    }
    return a;
}

// Exact quotient of a by the monic polynomial m.
inline Poly divide(Poly a, const Poly& m) {
    const std::size_t dm = m.size() - 1;
    trim(a);
    if (a.size() < m.size()) return {};
    Poly q(a.size() - dm);
    for (std::size_t k = q.size(); k-- > 0;) {
        const Int t = a[k + dm];
        q[k] = t;
        for (std::size_t i = 0; i <= dm; ++i) a[k + i] -= t * m[i];
    }
    trim(a);
    if (!a.empty()) throw std::logic_error("cyclotomic division left a remainder");
    return q;
}

// Phi_d from x^d - 1 = prod_{e | d} Phi_e.
inline Poly cyclotomic(std::int64_t d) {
    static std::map<std::int64_t, Poly> memo;
    auto it = memo.find(d);
    if (it != memo.end()) return it->second;
    Poly p(static_cast<std::size_t>(d + 1));
    p[0] = -1;
    p[static_cast<std::size_t>(d)] = 1;
    for (std::int64_t e = 1; e < d; ++e) {
        if (d % e == 0) p = divide(p, cyclotomic(e));
    }
    memo[d] = p;
    return p;
}

// Integer value of an element of Z[x]/Phi_d, or throws if it is not rational.
inline Int as_integer(const Poly& p) {
    for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i] != 0) throw std::logic_error("cyclotomic sum is not an integer");
    }
    return p.empty() ? Int(0) : p[0];
}

// Exponent -> coefficient for every exponent below the guaranteed bound,
// where the bound for f^(a) known below q^P is a * ceil(P / d).
struct Result {
    std::map<std::int64_t, Int> coeffs;
    std::int64_t bound = 0;
};

inline Result twisted_sum(const replkit::replication::ReplicatePack& pack, unsigned n) {
    Result out;
    bool first = true;
    std::map<std::int64_t, Int> acc;
    for (std::int64_t a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        const std::int64_t d = n / a;
        const auto& f = pack.at(static_cast<unsigned>(a)).series;
        const Poly phi = cyclotomic(d);
        const std::int64_t bound = a * ((f.prec() + d - 1) / d);
        out.bound = first ? bound : std::min(out.bound, bound);
        first = false;
        for (std::int64_t m = f.lo(); m < f.prec(); ++m) {
            const Int c = f.at(m);
            Poly sum(static_cast<std::size_t>(d));
            for (std::int64_t b = 0; b < d; ++b) {
                std::int64_t r = (m * b) % d;
                if (r < 0) r += d;
                sum[static_cast<std::size_t>(r)] += c;
            }
            const Int v = as_integer(reduce(sum, phi));
            if (v == 0) continue;
            if ((a * m) % d != 0) throw std::logic_error("fractional exponent survived the b-sum");
            acc[a * m / d] += v;
        }
    }
    for (const auto& [e, v] : acc) {
        if (e < out.bound) out.coeffs[e] = v;
    }
    return out;
}

}  // namespace cyclo

#endif
