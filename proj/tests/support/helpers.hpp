#ifndef REPLKIT_TESTS_HELPERS_HPP
#define REPLKIT_TESTS_HELPERS_HPP

#include <functional>
#include <string>
#include <vector>

#include "replkit/catalog.hpp"
#include "replkit/error.hpp"
#include "replkit/eta_oracle.hpp"
#include "replkit/qseries.hpp"

namespace testing {

using replkit::Int;
using replkit::series::QSeries;

inline std::vector<Int> ints(std::initializer_list<long> xs) {
    std::vector<Int> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

/// J = j - 744 known below q^(order + 1).
inline QSeries j_minus_744(std::int64_t order) {
    return replkit::series::sub(replkit::oracle::j_series(order), QSeries::constant(744, order + 1));
}

/// Kind of the replkit::Error thrown by `f`, or "none".
inline std::string error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const replkit::Error& e) {
        return replkit::to_string(e.kind());
    }
    return "none";
}

inline const replkit::catalog::Catalog& shipped_catalog() {
    static const replkit::catalog::Catalog cat = replkit::catalog::load_catalog(REPLKIT_CATALOG_PATH);
    return cat;
}

}  // namespace testing

#endif
