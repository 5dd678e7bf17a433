#ifndef REPLKIT_REPLICATION_HPP
#define REPLKIT_REPLICATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "replkit/qseries.hpp"

namespace replkit::replication {

struct LabelledSeries {
    std::string label;
    series::QSeries series;
};

/// f = f^(1) together with its replicates f^(a), a <= n_max.
struct ReplicatePack {
    unsigned n_max = 1;
    std::map<unsigned, LabelledSeries> entries;

    const LabelledSeries& at(unsigned a) const;
    const series::QSeries& root() const { return at(1).series; }
};

/// Right-hand side of the replication identity of degree n,
///
///     sum_{ad = n} d * sum_{d | m} c^(a)_m q^(a m / d),
///
/// where c^(a)_m are the coefficients of f^(a).
///
/// Lemma. For integers d >= 1 and m, sum_{b=0}^{d-1} exp(2 pi i m b / d)
/// equals d when d divides m and 0 otherwise (a finite geometric series with
/// ratio exp(2 pi i m / d), which is 1 exactly when d | m). Expanding
/// f^(a)((a tau + b) / d) = sum_m c^(a)_m exp(2 pi i m b / d) q^(a m / d)
/// and summing over b therefore keeps only the terms with d | m, each with
/// weight d. No root of unity survives, so the sum is computed over the
/// integers.
///
/// The term for (a, d) is exact below a * (floor((prec_a - 1) / d) + 1); the
/// result carries the smallest of these bounds.
series::QSeries twisted_hecke(const ReplicatePack& pack, unsigned n);

struct IdentityRow {
    unsigned n = 0;
    std::int64_t verified_lo = 0;
    std::int64_t verified_hi = -1;
    std::optional<std::int64_t> first_mismatch;
    std::optional<std::string> error;  // e.g. insufficient precision for this n
};

struct IdentityReport {
    std::vector<IdentityRow> rows;
    bool pass() const;
    nlohmann::json to_json() const;
};

/// Compares faber_apply(faber_poly(f, n), f) with twisted_hecke(pack, n) for
/// n = 1 .. n_max on exponents -n .. order.
IdentityReport verify_replicable(const ReplicatePack& pack, unsigned n_max, std::int64_t order);

/// Labelled prefixes closed under replication: replicates.at(L).at(a) is the
/// label of the a-th replicate of L. A label shared by several roles is one
/// function, so solving a coefficient updates every role at once.
struct ReplicateSystem {
    std::map<std::string, series::QSeries> prefixes;
    std::map<std::string, std::map<unsigned, std::string>> replicates;
};

struct ExtensionStep {
    std::string series_label;
    std::int64_t exponent = 0;
    Int value;
    std::string identity_label;  // whose identity fixed the value
    unsigned n = 0;
    std::int64_t identity_exponent = 0;
};

struct ExtensionOptions {
    unsigned n_max = 6;
    /// Highest coefficient index carried during elimination. 0 selects
    /// default_storage_bound(target, n_max).
    std::int64_t storage_bound = 0;
};

struct ExtensionResult {
    ReplicateSystem system;
    std::vector<ExtensionStep> log;
};

std::int64_t default_storage_bound(std::int64_t target_order, unsigned n_max);

/// Treats every coefficient outside the prefixes as unknown and scans the
/// replication identities of degree n = 2 .. n_max, exponent by exponent.
/// Whenever a comparison involves exactly one unknown and is linear in it,
/// the unknown is solved exactly. Runs until all series are known through
/// target_order or nothing changes.
///
/// Throws NonIntegralSolution, Inconsistent (an identity with no unknowns
/// fails), or Stuck (names the first label and exponent left undetermined).
ExtensionResult extend_coefficients(const ReplicateSystem& system, std::int64_t target_order,
                                    const ExtensionOptions& options = {});

/// Pack form: entries sharing a label are the same function; the replicate
/// of entry a by b is entry a*b when a*b <= n_max.
ReplicatePack extend_coefficients(const ReplicatePack& pack, std::int64_t target_order,
                                  std::vector<ExtensionStep>* log = nullptr);

/// Pack for `label` with n_max replicates read from a system.
ReplicatePack pack_from_system(const ReplicateSystem& system, const std::string& label, unsigned n_max);

nlohmann::json to_json(const std::vector<ExtensionStep>& log);

}  // namespace replkit::replication

#endif
