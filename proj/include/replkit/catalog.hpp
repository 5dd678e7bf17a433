#ifndef REPLKIT_CATALOG_HPP
#define REPLKIT_CATALOG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "replkit/eta_oracle.hpp"
#include "replkit/qseries.hpp"
#include "replkit/replication.hpp"

namespace replkit::catalog {

enum class FrickeEigenvalue { Plus, Minus, Unknown };

const char* to_string(FrickeEigenvalue e);

/// Which published list a record belongs to.
enum class Family { Monstrous, Primitive, NineAReplicate };

const char* to_string(Family f);

/// How a series is generated exactly from eta products.
///
///   eta_quotient  prod eta(m tau)^e + shift
///   eta_fricke    t + C * t|W_level + shift, t the quotient (see eta_fricke_sum)
///   j             j(tau) + shift
struct EtaSeed {
    std::string kind;
    std::string quotient;  // "1^24/2^24"; empty for kind "j"
    std::int64_t level = 0;
    Int shift = 0;

    series::QSeries expand(std::int64_t order) const;
};

struct FunctionRecord {
    std::string label;
    std::optional<std::int64_t> level;
    /// Known coefficients a_m for -1 <= m <= prefix_through; exponents in
    /// that range missing from the map are zero.
    std::map<std::int64_t, Int> coefficient_prefix;
    std::int64_t prefix_through = 0;
    std::map<unsigned, std::string> replicates;  // prime p -> label of f^(p)
    bool monstrous = false;
    bool fricke_monstrous = false;
    FrickeEigenvalue fricke_eigenvalue = FrickeEigenvalue::Unknown;
    std::optional<int> cusp_orbit_count;
    std::optional<EtaSeed> eta_seed;
    std::vector<std::string> group_names;  // empty or two names
    Family family = Family::Monstrous;
    /// Neither a seed nor a usable prefix could be sourced.
    bool incomplete = false;
    std::map<std::string, std::string> provenance;

    /// Element order read from the label: "18h" -> 18.
    std::int64_t order() const;
    series::QSeries prefix_series() const;
};

struct Catalog {
    int version = 1;
    std::map<std::string, FunctionRecord> functions;
    std::map<std::string, std::string> aliases;  // alternative name -> label

    const FunctionRecord& record(const std::string& label) const;
    std::string canonical_label(const std::string& label) const;
};

/// Parses and validates. Every failure names the record and the rule broken.
Catalog load_catalog(const std::string& path);
Catalog parse_catalog(const nlohmann::json& doc);
Catalog parse_catalog_text(const std::string& text);
void validate(const Catalog& cat);

/// Canonical serialization: sorted keys, two-space indent, trailing newline.
nlohmann::json to_json(const Catalog& cat);
std::string save_catalog(const Catalog& cat);

/// Label of the k-th replicate. Primes that do not divide the record's
/// order leave the function unchanged.
std::string resolve_replicate(const Catalog& cat, const std::string& label, std::int64_t k);

struct Materialized {
    series::QSeries series;
    std::string method;  // "eta_seed", "prefix" or "extension"
    std::vector<replication::ExtensionStep> log;
};

struct MaterializeOptions {
    unsigned n_max = 6;
};

/// Exact series for `label` through q^order.
Materialized materialize_series(const Catalog& cat, const std::string& label, std::int64_t order,
                                const MaterializeOptions& options = {});

/// All labels reachable from `label` by prime replicates, including itself.
std::vector<std::string> replicate_closure(const Catalog& cat, const std::string& label);

/// The replication system over the closure of `label`: seeded series are
/// expanded through `storage`, other records contribute their prefixes.
replication::ReplicateSystem build_system(const Catalog& cat, const std::string& label, unsigned n_max,
                                          std::int64_t storage);

/// Whether materialize_series can produce the record's series at all.
bool has_series(const FunctionRecord& rec);

}  // namespace replkit::catalog

#endif
