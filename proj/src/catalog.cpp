#include "replkit/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "replkit/error.hpp"

namespace replkit::catalog {

using nlohmann::json;
using series::QSeries;

const char* to_string(FrickeEigenvalue e) {
    switch (e) {
        case FrickeEigenvalue::Plus: return "+1";
        case FrickeEigenvalue::Minus: return "-1";
        case FrickeEigenvalue::Unknown: return "unknown";
    }
    return "unknown";
}

const char* to_string(Family f) {
    switch (f) {
        case Family::Monstrous: return "monstrous";
        case Family::Primitive: return "primitive";
        case Family::NineAReplicate: return "nine_a_replicate";
    }
    return "monstrous";
}

namespace {

[[noreturn]] void invalid(const std::string& label, const std::string& what) {
    throw Error(ErrorKind::ValidationError, "record '" + label + "': " + what);
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            out.push_back(p);
            n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::vector<std::int64_t> distinct_primes(std::int64_t n) {
    std::vector<std::int64_t> ps = prime_factors(n);
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) return false;
    }
    return true;
}

std::int64_t label_order(const std::string& label) {
    std::size_t i = 0;
    while (i < label.size() && std::isdigit(static_cast<unsigned char>(label[i]))) ++i;
    if (i == 0 || i > 9) return 0;
    return std::stoll(label.substr(0, i));
}

const json& field(const json& obj, const char* name, const std::string& label) {
    auto it = obj.find(name);
    if (it == obj.end()) invalid(label, std::string("missing field '") + name + "'");
    return *it;
}

std::string text_field(const json& obj, const char* name, const std::string& label) {
    const json& v = field(obj, name, label);
    if (!v.is_string()) invalid(label, std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

bool bool_field(const json& obj, const char* name, const std::string& label) {
    const json& v = field(obj, name, label);
    if (!v.is_boolean()) invalid(label, std::string("field '") + name + "' must be a boolean");
    return v.get<bool>();
}

Int integer_text(const std::string& s, const std::string& label, const char* what) {
    try {
        return series::parse_int(s);
    } catch (const Error&) {
        invalid(label, std::string(what) + " '" + s + "' is not a decimal integer");
    }
}

std::int64_t small_integer(const std::string& s, const std::string& label, const char* what) {
    const Int v = integer_text(s, label, what);
    if (!v.fits_slong_p()) invalid(label, std::string(what) + " is out of range");
    return v.get_si();
}

std::int64_t exponent_key(const std::string& key, const std::string& label) {
    const auto slash = key.find('/');
    const std::int64_t num = small_integer(key.substr(0, slash), label, "exponent");
    if (slash == std::string::npos) return num;
    const std::int64_t den = small_integer(key.substr(slash + 1), label, "exponent denominator");
    if (den <= 0) invalid(label, "exponent denominator must be positive");
    if (num % den != 0) invalid(label, "fractional exponent " + key + " in a q^-1 normalized record");
    return num / den;
}

EtaSeed parse_seed(const json& j, const std::string& label) {
    if (!j.is_object()) invalid(label, "eta_seed must be an object or null");
    EtaSeed s;
    s.kind = text_field(j, "kind", label);
    s.shift = integer_text(text_field(j, "shift", label), label, "seed shift");
    std::set<std::string> allowed{"kind", "shift"};
    if (s.kind == "eta_quotient" || s.kind == "eta_fricke") {
        s.quotient = text_field(j, "quotient", label);
        allowed.insert("quotient");
        try {
            oracle::parse_eta_spec(s.quotient);
        } catch (const Error& e) {
            invalid(label, std::string("eta_seed: ") + e.what());
        }
        if (s.kind == "eta_fricke") {
            s.level = small_integer(text_field(j, "level", label), label, "seed level");
            if (s.level <= 0) invalid(label, "seed level must be positive");
            allowed.insert("level");
        }
    } else if (s.kind != "j") {
        invalid(label, "unknown eta_seed kind '" + s.kind + "'");
    }
    for (const auto& [k, v] : j.items()) {
        if (!allowed.count(k)) invalid(label, "unexpected eta_seed field '" + k + "'");
    }
    return s;
}

json seed_to_json(const EtaSeed& s) {
    json j{{"kind", s.kind}, {"shift", s.shift.get_str()}};
    if (!s.quotient.empty()) j["quotient"] = s.quotient;
    if (s.kind == "eta_fricke") j["level"] = std::to_string(s.level);
    return j;
}

const std::set<std::string> kRecordFields{
    "label", "level", "coefficient_prefix", "prefix_through", "replicates", "monstrous", "fricke_monstrous",
    "fricke_eigenvalue", "cusp_orbit_count", "eta_seed", "group_names", "family", "incomplete", "provenance"};

FunctionRecord parse_record(const std::string& key, const json& j) {
    if (!j.is_object()) invalid(key, "record must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!kRecordFields.count(k)) invalid(key, "unexpected field '" + k + "'");
    }
    FunctionRecord r;
    r.label = text_field(j, "label", key);
    if (r.label != key) invalid(key, "label field '" + r.label + "' differs from its key");

    const json& level = field(j, "level", key);
    if (!level.is_null()) {
        if (!level.is_string()) invalid(key, "level must be a decimal string or null");
        r.level = small_integer(level.get<std::string>(), key, "level");
        if (*r.level <= 0) invalid(key, "level must be positive");
    }

    r.prefix_through = small_integer(text_field(j, "prefix_through", key), key, "prefix_through");
    const json& prefix = field(j, "coefficient_prefix", key);
    if (!prefix.is_object()) invalid(key, "coefficient_prefix must be an object");
    for (const auto& [k, v] : prefix.items()) {
        if (!v.is_string()) invalid(key, "coefficient of q^" + k + " must be a decimal string");
        const std::int64_t e = exponent_key(k, key);
        if (!r.coefficient_prefix.emplace(e, integer_text(v.get<std::string>(), key, "coefficient")).second) {
            invalid(key, "exponent " + k + " listed twice");
        }
    }

    const json& reps = field(j, "replicates", key);
    if (!reps.is_object()) invalid(key, "replicates must be an object");
    for (const auto& [k, v] : reps.items()) {
        const std::int64_t p = small_integer(k, key, "replicate index");
        if (!is_prime(p)) invalid(key, "replicate index " + k + " is not prime");
        if (!v.is_string()) invalid(key, "replicate label must be a string");
        r.replicates.emplace(static_cast<unsigned>(p), v.get<std::string>());
    }

    r.monstrous = bool_field(j, "monstrous", key);
    r.fricke_monstrous = bool_field(j, "fricke_monstrous", key);

    const std::string ev = text_field(j, "fricke_eigenvalue", key);
    if (ev == "+1") r.fricke_eigenvalue = FrickeEigenvalue::Plus;
    else if (ev == "-1") r.fricke_eigenvalue = FrickeEigenvalue::Minus;
    else if (ev == "unknown") r.fricke_eigenvalue = FrickeEigenvalue::Unknown;
    else invalid(key, "fricke_eigenvalue must be \"+1\", \"-1\" or \"unknown\"");

    const std::string cusps = text_field(j, "cusp_orbit_count", key);
    if (cusps != "unknown") {
        const std::int64_t c = small_integer(cusps, key, "cusp_orbit_count");
        if (c <= 0) invalid(key, "cusp_orbit_count must be positive");
        r.cusp_orbit_count = static_cast<int>(c);
    }

    const json& seed = field(j, "eta_seed", key);
    if (!seed.is_null()) r.eta_seed = parse_seed(seed, key);

    const json& names = field(j, "group_names", key);
    if (!names.is_array()) invalid(key, "group_names must be an array");
    for (const auto& n : names) {
        if (!n.is_string()) invalid(key, "group names must be strings");
        r.group_names.push_back(n.get<std::string>());
    }

    const std::string fam = text_field(j, "family", key);
    if (fam == "monstrous") r.family = Family::Monstrous;
    else if (fam == "primitive") r.family = Family::Primitive;
    else if (fam == "nine_a_replicate") r.family = Family::NineAReplicate;
    else invalid(key, "unknown family '" + fam + "'");

    r.incomplete = bool_field(j, "incomplete", key);

    const json& prov = field(j, "provenance", key);
    if (!prov.is_object()) invalid(key, "provenance must be an object");
    for (const auto& [k, v] : prov.items()) {
        if (!v.is_string()) invalid(key, "provenance entries must be strings");
        r.provenance.emplace(k, v.get<std::string>());
    }
    return r;
}

json record_to_json(const FunctionRecord& r) {
    json prefix = json::object();
    for (const auto& [e, v] : r.coefficient_prefix) prefix[std::to_string(e)] = v.get_str();
    json reps = json::object();
    for (const auto& [p, l] : r.replicates) reps[std::to_string(p)] = l;
    json names = json::array();
    for (const auto& n : r.group_names) names.push_back(n);
    json prov = json::object();
    for (const auto& [k, v] : r.provenance) prov[k] = v;
    return json{{"label", r.label},
                {"level", r.level ? json(std::to_string(*r.level)) : json(nullptr)},
                {"coefficient_prefix", prefix},
                {"prefix_through", std::to_string(r.prefix_through)},
                {"replicates", reps},
                {"monstrous", r.monstrous},
                {"fricke_monstrous", r.fricke_monstrous},
                {"fricke_eigenvalue", to_string(r.fricke_eigenvalue)},
                {"cusp_orbit_count", r.cusp_orbit_count ? json(std::to_string(*r.cusp_orbit_count)) : json("unknown")},
                {"eta_seed", r.eta_seed ? seed_to_json(*r.eta_seed) : json(nullptr)},
                {"group_names", names},
                {"family", to_string(r.family)},
                {"incomplete", r.incomplete},
                {"provenance", prov}};
}

// One prime step without validation-time guarantees.
std::string step(const Catalog& cat, const std::string& label, std::int64_t p) {
    const FunctionRecord& rec = cat.record(label);
    const std::int64_t ord = rec.order();
    if (ord % p != 0) return rec.label;
    auto it = rec.replicates.find(static_cast<unsigned>(p));
    if (it == rec.replicates.end()) {
        throw Error(ErrorKind::UnresolvableReplicate,
                    "'" + rec.label + "' has no replicate listed for the prime " + std::to_string(p));
    }
    if (!cat.functions.count(it->second)) {
        throw Error(ErrorKind::UnresolvableReplicate, "replicate " + std::to_string(p) + " of '" + rec.label +
                                                          "' is '" + it->second + "', which is not in the catalog");
    }
    return it->second;
}

}  // namespace

QSeries EtaSeed::expand(std::int64_t order) const {
    if (kind == "j") {
        QSeries j = oracle::j_series(order);
        return series::add(j, QSeries::constant(shift, j.prec()));
    }
    const oracle::EtaQuotientSpec spec = oracle::parse_eta_spec(quotient, shift);
    if (kind == "eta_fricke") return oracle::eta_fricke_sum(spec, level, order);
    return oracle::eta_quotient(spec, order, 1);
}

std::int64_t FunctionRecord::order() const { return label_order(label); }

QSeries FunctionRecord::prefix_series() const {
    std::vector<Int> cs(static_cast<std::size_t>(prefix_through + 2));
    for (const auto& [e, v] : coefficient_prefix) cs[static_cast<std::size_t>(e + 1)] = v;
    return QSeries(1, -1, std::move(cs), prefix_through + 1);
}

const FunctionRecord& Catalog::record(const std::string& label) const {
    auto it = functions.find(canonical_label(label));
    if (it == functions.end()) throw Error(ErrorKind::UnknownLabel, "no record labelled '" + label + "'");
    return it->second;
}

std::string Catalog::canonical_label(const std::string& label) const {
    auto it = aliases.find(label);
    return it == aliases.end() ? label : it->second;
}

Catalog parse_catalog(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorKind::ValidationError, "catalog must be a JSON object");
    for (const auto& [k, v] : doc.items()) {
        if (k != "version" && k != "functions" && k != "aliases") {
            throw Error(ErrorKind::ValidationError, "unexpected top-level field '" + k + "'");
        }
    }
    auto ver = doc.find("version");
    if (ver == doc.end() || !ver->is_number_integer() || ver->get<int>() != 1) {
        throw Error(ErrorKind::ValidationError, "unsupported catalog version (expected 1)");
    }
    auto fns = doc.find("functions");
    if (fns == doc.end() || !fns->is_object()) throw Error(ErrorKind::ValidationError, "missing 'functions' object");
    Catalog cat;
    for (const auto& [label, rec] : fns->items()) cat.functions.emplace(label, parse_record(label, rec));
    auto al = doc.find("aliases");
    if (al != doc.end()) {
        if (!al->is_object()) throw Error(ErrorKind::ValidationError, "'aliases' must be an object");
        for (const auto& [k, v] : al->items()) {
            if (!v.is_string()) throw Error(ErrorKind::ValidationError, "alias '" + k + "' must name a label");
            cat.aliases.emplace(k, v.get<std::string>());
        }
    }
    validate(cat);
    return cat;
}

Catalog parse_catalog_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    return parse_catalog(doc);
}

Catalog load_catalog(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open catalog '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_catalog_text(ss.str());
}

void validate(const Catalog& cat) {
    for (const auto& [alias, target] : cat.aliases) {
        if (cat.functions.count(alias)) {
            throw Error(ErrorKind::ValidationError, "alias '" + alias + "' shadows a record");
        }
        if (!cat.functions.count(target)) {
            throw Error(ErrorKind::ValidationError, "alias '" + alias + "' points to missing record '" + target + "'");
        }
    }
    for (const auto& [label, r] : cat.functions) {
        const std::int64_t ord = r.order();
        if (ord <= 0) invalid(label, "label does not start with the element order");
        if (r.prefix_through < 0) invalid(label, "prefix_through must be at least 0");
        auto lead = r.coefficient_prefix.find(-1);
        if (lead == r.coefficient_prefix.end() || lead->second != 1) invalid(label, "prefix must have coefficient 1 at q^-1");
        auto zero = r.coefficient_prefix.find(0);
        if (zero == r.coefficient_prefix.end() || sgn(zero->second) != 0) {
            invalid(label, "prefix must have coefficient 0 at q^0");
        }
        for (const auto& [e, v] : r.coefficient_prefix) {
            if (e < -1 || e > r.prefix_through) {
                invalid(label, "prefix exponent " + std::to_string(e) + " outside -1.." + std::to_string(r.prefix_through));
            }
        }
        for (const auto& [p, target] : r.replicates) {
            if (ord % p != 0) invalid(label, "replicate prime " + std::to_string(p) + " does not divide the order");
            auto it = cat.functions.find(target);
            if (it == cat.functions.end()) {
                invalid(label, "replicate " + std::to_string(p) + " names missing record '" + target + "'");
            }
            if (it->second.order() * static_cast<std::int64_t>(p) != ord) {
                invalid(label, "replicate " + std::to_string(p) + " ('" + target + "') has the wrong order");
            }
            if (r.family == Family::Primitive && !it->second.monstrous) {
                invalid(label, "primitive record has non-monstrous replicate '" + target + "'");
            }
        }
        for (std::int64_t p : distinct_primes(ord)) {
            if (!r.replicates.count(static_cast<unsigned>(p))) {
                invalid(label, "no replicate listed for the prime " + std::to_string(p));
            }
        }
        if (r.monstrous != (r.family == Family::Monstrous)) invalid(label, "family disagrees with the monstrous flag");
        if (!r.monstrous && r.fricke_monstrous) invalid(label, "fricke_monstrous set on a non-monstrous record");
        if (!r.group_names.empty() && r.group_names.size() != 2) invalid(label, "group_names must hold two names");
        if (r.eta_seed && r.incomplete) invalid(label, "a seeded record cannot be incomplete");
    }
    // Replicate resolution must not depend on the order of the prime steps.
    for (const auto& [label, r] : cat.functions) {
        const std::vector<std::int64_t> ps = distinct_primes(r.order());
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t k = i + 1; k < ps.size(); ++k) {
                const std::string a = step(cat, step(cat, label, ps[i]), ps[k]);
                const std::string b = step(cat, step(cat, label, ps[k]), ps[i]);
                if (a != b) {
                    invalid(label, "replicates " + std::to_string(ps[i]) + " then " + std::to_string(ps[k]) + " give '" +
                                       a + "' but the reverse order gives '" + b + "'");
                }
            }
        }
    }
}

json to_json(const Catalog& cat) {
    json fns = json::object();
    for (const auto& [label, r] : cat.functions) fns[label] = record_to_json(r);
    json doc{{"version", cat.version}, {"functions", fns}};
    if (!cat.aliases.empty()) {
        json al = json::object();
        for (const auto& [k, v] : cat.aliases) al[k] = v;
        doc["aliases"] = al;
    }
    return doc;
}

std::string save_catalog(const Catalog& cat) { return to_json(cat).dump(2) + "\n"; }

std::string resolve_replicate(const Catalog& cat, const std::string& label, std::int64_t k) {
    if (k <= 0) throw Error(ErrorKind::InvalidArgument, "replicate index must be positive");
    std::string cur = cat.record(label).label;
    for (std::int64_t p : prime_factors(k)) cur = step(cat, cur, p);
    return cur;
}

std::vector<std::string> replicate_closure(const Catalog& cat, const std::string& label) {
    std::set<std::string> seen;
    std::vector<std::string> todo{cat.record(label).label};
    while (!todo.empty()) {
        const std::string cur = todo.back();
        todo.pop_back();
        if (!seen.insert(cur).second) continue;
        for (const auto& [p, target] : cat.record(cur).replicates) todo.push_back(target);
    }
    return {seen.begin(), seen.end()};
}

bool has_series(const FunctionRecord& rec) { return rec.eta_seed.has_value() || !rec.incomplete; }

replication::ReplicateSystem build_system(const Catalog& cat, const std::string& label, unsigned n_max,
                                          std::int64_t storage) {
    replication::ReplicateSystem sys;
    for (const std::string& l : replicate_closure(cat, label)) {
        const FunctionRecord& rec = cat.record(l);
        if (!has_series(rec)) {
            throw Error(ErrorKind::InsufficientPrecision,
                        "'" + label + "' depends on '" + l + "', which has no series data (marked incomplete)");
        }
        sys.prefixes.emplace(l, rec.eta_seed ? rec.eta_seed->expand(storage) : rec.prefix_series());
        auto& reps = sys.replicates[l];
        for (unsigned a = 1; a <= n_max; ++a) reps.emplace(a, resolve_replicate(cat, l, a));
    }
    return sys;
}

Materialized materialize_series(const Catalog& cat, const std::string& label, std::int64_t order,
                                const MaterializeOptions& options) {
    if (order < 0) throw Error(ErrorKind::InvalidArgument, "order must be non-negative");
    const FunctionRecord& rec = cat.record(label);
    Materialized out;
    if (rec.eta_seed) {
        out.series = rec.eta_seed->expand(order);
        out.method = "eta_seed";
        return out;
    }
    if (!has_series(rec)) {
        throw Error(ErrorKind::InsufficientPrecision, "'" + rec.label + "' has no series data (marked incomplete)");
    }
    if (rec.prefix_through >= order) {
        out.series = rec.prefix_series().truncated(order + 1);
        out.method = "prefix";
        return out;
    }
    replication::ExtensionOptions opt;
    opt.n_max = options.n_max;
    opt.storage_bound = replication::default_storage_bound(order, options.n_max);
    const replication::ReplicateSystem sys = build_system(cat, rec.label, options.n_max, opt.storage_bound);
    replication::ExtensionResult res = replication::extend_coefficients(sys, order, opt);
    out.series = res.system.prefixes.at(rec.label).truncated(order + 1);
    out.method = "extension";
    out.log = std::move(res.log);
    return out;
}

}  // namespace replkit::catalog
