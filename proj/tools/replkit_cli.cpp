// replkit: command-line front end for the series, replication and
// classification engines. Exit codes: 0 success, 1 engine error or failed
// check, 2 usage error.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "replkit/catalog.hpp"
#include "replkit/elimination.hpp"
#include "replkit/error.hpp"
#include "replkit/eta_oracle.hpp"
#include "replkit/faber.hpp"
#include "replkit/replication.hpp"

namespace {

using namespace replkit;
using nlohmann::json;

constexpr const char* kCatalogEnv = "REPLKIT_CATALOG";

std::string default_catalog() {
    const char* env = std::getenv(kCatalogEnv);
    return env && *env ? env : "data/catalog.json";
}

std::string render(const series::QSeries& f0) {
    const series::QSeries f = f0.reduced();
    std::ostringstream os;
    bool first = true;
    auto exponent = [&](std::int64_t k) {
        std::ostringstream e;
        if (f.scale() == 1) e << k;
        else e << k << "/" << f.scale();
        return e.str();
    };
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        const Int& c = f.coeffs()[i];
        if (sgn(c) == 0) continue;
        const std::int64_t k = f.lo() + static_cast<std::int64_t>(i);
        Int mag = abs(c);
        os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
        first = false;
        if (k == 0) {
            os << mag.get_str();
            continue;
        }
        if (mag != 1) os << mag.get_str();
        os << "q";
        if (k != f.scale()) os << "^" << exponent(k);
    }
    if (first) os << "0";
    os << " + O(q^" << exponent(f.prec()) << ")";
    return os.str();
}

struct Emitter {
    std::string format = "json";
    void series(const series::QSeries& f) const {
        if (format == "json") std::cout << series::to_json(f).dump() << "\n";
        else std::cout << render(f) << "\n";
    }
    void doc(const json& j) const { std::cout << (format == "json" ? j.dump() : j.dump(2)) << "\n"; }
};

std::vector<std::string> split_labels(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    std::sort(out.begin(), out.end());
    return out;
}

replication::ReplicatePack pack_for(const catalog::Catalog& cat, const std::string& label, unsigned n_max,
                                    std::int64_t order) {
    replication::ReplicatePack pack;
    pack.n_max = n_max;
    for (unsigned a = 1; a <= n_max; ++a) {
        const std::string l = catalog::resolve_replicate(cat, label, a);
        // f^(a) enters the degree-n identity through exponent (n/a) * order.
        const std::int64_t need = static_cast<std::int64_t>(n_max / a) * std::max<std::int64_t>(order, 1) + n_max;
        pack.entries.emplace(a, replication::LabelledSeries{l, catalog::materialize_series(cat, l, need).series});
    }
    return pack;
}

int run(int argc, char** argv) {
    CLI::App app{"Faber polynomials, replication identities and classification of replicable functions"};
    app.require_subcommand(1);
    app.fallthrough();
    Emitter out;
    std::string catalog_path = default_catalog();
    app.add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "table"}));
    app.add_option("--catalog", catalog_path, std::string("Catalog file (default $") + kCatalogEnv + " or data/catalog.json)");

    auto* cat_cmd = app.add_subcommand("catalog", "Catalog utilities");
    cat_cmd->require_subcommand(1);
    auto* validate_cmd = cat_cmd->add_subcommand("validate", "Load and validate a catalog");
    validate_cmd->add_option("path", catalog_path, "Catalog file");

    auto* series_cmd = app.add_subcommand("series", "Series utilities");
    series_cmd->require_subcommand(1);
    auto* mat_cmd = series_cmd->add_subcommand("materialize", "Exact q-expansion of a catalog function");
    std::string label;
    std::int64_t order = 20;
    unsigned n_max = 4;
    unsigned degree = 1;
    mat_cmd->add_option("--label", label, "Function label")->required();
    mat_cmd->add_option("--order", order, "Last exponent")->check(CLI::Range(std::int64_t{1}, std::int64_t{100000}));

    auto* faber_cmd = app.add_subcommand("faber", "Normalized Faber polynomial of a catalog function");
    faber_cmd->add_option("--label", label, "Function label")->required();
    faber_cmd->add_option("-n", degree, "Degree")->required()->check(CLI::Range(1u, 1000u));

    auto* verify_cmd = app.add_subcommand("verify-replicable", "Check the replication identities");
    verify_cmd->add_option("--label", label, "Function label")->required();
    verify_cmd->add_option("--nmax", n_max, "Largest degree")->check(CLI::Range(1u, 64u));
    verify_cmd->add_option("--order", order, "Last exponent compared")->check(CLI::Range(std::int64_t{1}, std::int64_t{10000}));

    auto* extend_cmd = app.add_subcommand("extend", "Extend a catalog prefix through the replication identities");
    unsigned extend_nmax = 6;
    extend_cmd->add_option("--label", label, "Function label")->required();
    extend_cmd->add_option("--order", order, "Target exponent")->check(CLI::Range(std::int64_t{1}, std::int64_t{10000}));
    extend_cmd->add_option("--nmax", extend_nmax, "Largest degree used")->check(CLI::Range(2u, 64u));

    auto* oracle_cmd = app.add_subcommand("oracle", "Eta-product expansions");
    oracle_cmd->require_subcommand(1);
    auto* j_cmd = oracle_cmd->add_subcommand("j", "The j-function");
    j_cmd->add_option("--order", order, "Last exponent")->check(CLI::Range(std::int64_t{0}, std::int64_t{100000}));
    auto* eta_cmd = oracle_cmd->add_subcommand("eta-quotient", "An eta quotient such as 1^24/2^24");
    std::string spec_text;
    std::string shift = "0";
    eta_cmd->add_option("spec", spec_text, "Quotient m^e[*m^e...][/m^e...]")->required();
    eta_cmd->add_option("--shift", shift, "Additive constant");
    eta_cmd->add_option("--order", order, "Last exponent")->check(CLI::Range(std::int64_t{0}, std::int64_t{100000}));

    auto* classify_cmd = app.add_subcommand("classify", "Run the elimination rules over a catalog");
    std::string expect;
    std::int64_t sign_window = 50;
    classify_cmd->add_option("path", catalog_path, "Catalog file");
    classify_cmd->add_option("--expect-undetermined", expect, "Comma-separated labels; exit 1 unless they match");
    classify_cmd->add_option("--sign-window", sign_window, "Last exponent inspected for signs")
        ->check(CLI::Range(std::int64_t{10}, std::int64_t{100000}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate_cmd->parsed()) {
            const catalog::Catalog cat = catalog::load_catalog(catalog_path);
            std::size_t incomplete = 0;
            for (const auto& [l, r] : cat.functions) incomplete += r.incomplete ? 1 : 0;
            out.doc({{"valid", true}, {"records", cat.functions.size()}, {"incomplete", incomplete}});
            return 0;
        }
        if (j_cmd->parsed()) {
            out.series(oracle::j_series(order));
            return 0;
        }
        if (eta_cmd->parsed()) {
            out.series(oracle::eta_quotient(oracle::parse_eta_spec(spec_text, series::parse_int(shift)), order));
            return 0;
        }

        const catalog::Catalog cat = catalog::load_catalog(catalog_path);
        if (mat_cmd->parsed()) {
            out.series(catalog::materialize_series(cat, label, order).series);
        } else if (faber_cmd->parsed()) {
            const auto f = catalog::materialize_series(cat, label, std::max<std::int64_t>(degree, 1)).series;
            const auto p = faber::faber_poly(f, degree);
            if (out.format == "json") {
                out.doc(faber::to_json(p));
            } else {
                std::cout << "P_" << degree << "(x) = x^" << degree;
                for (unsigned k = degree; k-- > 0;) {
                    if (sgn(p.c[k]) == 0) continue;
                    std::cout << (sgn(p.c[k]) < 0 ? " - " : " + ") << Int(abs(p.c[k])).get_str();
                    if (k > 0) std::cout << "x" << (k > 1 ? "^" + std::to_string(k) : "");
                }
                std::cout << "\n";
            }
        } else if (verify_cmd->parsed()) {
            const auto pack = pack_for(cat, cat.canonical_label(label), n_max, order);
            const auto rep = replication::verify_replicable(pack, n_max, order);
            out.doc({{"label", cat.canonical_label(label)}, {"order", order}, {"pass", rep.pass()}, {"rows", rep.to_json()}});
            return rep.pass() ? 0 : 1;
        } else if (extend_cmd->parsed()) {
            catalog::MaterializeOptions opt;
            opt.n_max = extend_nmax;
            const auto m = catalog::materialize_series(cat, label, order, opt);
            if (out.format == "json") {
                out.doc({{"label", cat.canonical_label(label)}, {"method", m.method}, {"series", series::to_json(m.series)},
                         {"log", replication::to_json(m.log)}});
            } else {
                std::cout << render(m.series) << "\n" << m.log.size() << " coefficients determined by "
                          << m.method << "\n";
            }
        } else if (classify_cmd->parsed()) {
            elimination::ClassifyConfig cfg;
            cfg.window.hi = sign_window;
            const auto rep = elimination::classify(cat, cfg);
            if (out.format == "json") out.doc(rep.to_json(cat));
            else std::cout << rep.to_table(cat);
            if (!expect.empty()) {
                const auto want = split_labels(expect);
                const auto got = rep.undetermined();
                if (want != got) {
                    std::cerr << json{{"error", "UnexpectedUndetermined"}, {"expected", want}, {"actual", got}}.dump()
                              << "\n";
                    return 1;
                }
            }
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
