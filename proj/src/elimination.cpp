#include "replkit/elimination.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "replkit/error.hpp"

namespace replkit::elimination {

using catalog::Catalog;
using catalog::FrickeEigenvalue;
using catalog::FunctionRecord;
using nlohmann::json;
using series::QSeries;

const char* to_string(Status s) {
    return s == Status::NonMoonshineLike ? "NonMoonshineLike" : "Undetermined";
}

const char* to_string(Rule r) {
    switch (r) {
        case Rule::FrickeMinus: return "FrickeMinus";
        case Rule::FrickePlusNegative: return "FrickePlusNegative";
        case Rule::NonFrickeReplicate: return "NonFrickeReplicate";
        case Rule::OneCuspSignPattern: return "OneCuspSignPattern";
        case Rule::Propagated: return "Propagated";
        case Rule::None: return "None";
    }
    return "None";
}

const char* to_string(SignPattern p) {
    switch (p) {
        case SignPattern::AllNonNegative: return "AllNonNegative";
        case SignPattern::UniformlyAlternating: return "UniformlyAlternating";
        case SignPattern::Mixed: return "Mixed";
    }
    return "Mixed";
}

namespace {

// sign(a_m) * (-1)^m
int parity_sign(const Int& a, std::int64_t m) {
    const int s = sgn(a);
    return (m % 2 == 0) ? s : -s;
}

Verdict make(const std::string& label, Rule rule, json evidence) {
    return Verdict{label, Status::NonMoonshineLike, rule, std::move(evidence)};
}

std::vector<std::int64_t> divisors_above_one(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t k = 2; k <= n; ++k) {
        if (n % k == 0) out.push_back(k);
    }
    return out;
}

// Prime-by-prime path from rec to its k-th replicate.
json replicate_chain(const Catalog& cat, const std::string& label, std::int64_t k) {
    json chain = json::array();
    std::string cur = label;
    std::int64_t rest = k;
    for (std::int64_t p = 2; rest > 1; ++p) {
        while (rest % p == 0) {
            cur = catalog::resolve_replicate(cat, cur, p);
            chain.push_back({{"prime", p}, {"label", cur}});
            rest /= p;
        }
    }
    return chain;
}

std::optional<QSeries> series_for_checks(const Catalog& cat, const FunctionRecord& rec, const ClassifyConfig& cfg,
                                         std::vector<std::string>& warnings) {
    if (!catalog::has_series(rec)) {
        warnings.push_back(rec.label + ": no series data (record marked incomplete); series-based checks skipped");
        return std::nullopt;
    }
    try {
        catalog::MaterializeOptions opt;
        opt.n_max = cfg.n_max;
        return catalog::materialize_series(cat, rec.label, cfg.window.hi, opt).series;
    } catch (const Error& e) {
        warnings.push_back(rec.label + ": series unavailable (" + to_string(e.kind()) + ": " + e.what() +
                           "); series-based checks skipped");
        return std::nullopt;
    }
}

}  // namespace

SignReport sign_pattern(const QSeries& f0, const SignWindow& window) {
    const QSeries f = f0.reduced();
    if (f.scale() != 1) throw Error(ErrorKind::IncompatibleScale, "sign pattern needs integer exponents");
    const std::int64_t lo = std::max<std::int64_t>(window.lo, 0);
    if (window.hi >= f.prec()) {
        throw Error(ErrorKind::InsufficientPrecision, "sign window reaches q^" + std::to_string(window.hi) +
                                                          " but the series is known only below q^" +
                                                          std::to_string(f.prec()));
    }
    SignReport rep;
    std::optional<std::int64_t> first_negative;
    for (std::int64_t m = lo; m <= window.hi; ++m) {
        const Int a = f.at(m);
        if (sgn(a) == 0) continue;
        ++rep.nonzero;
        if (sgn(a) < 0 && !first_negative) first_negative = m;
    }
    if (rep.nonzero < window.min_nonzero) {
        throw Error(ErrorKind::WindowTooSmall, "only " + std::to_string(rep.nonzero) +
                                                   " nonzero coefficients in the sign window (need " +
                                                   std::to_string(window.min_nonzero) + ")");
    }
    if (!first_negative) {
        rep.pattern = SignPattern::AllNonNegative;
        return rep;
    }
    const std::int64_t neg = *first_negative;
    const int eps = parity_sign(f.at(neg), neg);
    for (std::int64_t m = lo; m <= window.hi; ++m) {
        const Int a = f.at(m);
        if (sgn(a) != 0 && parity_sign(a, m) != eps) {
            rep.pattern = SignPattern::Mixed;
            rep.witnesses = {neg, m};
            return rep;
        }
    }
    rep.pattern = SignPattern::UniformlyAlternating;
    return rep;
}

std::optional<Verdict> check_fricke(const FunctionRecord& rec, const QSeries* f, const SignWindow& window) {
    if (rec.monstrous) return std::nullopt;
    if (rec.fricke_eigenvalue == FrickeEigenvalue::Minus) {
        // f(-1/tau) = -f(tau/N) starts with -q^(-1/N): a negative coefficient.
        return make(rec.label, Rule::FrickeMinus, {{"eigenvalue", "-1"}});
    }
    if (rec.fricke_eigenvalue != FrickeEigenvalue::Plus || f == nullptr) return std::nullopt;
    const QSeries g = f->reduced();
    const std::int64_t hi = std::min(window.hi, g.prec() - 1);
    for (std::int64_t m = std::max<std::int64_t>(window.lo, 0); m <= hi; ++m) {
        const Int a = g.at(m);
        if (sgn(a) < 0) {
            return make(rec.label, Rule::FrickePlusNegative,
                        {{"eigenvalue", "+1"}, {"exponent", m}, {"value", a.get_str()}});
        }
    }
    return std::nullopt;
}

std::optional<Verdict> check_one_cusp(const FunctionRecord& rec, const QSeries& f, const SignWindow& window,
                                      std::vector<std::string>* warnings) {
    if (rec.monstrous || !rec.cusp_orbit_count || *rec.cusp_orbit_count != 1) return std::nullopt;
    SignReport sp;
    try {
        sp = sign_pattern(f, window);
    } catch (const Error& e) {
        if (warnings) warnings->push_back(rec.label + ": sign pattern not computable (" + e.what() + ")");
        return std::nullopt;
    }
    if (sp.pattern != SignPattern::Mixed) return std::nullopt;
    json wit = json::array();
    for (std::int64_t m : sp.witnesses) wit.push_back({{"exponent", m}, {"value", f.at(m).get_str()}});
    return make(rec.label, Rule::OneCuspSignPattern,
                {{"cusp_orbit_count", 1}, {"pattern", to_string(sp.pattern)}, {"witnesses", wit},
                 {"window", {std::max<std::int64_t>(window.lo, 0), window.hi}}});
}

std::optional<Verdict> check_non_fricke_replicate(const FunctionRecord& rec, const Catalog& cat,
                                                  std::vector<std::string>* warnings) {
    if (rec.monstrous) return std::nullopt;
    for (std::int64_t k : divisors_above_one(rec.order())) {
        try {
            const std::string target = catalog::resolve_replicate(cat, rec.label, k);
            const FunctionRecord& t = cat.record(target);
            if (t.monstrous && !t.fricke_monstrous) {
                return make(rec.label, Rule::NonFrickeReplicate,
                            {{"k", k}, {"replicate", target}, {"chain", replicate_chain(cat, rec.label, k)}});
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::UnresolvableReplicate) throw;
            if (warnings) warnings->push_back(rec.label + ": " + e.what());
        }
    }
    return std::nullopt;
}

ClassificationReport classify(const Catalog& cat, const ClassifyConfig& cfg) {
    ClassificationReport report;
    for (const auto& [label, rec] : cat.functions) {
        if (rec.monstrous) continue;
        RecordResult res;
        res.verdict.label = label;
        const bool wants_series = (cfg.fricke && rec.fricke_eigenvalue == FrickeEigenvalue::Plus) ||
                                  (cfg.one_cusp && rec.cusp_orbit_count && *rec.cusp_orbit_count == 1);
        std::optional<QSeries> f;
        if (wants_series) {
            f = series_for_checks(cat, rec, cfg, report.warnings);
        } else if (!catalog::has_series(rec)) {
            report.warnings.push_back(label + ": no series data (record marked incomplete); only data rules apply");
        }
        if (cfg.fricke) {
            if (auto v = check_fricke(rec, f ? &*f : nullptr, cfg.window)) res.fired.push_back(*v);
        }
        if (cfg.non_fricke_replicate) {
            if (auto v = check_non_fricke_replicate(rec, cat, &report.warnings)) res.fired.push_back(*v);
        }
        if (cfg.one_cusp && f) {
            if (auto v = check_one_cusp(rec, *f, cfg.window, &report.warnings)) res.fired.push_back(*v);
        }
        std::stable_sort(res.fired.begin(), res.fired.end(),
                         [](const Verdict& a, const Verdict& b) { return a.rule < b.rule; });
        if (!res.fired.empty()) res.verdict = res.fired.front();
        report.results.emplace(label, std::move(res));
    }
    if (!cfg.propagate) return report;

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [label, res] : report.results) {
            if (res.verdict.status == Status::NonMoonshineLike) continue;
            const FunctionRecord& rec = cat.record(label);
            for (std::int64_t k : divisors_above_one(rec.order())) {
                std::string target;
                try {
                    target = catalog::resolve_replicate(cat, label, k);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::UnresolvableReplicate) throw;
                    continue;
                }
                auto it = report.results.find(target);
                if (it == report.results.end() || it->second.verdict.status != Status::NonMoonshineLike) continue;
                res.verdict = make(label, Rule::Propagated,
                                   {{"k", k}, {"source", target}, {"source_rule", to_string(it->second.verdict.rule)}});
                changed = true;
                break;
            }
        }
    }
    return report;
}

std::vector<std::string> ClassificationReport::undetermined() const {
    std::vector<std::string> out;
    for (const auto& [label, r] : results) {
        if (r.verdict.status == Status::Undetermined) out.push_back(label);
    }
    return out;
}

std::vector<std::string> ClassificationReport::eliminated_by(Rule rule) const {
    std::vector<std::string> out;
    for (const auto& [label, r] : results) {
        if (r.verdict.rule == rule) out.push_back(label);
    }
    return out;
}

std::vector<std::string> ClassificationReport::fired(Rule rule) const {
    std::vector<std::string> out;
    for (const auto& [label, r] : results) {
        if (std::any_of(r.fired.begin(), r.fired.end(), [&](const Verdict& v) { return v.rule == rule; })) {
            out.push_back(label);
        }
    }
    return out;
}

namespace {

json verdict_json(const Verdict& v) {
    return {{"label", v.label}, {"status", to_string(v.status)}, {"rule", to_string(v.rule)}, {"evidence", v.evidence}};
}

std::string witness_text(const Verdict& v) {
    const json& e = v.evidence;
    std::ostringstream os;
    switch (v.rule) {
        case Rule::FrickeMinus: os << "W_N acts as -1"; break;
        case Rule::FrickePlusNegative:
            os << "a_" << e.at("exponent").get<std::int64_t>() << " = " << e.at("value").get<std::string>();
            break;
        case Rule::OneCuspSignPattern: {
            bool first = true;
            for (const auto& w : e.at("witnesses")) {
                os << (first ? "" : ", ") << "a_" << w.at("exponent").get<std::int64_t>() << " = "
                   << w.at("value").get<std::string>();
                first = false;
            }
            break;
        }
        case Rule::NonFrickeReplicate:
            os << "f^(" << e.at("k").get<std::int64_t>() << ") = " << e.at("replicate").get<std::string>();
            break;
        case Rule::Propagated:
            os << "f^(" << e.at("k").get<std::int64_t>() << ") = " << e.at("source").get<std::string>();
            break;
        case Rule::None: break;
    }
    return os.str();
}

}  // namespace

json ClassificationReport::to_json(const Catalog& cat) const {
    json verdicts = json::array();
    for (const auto& [label, r] : results) {
        const FunctionRecord& rec = cat.record(label);
        json item = verdict_json(r.verdict);
        json fired_rules = json::array();
        for (const auto& v : r.fired) fired_rules.push_back(to_string(v.rule));
        item["fired"] = fired_rules;
        item["family"] = catalog::to_string(rec.family);
        verdicts.push_back(std::move(item));
    }
    json und = json::array();
    for (const auto& l : undetermined()) und.push_back(l);
    json warn = json::array();
    for (const auto& w : warnings) warn.push_back(w);
    return {{"verdicts", verdicts}, {"undetermined", und}, {"warnings", warn}};
}

std::string ClassificationReport::to_table(const Catalog& cat) const {
    std::ostringstream os;
    auto row = [&](const std::string& a, const std::string& b, const std::string& c, const std::string& d,
                   const std::string& e, const std::string& f, const std::string& g) {
        os << std::left << std::setw(6) << a << std::setw(9) << b << std::setw(10) << c << std::setw(7) << d
           << std::setw(18) << e << std::setw(20) << f << g << "\n";
    };
    row("f", "group", "cusp grp", "cusps", "status", "rule", "witness");
    for (const auto& [label, r] : results) {
        const FunctionRecord& rec = cat.record(label);
        const std::string g3 = rec.group_names.size() == 2 ? rec.group_names[0] : "-";
        const std::string g2 = rec.group_names.size() == 2 ? rec.group_names[1] : "-";
        const std::string cusps = rec.cusp_orbit_count ? std::to_string(*rec.cusp_orbit_count) : "?";
        row(label, g3, g2, cusps, to_string(r.verdict.status), to_string(r.verdict.rule), witness_text(r.verdict));
    }
    const auto und = undetermined();
    os << "undetermined:";
    for (const auto& l : und) os << ' ' << l;
    os << "\n";
    for (const auto& w : warnings) os << "note: " << w << "\n";
    return os.str();
}

bool replay(const Verdict& v, const Catalog& cat, const ClassificationReport& report, const ClassifyConfig& cfg) {
    if ((v.status == Status::NonMoonshineLike) != (v.rule != Rule::None)) return false;
    const FunctionRecord& rec = cat.record(v.label);
    const json& e = v.evidence;
    auto fresh = [&]() {
        catalog::MaterializeOptions opt;
        opt.n_max = cfg.n_max;
        return catalog::materialize_series(cat, rec.label, cfg.window.hi, opt).series;
    };
    switch (v.rule) {
        case Rule::None: return true;
        case Rule::FrickeMinus: return rec.fricke_eigenvalue == FrickeEigenvalue::Minus;
        case Rule::FrickePlusNegative: {
            if (rec.fricke_eigenvalue != FrickeEigenvalue::Plus) return false;
            const Int a = fresh().at(e.at("exponent").get<std::int64_t>());
            return sgn(a) < 0 && a.get_str() == e.at("value").get<std::string>();
        }
        case Rule::OneCuspSignPattern: {
            if (!rec.cusp_orbit_count || *rec.cusp_orbit_count != 1) return false;
            const QSeries f = fresh();
            const json& w = e.at("witnesses");
            if (w.size() != 2) return false;
            const std::int64_t m0 = w[0].at("exponent").get<std::int64_t>();
            const std::int64_t m1 = w[1].at("exponent").get<std::int64_t>();
            const Int a0 = f.at(m0);
            const Int a1 = f.at(m1);
            if (a0.get_str() != w[0].at("value").get<std::string>() ||
                a1.get_str() != w[1].at("value").get<std::string>()) {
                return false;
            }
            return sgn(a0) < 0 && sgn(a1) != 0 && parity_sign(a0, m0) != parity_sign(a1, m1);
        }
        case Rule::NonFrickeReplicate: {
            const std::string target = catalog::resolve_replicate(cat, rec.label, e.at("k").get<std::int64_t>());
            const FunctionRecord& t = cat.record(target);
            return target == e.at("replicate").get<std::string>() && t.monstrous && !t.fricke_monstrous;
        }
        case Rule::Propagated: {
            const std::string target = catalog::resolve_replicate(cat, rec.label, e.at("k").get<std::int64_t>());
            if (target != e.at("source").get<std::string>()) return false;
            auto it = report.results.find(target);
            return it != report.results.end() && it->second.verdict.status == Status::NonMoonshineLike;
        }
    }
    return false;
}

}  // namespace replkit::elimination
