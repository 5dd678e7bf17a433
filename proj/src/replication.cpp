#include "replkit/replication.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "replkit/error.hpp"
#include "replkit/faber.hpp"

namespace replkit::replication {

using series::QSeries;

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

QSeries ordinary(const QSeries& f, const std::string& label) {
    QSeries r = f.reduced();
    if (r.scale() != 1) {
        throw Error(ErrorKind::IncompatibleScale, "series '" + label + "' has fractional exponents");
    }
    return r;
}

}  // namespace

const LabelledSeries& ReplicatePack::at(unsigned a) const {
    auto it = entries.find(a);
    if (it == entries.end()) {
        throw Error(ErrorKind::MissingReplicate, "replicate f^(" + std::to_string(a) + ") is not in the pack");
    }
    return it->second;
}

QSeries twisted_hecke(const ReplicatePack& pack, unsigned n) {
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "degree must be positive");
    struct Term {
        std::int64_t a, d;
        QSeries f;
    };
    std::vector<Term> terms;
    std::int64_t lo = 0;
    std::int64_t prec = 0;
    bool first = true;
    for (std::int64_t a = 1; a <= n; ++a) {
        if (n % a != 0) continue;
        const std::int64_t d = n / a;
        const LabelledSeries& entry = pack.at(static_cast<unsigned>(a));
        QSeries f = ordinary(entry.series, entry.label);
        const std::int64_t term_lo = a * ceil_div(f.lo(), d);
        const std::int64_t term_prec = a * (floor_div(f.prec() - 1, d) + 1);
        lo = first ? term_lo : std::min(lo, term_lo);
        prec = first ? term_prec : std::min(prec, term_prec);
        first = false;
        terms.push_back({a, d, std::move(f)});
    }
    if (prec <= lo) lo = prec - 1;
    std::vector<Int> out(static_cast<std::size_t>(prec - lo));
    for (const Term& t : terms) {
        const auto& cs = t.f.coeffs();
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(cs.size()); ++i) {
            const std::int64_t m = t.f.lo() + i;
            if (m % t.d != 0 || sgn(cs[static_cast<std::size_t>(i)]) == 0) continue;
            const std::int64_t e = t.a * (m / t.d);
            if (e < lo || e >= prec) continue;
            mpz_addmul_ui(out[static_cast<std::size_t>(e - lo)].get_mpz_t(),
                          cs[static_cast<std::size_t>(i)].get_mpz_t(), static_cast<unsigned long>(t.d));
        }
    }
    return QSeries(1, lo, std::move(out), prec);
}

bool IdentityReport::pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const IdentityRow& r) { return !r.first_mismatch && !r.error; });
}

nlohmann::json IdentityReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row{{"n", r.n}, {"verified_lo", r.verified_lo}, {"verified_hi", r.verified_hi}};
        row["first_mismatch"] = r.first_mismatch ? nlohmann::json(*r.first_mismatch) : nlohmann::json(nullptr);
        if (r.error) row["error"] = *r.error;
        arr.push_back(std::move(row));
    }
    return arr;
}

IdentityReport verify_replicable(const ReplicatePack& pack, unsigned n_max, std::int64_t order) {
    IdentityReport report;
    const QSeries f = ordinary(pack.root(), pack.at(1).label);
    faber::require_normalized(f);
    for (unsigned n = 1; n <= n_max; ++n) {
        IdentityRow row;
        row.n = n;
        row.verified_lo = -static_cast<std::int64_t>(n);
        try {
            const faber::FaberPolynomial p = faber::faber_poly(f, n);
            const QSeries lhs = faber::faber_apply(p, f);
            const QSeries rhs = twisted_hecke(pack, n);
            const series::Agreement ag = series::compare(lhs, rhs);
            const std::int64_t hi = std::min(ag.hi, order);
            row.verified_hi = hi;
            if (ag.first_mismatch && *ag.first_mismatch <= order) {
                row.first_mismatch = *ag.first_mismatch;
                row.verified_hi = *ag.first_mismatch - 1;
            } else if (hi < order) {
                std::ostringstream os;
                os << "series known only through q^" << hi << " for n = " << n;
                row.error = os.str();
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::MissingReplicate) throw;
            row.verified_hi = row.verified_lo - 1;
            row.error = std::string(to_string(e.kind())) + ": " + e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::int64_t default_storage_bound(std::int64_t target_order, unsigned n_max) {
    return 2 * std::max<std::int64_t>(target_order, 1) + 2 * static_cast<std::int64_t>(n_max);
}

namespace {

Int binomial(unsigned k, unsigned j) {
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), k, j);
    return r;
}

// One function of the system during elimination. Coefficient index i in
// [-1, L] is stored at slot i + 1. Powers of f with every unknown set to
// zero are kept up to date as values get solved.
struct Track {
    std::string label;
    std::int64_t L = 0;
    std::vector<Int> value;
    std::vector<char> known;
    std::set<std::int64_t> unknown;
    std::vector<std::vector<Int>> power;  // power[k][e + k], e in [-k, L]
    std::map<unsigned, std::string> reps;
    std::map<unsigned, std::vector<Int>> faber;  // degree -> c[0..n-1]

    bool is_known(std::int64_t i) const {
        if (i < -1) return true;
        return i <= L && known[static_cast<std::size_t>(i + 1)] != 0;
    }
    const Int& val(std::int64_t i) const { return value[static_cast<std::size_t>(i + 1)]; }

    // [f0^k]_e, zero outside the stored range.
    Int pw(unsigned k, std::int64_t e) const {
        const std::int64_t slot = e + static_cast<std::int64_t>(k);
        if (slot < 0 || e > L) return 0;
        return power[k][static_cast<std::size_t>(slot)];
    }

    std::int64_t contiguous_through() const {
        return unknown.empty() ? L : *unknown.begin() - 1;
    }
};

class Engine {
public:
    Engine(const ReplicateSystem& sys, std::int64_t target, const ExtensionOptions& opt)
        : target_(target), n_max_(std::max(opt.n_max, 2u)) {
        std::int64_t L = opt.storage_bound > 0 ? opt.storage_bound : default_storage_bound(target, n_max_);
        for (const auto& [label, f] : sys.prefixes) {
            const QSeries r = ordinary(f, label);
            faber::require_normalized(r);
            L = std::max(L, r.prec() - 1);
        }
        for (const auto& [label, f0] : sys.prefixes) {
            const QSeries f = ordinary(f0, label);
            Track t;
            t.label = label;
            t.L = L;
            t.value.assign(static_cast<std::size_t>(L + 2), 0);
            t.known.assign(static_cast<std::size_t>(L + 2), 0);
            for (std::int64_t i = -1; i <= L; ++i) {
                if (i < f.prec()) {
                    t.value[static_cast<std::size_t>(i + 1)] = f.at(i);
                    t.known[static_cast<std::size_t>(i + 1)] = 1;
                } else {
                    t.unknown.insert(i);
                }
            }
            auto rit = sys.replicates.find(label);
            if (rit != sys.replicates.end()) t.reps = rit->second;
            t.reps[1] = label;
            build_powers(t);
            tracks_.emplace(label, std::move(t));
        }
        for (const auto& [label, t] : tracks_) {
            for (const auto& [a, g] : t.reps) {
                if (!tracks_.count(g)) {
                    throw Error(ErrorKind::MissingReplicate,
                                "replicate " + std::to_string(a) + " of '" + label + "' ('" + g + "') has no prefix");
                }
            }
        }
    }

    void run() {
        while (!done()) {
            bool changed = false;
            for (auto& [label, t] : tracks_) {
                for (unsigned n = 2; n <= n_max_; ++n) {
                    for (std::int64_t E = 1; E * n <= t.L && E + n - 1 <= t.L; ++E) {
                        if (scan(t, n, E)) changed = true;
                    }
                    if (done()) return;
                }
            }
            if (!changed) break;
        }
        for (const auto& [label, t] : tracks_) {
            if (t.contiguous_through() < target_) {
                std::ostringstream os;
                os << "coefficient of q^" << (t.contiguous_through() + 1) << " in '" << label
                   << "' is not determined by identities up to degree " << n_max_;
                throw Error(ErrorKind::Stuck, os.str());
            }
        }
    }

    ExtensionResult result(const ReplicateSystem& original) const {
        ExtensionResult out;
        out.log = log_;
        out.system.replicates = original.replicates;
        for (const auto& [label, t] : tracks_) {
            const std::int64_t orig = original.prefixes.at(label).reduced().prec();
            const std::int64_t prec = std::max(orig, target_ + 1);
            std::vector<Int> cs(t.value.begin(), t.value.begin() + (prec + 1));
            out.system.prefixes.emplace(label, QSeries(1, -1, std::move(cs), prec));
        }
        return out;
    }

private:
    struct Unknown {
        std::string label;
        std::int64_t index;
        bool operator==(const Unknown& o) const { return label == o.label && index == o.index; }
    };

    bool done() const {
        return std::all_of(tracks_.begin(), tracks_.end(),
                           [&](const auto& kv) { return kv.second.contiguous_through() >= target_; });
    }

    void build_powers(Track& t) {
        const std::int64_t L = t.L;
        t.power.assign(n_max_ + 1, {});
        t.power[0].assign(static_cast<std::size_t>(L + 1), 0);
        t.power[0][0] = 1;
        for (unsigned k = 1; k <= n_max_; ++k) {
            const std::int64_t off = k;
            std::vector<Int> next(static_cast<std::size_t>(L + off + 1));
            const std::vector<Int>& prev = t.power[k - 1];
            for (std::int64_t e1 = -(off - 1); e1 <= L; ++e1) {
                const Int& a = prev[static_cast<std::size_t>(e1 + off - 1)];
                if (sgn(a) == 0) continue;
                for (std::int64_t i = -1; i <= L && e1 + i <= L; ++i) {
                    if (!t.is_known(i)) continue;
                    const Int& b = t.val(i);
                    if (sgn(b) == 0) continue;
                    mpz_addmul(next[static_cast<std::size_t>(e1 + i + off)].get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
                }
            }
            t.power[k] = std::move(next);
        }
    }

    // f0 gains the term v q^u; refresh every cached power.
    void absorb(Track& t, std::int64_t u, const Int& v) {
        for (unsigned k = n_max_; k >= 1; --k) {
            std::vector<Int>& dst = t.power[k];
            Int vj = 1;
            for (unsigned j = 1; j <= k; ++j) {
                vj *= v;
                const Int coef = binomial(k, j) * vj;
                const std::vector<Int>& src = t.power[k - j];
                const std::int64_t src_off = k - j;
                for (std::int64_t e = -src_off; e + j * u <= t.L; ++e) {
                    const Int& s = src[static_cast<std::size_t>(e + src_off)];
                    if (sgn(s) == 0) continue;
                    mpz_addmul(dst[static_cast<std::size_t>(e + j * u + k)].get_mpz_t(), coef.get_mpz_t(), s.get_mpz_t());
                }
            }
        }
    }

    void set_value(Track& t, std::int64_t u, const Int& v) {
        t.value[static_cast<std::size_t>(u + 1)] = v;
        t.known[static_cast<std::size_t>(u + 1)] = 1;
        t.unknown.erase(u);
        if (sgn(v) != 0) absorb(t, u, v);
    }

    const std::vector<Int>* faber_for(Track& t, unsigned n) {
        auto it = t.faber.find(n);
        if (it != t.faber.end()) return &it->second;
        for (std::int64_t i = 0; i < n; ++i) {
            if (!t.is_known(i)) return nullptr;
        }
        std::vector<Int> c(n, 0);
        for (std::int64_t k = n - 1; k >= 0; --k) {
            const std::int64_t e = -k;
            Int r = t.pw(n, e);
            for (std::int64_t j = k + 1; j < n; ++j) r += c[static_cast<std::size_t>(j)] * t.pw(static_cast<unsigned>(j), e);
            c[static_cast<std::size_t>(k)] = -r;
        }
        return &t.faber.emplace(n, std::move(c)).first->second;
    }

    // Returns true when a coefficient was solved.
    bool scan(Track& t, unsigned n, std::int64_t E) {
        const auto key = std::make_tuple(t.label, n, E);
        if (settled_.count(key)) return false;
        const std::vector<Int>* c = faber_for(t, n);
        if (!c) return false;

        struct HeckeTerm {
            Track* g;
            std::int64_t index;
            std::int64_t weight;
        };
        std::vector<HeckeTerm> hecke;
        std::vector<Unknown> unknowns;
        auto note = [&](const std::string& label, std::int64_t i) {
            Unknown u{label, i};
            if (std::find(unknowns.begin(), unknowns.end(), u) == unknowns.end()) unknowns.push_back(u);
        };
        const std::int64_t top = E + n - 1;
        for (auto it = t.unknown.lower_bound(-1); it != t.unknown.end() && *it <= top && unknowns.size() < 2; ++it) {
            note(t.label, *it);
        }
        const std::int64_t g = std::gcd(static_cast<std::int64_t>(n), E);
        for (std::int64_t a = 1; a <= g; ++a) {
            if (g % a != 0) continue;
            auto rit = t.reps.find(static_cast<unsigned>(a));
            if (rit == t.reps.end()) return false;
            Track& gt = tracks_.at(rit->second);
            const std::int64_t d = n / a;
            const std::int64_t idx = (E / a) * d;
            if (idx > gt.L) return false;
            if (!gt.is_known(idx)) note(gt.label, idx);
            hecke.push_back({&gt, idx, d});
        }
        if (unknowns.size() > 1) return false;

        // Residual R(x) = LHS(x) - RHS(x), polynomial in the single unknown.
        std::vector<Int> R(n + 1, 0);
        const bool in_lhs = !unknowns.empty() && unknowns[0].label == t.label && unknowns[0].index <= top;
        const std::int64_t u = unknowns.empty() ? 0 : unknowns[0].index;
        const unsigned jmax = in_lhs ? n : 0;
        for (unsigned j = 0; j <= jmax; ++j) {
            const std::int64_t e = E - static_cast<std::int64_t>(j) * u;
            Int s = 0;
            for (unsigned k = j; k <= n; ++k) {
                const Int ck = k == n ? Int(1) : (*c)[k];
                if (sgn(ck) == 0) continue;
                const Int p = t.pw(k - j, e);
                if (sgn(p) == 0) continue;
                s += ck * binomial(k, j) * p;
            }
            R[j] = s;
        }
        for (const HeckeTerm& h : hecke) {
            if (!unknowns.empty() && h.g->label == unknowns[0].label && h.index == unknowns[0].index) {
                R[1] -= h.weight;
            } else {
                R[0] -= h.weight * h.g->val(h.index);
            }
        }

        if (unknowns.empty()) {
            settled_.insert(key);
            if (sgn(R[0]) != 0) {
                std::ostringstream os;
                os << "identity of degree " << n << " for '" << t.label << "' fails at q^" << E;
                throw Error(ErrorKind::Inconsistent, os.str());
            }
            return false;
        }
        for (unsigned j = 2; j <= n; ++j) {
            if (sgn(R[j]) != 0) return false;
        }
        if (sgn(R[1]) == 0) return false;
        Int x = -R[0];
        if (!mpz_divisible_p(x.get_mpz_t(), R[1].get_mpz_t())) {
            mpq_class ratio(x, R[1]);
            ratio.canonicalize();
            std::ostringstream os;
            os << "identity of degree " << n << " for '" << t.label << "' at q^" << E << " gives " << ratio.get_str()
               << " for q^" << u << " of '" << unknowns[0].label << "'";
            throw Error(ErrorKind::NonIntegralSolution, os.str());
        }
        x /= R[1];
        Track& target = tracks_.at(unknowns[0].label);
        set_value(target, u, x);
        log_.push_back({target.label, u, x, t.label, n, E});
        return true;
    }

    std::int64_t target_;
    unsigned n_max_;
    std::map<std::string, Track> tracks_;
    std::set<std::tuple<std::string, unsigned, std::int64_t>> settled_;
    std::vector<ExtensionStep> log_;
};

}  // namespace

ExtensionResult extend_coefficients(const ReplicateSystem& system, std::int64_t target_order,
                                    const ExtensionOptions& options) {
    if (system.prefixes.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to extend");
    Engine engine(system, target_order, options);
    engine.run();
    return engine.result(system);
}

ReplicatePack extend_coefficients(const ReplicatePack& pack, std::int64_t target_order,
                                  std::vector<ExtensionStep>* log) {
    ReplicateSystem sys;
    for (const auto& [a, entry] : pack.entries) {
        const QSeries f = ordinary(entry.series, entry.label);
        auto it = sys.prefixes.find(entry.label);
        if (it == sys.prefixes.end()) {
            sys.prefixes.emplace(entry.label, f);
        } else {
            if (!series::agree(it->second, f)) {
                throw Error(ErrorKind::Inconsistent, "two entries labelled '" + entry.label + "' disagree");
            }
            if (f.prec() > it->second.prec()) it->second = f;
        }
        auto& reps = sys.replicates[entry.label];
        for (unsigned b = 1; a * b <= pack.n_max; ++b) {
            auto jt = pack.entries.find(a * b);
            if (jt == pack.entries.end()) continue;
            auto [pos, inserted] = reps.emplace(b, jt->second.label);
            if (!inserted && pos->second != jt->second.label) {
                throw Error(ErrorKind::Inconsistent, "entries labelled '" + entry.label + "' have different replicates");
            }
        }
    }
    ExtensionOptions opt;
    opt.n_max = std::max(pack.n_max, 2u);
    ExtensionResult res = extend_coefficients(sys, target_order, opt);
    if (log) *log = res.log;
    ReplicatePack out = pack;
    for (auto& [a, entry] : out.entries) entry.series = res.system.prefixes.at(entry.label);
    return out;
}

ReplicatePack pack_from_system(const ReplicateSystem& system, const std::string& label, unsigned n_max) {
    ReplicatePack pack;
    pack.n_max = n_max;
    auto pit = system.prefixes.find(label);
    if (pit == system.prefixes.end()) throw Error(ErrorKind::UnknownLabel, "no series for '" + label + "'");
    pack.entries.emplace(1u, LabelledSeries{label, pit->second});
    const auto rit = system.replicates.find(label);
    for (unsigned a = 2; a <= n_max; ++a) {
        std::string g = label;
        if (rit != system.replicates.end()) {
            auto it = rit->second.find(a);
            if (it == rit->second.end()) continue;
            g = it->second;
        } else {
            continue;
        }
        auto git = system.prefixes.find(g);
        if (git == system.prefixes.end()) continue;
        pack.entries.emplace(a, LabelledSeries{g, git->second});
    }
    return pack;
}

nlohmann::json to_json(const std::vector<ExtensionStep>& log) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : log) {
        arr.push_back({{"series_label", s.series_label},
                       {"exponent", s.exponent},
                       {"value", s.value.get_str()},
                       {"determined_by", {{"label", s.identity_label}, {"n", s.n}, {"exponent", s.identity_exponent}}}});
    }
    return arr;
}

}  // namespace replkit::replication
