#ifndef REPLKIT_ELIMINATION_HPP
#define REPLKIT_ELIMINATION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "replkit/catalog.hpp"
#include "replkit/qseries.hpp"

namespace replkit::elimination {

enum class Status { NonMoonshineLike, Undetermined };

/// Listed from highest to lowest precedence; None means nothing fired.
enum class Rule { FrickeMinus, FrickePlusNegative, NonFrickeReplicate, OneCuspSignPattern, Propagated, None };

const char* to_string(Status s);
const char* to_string(Rule r);

struct Verdict {
    std::string label;
    Status status = Status::Undetermined;
    Rule rule = Rule::None;
    nlohmann::json evidence = nlohmann::json::object();
};

enum class SignPattern { AllNonNegative, UniformlyAlternating, Mixed };

const char* to_string(SignPattern p);

/// Exponents inspected for sign checks. The normalized leading term q^-1
/// carries no information and is always skipped, so the effective window
/// starts at max(lo, 0).
struct SignWindow {
    std::int64_t lo = -1;
    std::int64_t hi = 50;
    unsigned min_nonzero = 10;
};

struct SignReport {
    SignPattern pattern = SignPattern::AllNonNegative;
    /// Mixed only: the first exponent holds a negative coefficient, and the
    /// two together break every alternating pattern.
    std::vector<std::int64_t> witnesses;
    unsigned nonzero = 0;
};

/// Throws WindowTooSmall when fewer than min_nonzero coefficients in the
/// window are nonzero, and InsufficientPrecision when the window runs past
/// the series' precision.
SignReport sign_pattern(const series::QSeries& f, const SignWindow& window = {});

std::optional<Verdict> check_fricke(const catalog::FunctionRecord& rec, const series::QSeries* f,
                                    const SignWindow& window = {});

std::optional<Verdict> check_one_cusp(const catalog::FunctionRecord& rec, const series::QSeries& f,
                                      const SignWindow& window = {}, std::vector<std::string>* warnings = nullptr);

std::optional<Verdict> check_non_fricke_replicate(const catalog::FunctionRecord& rec, const catalog::Catalog& cat,
                                                  std::vector<std::string>* warnings = nullptr);

struct ClassifyConfig {
    SignWindow window;
    unsigned n_max = 6;
    bool fricke = true;
    bool one_cusp = true;
    bool non_fricke_replicate = true;
    bool propagate = true;
};

struct RecordResult {
    Verdict verdict;
    std::vector<Verdict> fired;  // every direct rule that fired, by precedence
};

struct ClassificationReport {
    std::map<std::string, RecordResult> results;  // non-monstrous records only
    std::vector<std::string> warnings;

    std::vector<std::string> undetermined() const;
    std::vector<std::string> eliminated_by(Rule r) const;  // recorded rule
    std::vector<std::string> fired(Rule r) const;          // any direct firing
    nlohmann::json to_json(const catalog::Catalog& cat) const;
    std::string to_table(const catalog::Catalog& cat) const;
};

ClassificationReport classify(const catalog::Catalog& cat, const ClassifyConfig& config = {});

/// Re-derives a verdict from its evidence alone, materializing series
/// afresh where the evidence cites coefficients. Propagated verdicts are
/// checked against the verdict of their source in `report`.
bool replay(const Verdict& v, const catalog::Catalog& cat, const ClassificationReport& report,
            const ClassifyConfig& config = {});

}  // namespace replkit::elimination

#endif
