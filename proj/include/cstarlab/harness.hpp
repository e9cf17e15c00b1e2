#ifndef CSTARLAB_HARNESS_HPP
#define CSTARLAB_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace cstarlab::harness {

using nlohmann::json;

// Declarative Monte Carlo experiment. `params` is the construction-specific
// parameter block; see from_json for the accepted construction names.
struct ExperimentSpec {
    std::string construction;
    json params;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;

    // Throws std::runtime_error with a field path on malformed input.
    static ExperimentSpec from_json(const json& doc);
    json to_json() const;
};

// One statistical check inside a report. `rule` is one of "binomial_ci",
// "ks", "abs", "threshold_ge", "threshold_le"; `analytic_op` names the
// module operation that produced the analytic target.
struct Comparison {
    std::string statistic;
    std::string analytic_op;
    std::string rule;
    double empirical = 0;
    double analytic = 0;
    double tolerance = 0;
    bool pass = false;
};

struct Report {
    ExperimentSpec spec;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t n_samples = 0;
    std::vector<Comparison> comparisons;
    double runtime_seconds = 0;  // never serialized; reports stay byte-stable

    bool all_pass() const;
    json to_json() const;
    static Report from_json(const json& doc);
};

enum class Verdict { Pass, Fail, Other };

struct OutcomeVerdict {
    std::string outcome;
    double empirical = 0;
    double analytic = 0;
    double tolerance = 0;
    Verdict verdict = Verdict::Other;
};

struct BinomialCI {
    double z = 3.0;
};
struct KS {
    double threshold = 0.005;
};

// Per-outcome binomial band check. Outcomes with counts but no analytic
// entry come back with Verdict::Other.
std::vector<OutcomeVerdict> compare_distribution(const std::map<std::string, std::uint64_t>& counts,
                                                 const std::map<std::string, double>& analytic,
                                                 const BinomialCI& rule);

// Kolmogorov-Smirnov distance between scalar samples and an analytic CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

// Runs `spec.trials` independent trials, seeded per trial by
// derive_seed(master_seed, t), on up to `threads` workers. Chunks are merged
// in fixed index order, so the report does not depend on the schedule.
Report run_experiment(const ExperimentSpec& spec, unsigned threads = 1);

enum class ReportFormat { Json, Csv };

// JSON: one document; CSV: header plus one row per comparison. Floating
// point numbers carry 12 significant digits in both formats.
void emit_report(const Report& report, ReportFormat format, std::ostream& out);
void emit_report_file(const Report& report, ReportFormat format, const std::string& path);

// Rounds to 12 significant digits, the precision all reports are emitted at.
double round12(double x);

// Names of module operations that experiment presets may cite as analytic
// targets; every comparison produced by run_experiment cites one of these.
const std::vector<std::string>& analytic_registry();

}  // namespace cstarlab::harness

#endif
