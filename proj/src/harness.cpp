#include "cstarlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cstarlab/graphs.hpp"
#include "cstarlab/ktheory.hpp"
#include "cstarlab/markov.hpp"
#include "cstarlab/rng.hpp"
#include "cstarlab/simplex.hpp"
#include "cstarlab/uhf.hpp"
#include "cstarlab/villadsen.hpp"

namespace cstarlab::harness {

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
    throw std::runtime_error("experiment config: " + where + ": " + what);
}

const json& require(const json& obj, const std::string& field, const std::string& where) {
    auto it = obj.find(field);
    if (it == obj.end()) config_error(where, "missing field '" + field + "'");
    return *it;
}

std::uint64_t as_u64(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        config_error(where, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

long as_long(const json& v, const std::string& where) {
    if (!v.is_number_integer()) config_error(where, "expected an integer");
    return v.get<long>();
}

double as_double(const json& v, const std::string& where) {
    if (!v.is_number()) config_error(where, "expected a number");
    return v.get<double>();
}

// Exact probabilities come in as fraction strings ("3/5") or integers; floats
// are rejected so nothing silently loses exactness.
Rational as_rational(const json& v, const std::string& where) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    } catch (const std::exception& e) {
        config_error(where, e.what());
    }
    config_error(where, "expected a fraction string or integer");
}

double opt_double(const json& obj, const std::string& field, double fallback,
                  const std::string& where) {
    auto it = obj.find(field);
    return it == obj.end() ? fallback : as_double(*it, where + "." + field);
}

std::uint64_t opt_u64(const json& obj, const std::string& field, std::uint64_t fallback,
                      const std::string& where) {
    auto it = obj.find(field);
    return it == obj.end() ? fallback : as_u64(*it, where + "." + field);
}

markov::InitialDistribution parse_initial(const json& v, const std::string& where) {
    if (!v.is_object() || v.empty()) config_error(where, "expected a nonempty state->weight object");
    markov::InitialDistribution init;
    for (auto it = v.begin(); it != v.end(); ++it) {
        long state = 0;
        try {
            state = std::stol(it.key());
        } catch (const std::exception&) {
            config_error(where, "bad state key '" + it.key() + "'");
        }
        init.weights[state] = as_rational(it.value(), where + "." + it.key());
    }
    try {
        init.validate();
    } catch (const std::exception& e) {
        config_error(where, e.what());
    }
    return init;
}

markov::TransitionSpec parse_absorbing_chain(const json& params, const std::string& where) {
    Rational p = as_rational(require(params, "p", where), where + ".p");
    Rational q0 = params.contains("q0") ? as_rational(params["q0"], where + ".q0") : Rational(1) - p;
    try {
        return markov::TransitionSpec::constant_absorbing(p, q0);
    } catch (const std::exception& e) {
        config_error(where, e.what());
    }
}

villadsen::QFamily parse_q_family(const json& v, const std::string& where) {
    if (!v.is_object()) config_error(where, "expected a family object");
    std::string kind = require(v, "kind", where).get<std::string>();
    if (kind == "constant") return villadsen::ConstantQ{as_rational(require(v, "q", where), where + ".q")};
    if (kind == "one_minus_inverse_square") return villadsen::OneMinusInverseSquare{};
    if (kind == "table") {
        villadsen::QTable t;
        for (const auto& e : require(v, "prefix", where)) t.prefix.push_back(as_rational(e, where + ".prefix"));
        t.tail_q = as_rational(require(v, "tail_q", where), where + ".tail_q");
        return t;
    }
    config_error(where, "unknown family kind '" + kind + "'");
}

villadsen::BetaWalkSpec parse_beta_walk(const json& params, const std::string& where) {
    villadsen::BetaWalkSpec spec;
    spec.beta = as_double(require(params, "beta", where), where + ".beta");
    const json& powers = require(params, "powers", where);
    if (!powers.is_object()) config_error(where + ".powers", "expected an exponent->weight object");
    for (auto it = powers.begin(); it != powers.end(); ++it)
        spec.power_weights[std::stoi(it.key())] = as_rational(it.value(), where + ".powers." + it.key());
    if (params.contains("zero_weight"))
        spec.zero_weight = as_rational(params["zero_weight"], where + ".zero_weight");
    spec.bit_budget = static_cast<int>(opt_u64(params, "bit_budget", 53, where));
    try {
        spec.validate();
    } catch (const std::exception& e) {
        config_error(where, e.what());
    }
    return spec;
}

std::string partition_label(const std::vector<unsigned>& partition) {
    if (partition.empty()) return "trivial";
    std::string s;
    for (std::size_t i = 0; i < partition.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(partition[i]);
    }
    return s;
}

struct ChunkAccum {
    std::map<std::string, std::uint64_t> counts;
    std::vector<double> samples;
};

using TrialFn = std::function<void(Rng&, ChunkAccum&)>;
using Finalize = std::function<std::vector<Comparison>(const ChunkAccum&, std::uint64_t)>;

double freq(const ChunkAccum& acc, const std::string& key, std::uint64_t trials) {
    auto it = acc.counts.find(key);
    return it == acc.counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(trials);
}

Comparison binomial_cmp(std::string stat, std::string op, double empirical, double analytic,
                        std::uint64_t trials, double z) {
    double tol = z * std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(trials));
    return {std::move(stat), std::move(op), "binomial_ci", empirical, analytic, tol,
            std::abs(empirical - analytic) <= tol};
}

Comparison threshold_cmp(std::string stat, std::string op, double empirical, double analytic,
                         double bound, bool lower_bound) {
    return {std::move(stat), std::move(op), lower_bound ? "threshold_ge" : "threshold_le",
            empirical, analytic, bound, lower_bound ? empirical >= bound : empirical <= bound};
}

struct Experiment {
    TrialFn trial;
    Finalize finalize;
};

Experiment build_experiment(const ExperimentSpec& spec) {
    const json& params = spec.params;
    const std::string& c = spec.construction;
    const std::string where = "params(" + c + ")";
    double z = opt_double(params, "z", 3.0, where);

    if (c == "markov_absorption") {
        auto chain = parse_absorbing_chain(params, where);
        long start = as_long(require(params, "start", where), where + ".start");
        double eps = opt_double(params, "eps", 1e-6, where);
        auto cap = static_cast<std::size_t>(opt_u64(params, "cap", 100000, where));
        double analytic = markov::absorption_probability(chain, start, markov::AbsorptionMode::AbsorbAtMinusOne).midpoint();
        return {
            [chain, start, eps, cap](Rng& rng, ChunkAccum& acc) {
                acc.counts[markov::mc_absorbed(chain, start, eps, cap, rng) ? "absorbed" : "escaped"]++;
            },
            [analytic, z](const ChunkAccum& acc, std::uint64_t trials) {
                return std::vector<Comparison>{binomial_cmp(
                    "absorbed_frequency", "markov::absorption_probability",
                    freq(acc, "absorbed", trials), analytic, trials, z)};
            }};
    }

    if (c == "markov_max") {
        auto chain = parse_absorbing_chain(params, where);
        long start = as_long(require(params, "start", where), where + ".start");
        long k = as_long(require(params, "k", where), where + ".k");
        auto cap = static_cast<std::size_t>(opt_u64(params, "cap", 100000000, where));
        double analytic = to_double(markov::max_not_exceeding_probability(chain, k, start));
        return {
            [chain, start, k, cap](Rng& rng, ChunkAccum& acc) {
                acc.counts[markov::mc_sup_at_most(chain, start, k, cap, rng) ? "sup_le_k" : "sup_gt_k"]++;
            },
            [analytic, z](const ChunkAccum& acc, std::uint64_t trials) {
                return std::vector<Comparison>{binomial_cmp(
                    "sup_le_k_frequency", "markov::max_not_exceeding_probability",
                    freq(acc, "sup_le_k", trials), analytic, trials, z)};
            }};
    }

    if (c == "uhf_finite_dimensional") {
        auto chain = parse_absorbing_chain(params, where);
        auto init = parse_initial(require(params, "pi", where), where + ".pi");
        double eps = opt_double(params, "eps", 1e-6, where);
        auto cap = static_cast<std::size_t>(opt_u64(params, "cap", 100000, where));
        double analytic = uhf::prob_finite_dimensional(chain, init).midpoint();
        return {
            [chain, init, eps, cap](Rng& rng, ChunkAccum& acc) {
                long start = init.sample(rng);
                acc.counts[markov::mc_absorbed(chain, start, eps, cap, rng) ? "finite" : "infinite"]++;
            },
            [analytic, z](const ChunkAccum& acc, std::uint64_t trials) {
                return std::vector<Comparison>{binomial_cmp(
                    "finite_dimensional_frequency", "uhf::prob_finite_dimensional",
                    freq(acc, "finite", trials), analytic, trials, z)};
            }};
    }

    if (c == "uhf_bounded_prime") {
        auto chain = parse_absorbing_chain(params, where);
        auto init = parse_initial(require(params, "pi", where), where + ".pi");
        long k = as_long(require(params, "k", where), where + ".k");
        auto cap = static_cast<std::size_t>(opt_u64(params, "cap", 100000000, where));
        double analytic = to_double(uhf::prob_bounded_prime(chain, init, k));
        return {
            [chain, init, k, cap](Rng& rng, ChunkAccum& acc) {
                long start = init.sample(rng);
                acc.counts[markov::mc_sup_at_most(chain, start, k, cap, rng) ? "bounded" : "unbounded"]++;
            },
            [analytic, z](const ChunkAccum& acc, std::uint64_t trials) {
                return std::vector<Comparison>{binomial_cmp(
                    "bounded_prime_frequency", "uhf::prob_bounded_prime",
                    freq(acc, "bounded", trials), analytic, trials, z)};
            }};
    }

    if (c == "simplex_traces") {
        auto chain = parse_absorbing_chain(params, where);
        auto init = parse_initial(require(params, "pi", where), where + ".pi");
        long k = as_long(require(params, "k", where), where + ".k");
        auto cap = static_cast<std::size_t>(opt_u64(params, "cap", 100000000, where));
        double analytic = to_double(simplex::extremal_traces_at_most_prob(chain, init, k));
        return {
            [chain, init, k, cap](Rng& rng, ChunkAccum& acc) {
                long start = init.sample(rng);
                acc.counts[markov::mc_sup_at_most(chain, start, k - 1, cap, rng) ? "at_most_k" : "more_than_k"]++;
            },
            [analytic, z](const ChunkAccum& acc, std::uint64_t trials) {
                return std::vector<Comparison>{binomial_cmp(
                    "traces_at_most_k_frequency", "simplex::extremal_traces_at_most_prob",
                    freq(acc, "at_most_k", trials), analytic, trials, z)};
            }};
    }

    if (c == "villadsen_r") {
        auto walk = parse_beta_walk(params, where);
        double mean_tol = opt_double(params, "mean_tol", 0.002, where);
        double ks_threshold = opt_double(params, "ks_threshold", 0.005, where);
        return {
            [walk](Rng& rng, ChunkAccum& acc) {
                double r = villadsen::sample_R(walk, rng).r;
                acc.samples.push_back(r);
                acc.counts[r == 0.0 ? "zero" : "positive"]++;
            },
            [walk, mean_tol, ks_threshold, z](const ChunkAccum& acc, std::uint64_t trials) {
                std::vector<Comparison> out;
                double mean = 0;
                for (double r : acc.samples) mean += r;
                mean /= static_cast<double>(trials);
                double target = villadsen::expected_R(walk);
                out.push_back({"mean_R", "villadsen::expected_R", "abs", mean, target, mean_tol,
                               std::abs(mean - target) <= mean_tol});
                if (walk.zero_weight == 0) {
                    double d = ks_distance(acc.samples, [&walk](double r) {
                        return r <= 0 ? 0.0 : 1.0 - villadsen::ccdf_R(walk, r);
                    });
                    out.push_back({"ks_distance", "villadsen::ccdf_R", "ks", d, 0.0, ks_threshold,
                                   d <= ks_threshold});
                } else {
                    out.push_back(binomial_cmp("zero_frequency", "villadsen::ccdf_R",
                                               freq(acc, "zero", trials), to_double(walk.zero_weight),
                                               trials, z));
                }
                return out;
            }};
    }

    if (c == "villadsen_zstable") {
        auto family = parse_q_family(require(params, "family", where), where + ".family");
        auto cutoff = static_cast<std::size_t>(opt_u64(params, "cutoff", 1000, where));
        auto lo = static_cast<std::size_t>(opt_u64(params, "window_lo", cutoff / 2, where));
        double pass_high = opt_double(params, "pass_high", 0.999, where);
        double pass_low = opt_double(params, "pass_low", 0.01, where);
        Rational analytic = villadsen::zstable_probability(family, cutoff);
        return {
            [family, lo, cutoff](Rng& rng, ChunkAccum& acc) {
                acc.counts[villadsen::tame_choice_in_window(family, lo, cutoff, rng) ? "tame_in_window"
                                                                                     : "no_tame"]++;
            },
            [analytic, pass_high, pass_low](const ChunkAccum& acc, std::uint64_t trials) {
                double f = freq(acc, "tame_in_window", trials);
                bool stable = analytic == 1;
                return std::vector<Comparison>{threshold_cmp(
                    "tame_in_window_frequency", "villadsen::zstable_probability", f,
                    to_double(analytic), stable ? pass_high : pass_low, stable)};
            }};
    }

    if (c == "graph_simplicity") {
        auto n = static_cast<std::size_t>(as_u64(require(params, "n", where), where + ".n"));
        auto r = static_cast<std::size_t>(as_u64(require(params, "r", where), where + ".r"));
        double min_simple = opt_double(params, "min_simple_frequency", 0.95, where);
        return {
            [n, r](Rng& rng, ChunkAccum& acc) {
                auto g = graphs::sample_regular_multigraph(n, r, rng);
                auto pred = graphs::kirchberg_predicates(graphs::double_to_digraph(g));
                if (pred.simple) acc.counts["simple"]++;
                if (pred.purely_infinite) acc.counts["purely_infinite"]++;
                if (pred.simple != graphs::multigraph_connected(g)) acc.counts["predicate_mismatch"]++;
            },
            [min_simple](const ChunkAccum& acc, std::uint64_t trials) {
                std::vector<Comparison> out;
                out.push_back(threshold_cmp("simple_frequency", "graphs::kirchberg_predicates",
                                            freq(acc, "simple", trials), 1.0, min_simple, true));
                out.push_back(threshold_cmp("purely_infinite_frequency", "graphs::kirchberg_predicates",
                                            freq(acc, "purely_infinite", trials), 1.0, 1.0, true));
                out.push_back(threshold_cmp("predicate_mismatch_frequency", "graphs::kirchberg_predicates",
                                            freq(acc, "predicate_mismatch", trials), 0.0, 0.0, false));
                return out;
            }};
    }

    if (c == "graph_ktheory") {
        auto n = static_cast<std::size_t>(as_u64(require(params, "n", where), where + ".n"));
        auto r = static_cast<std::size_t>(as_u64(require(params, "r", where), where + ".r"));
        BigInt prime = as_rational(require(params, "prime", where), where + ".prime").convert_to<BigInt>();
        double tol = opt_double(params, "tolerance", 0.03, where);
        std::vector<std::vector<unsigned>> targets;
        for (const auto& t : require(params, "targets", where)) {
            std::vector<unsigned> part;
            for (const auto& e : t) part.push_back(static_cast<unsigned>(as_u64(e, where + ".targets")));
            targets.push_back(std::move(part));
        }
        return {
            [n, r, prime](Rng& rng, ChunkAccum& acc) {
                auto g = graphs::sample_regular_multigraph(n, r, rng);
                auto kg = ktheory::k_groups(graphs::double_to_digraph(g));
                if (kg.k0.free_rank > 0)
                    acc.counts["infinite"]++;
                else
                    acc.counts[partition_label(ktheory::sylow_partition(kg.k0, prime))]++;
            },
            [prime, r, tol, targets](const ChunkAccum& acc, std::uint64_t trials) {
                std::vector<Comparison> out;
                for (const auto& part : targets) {
                    double analytic = ktheory::wood_limit_probability({{prime, part}}, r);
                    double f = freq(acc, partition_label(part), trials);
                    out.push_back({"sylow_" + partition_label(part) + "_frequency",
                                   "ktheory::wood_limit_probability", "abs", f, analytic, tol,
                                   std::abs(f - analytic) <= tol});
                }
                return out;
            }};
    }

    config_error("construction", "unknown construction '" + c + "'");
}

constexpr std::uint64_t kChunkSize = 1024;

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const json& doc) {
    if (!doc.is_object()) config_error("root", "expected an object");
    ExperimentSpec spec;
    spec.construction = require(doc, "construction", "root").get<std::string>();
    spec.params = require(doc, "params", "root");
    if (!spec.params.is_object()) config_error("params", "expected an object");
    spec.trials = as_u64(require(doc, "trials", "root"), "trials");
    if (spec.trials < 1) config_error("trials", "must be at least 1");
    spec.master_seed = as_u64(require(doc, "master_seed", "root"), "master_seed");
    build_experiment(spec);  // surface parameter errors at parse time
    return spec;
}

json ExperimentSpec::to_json() const {
    return json{{"construction", construction},
                {"params", params},
                {"trials", trials},
                {"master_seed", master_seed}};
}

bool Report::all_pass() const {
    return std::all_of(comparisons.begin(), comparisons.end(),
                       [](const Comparison& c) { return c.pass; });
}

double round12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

json Report::to_json() const {
    json comps = json::array();
    for (const auto& c : comparisons)
        comps.push_back(json{{"statistic", c.statistic},
                             {"analytic_op", c.analytic_op},
                             {"rule", c.rule},
                             {"empirical", round12(c.empirical)},
                             {"analytic", round12(c.analytic)},
                             {"tolerance", round12(c.tolerance)},
                             {"pass", c.pass}});
    return json{{"experiment", spec.to_json()},
                {"counts", counts},
                {"n_samples", n_samples},
                {"comparisons", comps}};
}

Report Report::from_json(const json& doc) {
    Report r;
    r.spec = ExperimentSpec::from_json(require(doc, "experiment", "report"));
    r.counts = require(doc, "counts", "report").get<std::map<std::string, std::uint64_t>>();
    r.n_samples = as_u64(require(doc, "n_samples", "report"), "report.n_samples");
    for (const auto& c : require(doc, "comparisons", "report")) {
        Comparison cmp;
        cmp.statistic = c.at("statistic").get<std::string>();
        cmp.analytic_op = c.at("analytic_op").get<std::string>();
        cmp.rule = c.at("rule").get<std::string>();
        cmp.empirical = c.at("empirical").get<double>();
        cmp.analytic = c.at("analytic").get<double>();
        cmp.tolerance = c.at("tolerance").get<double>();
        cmp.pass = c.at("pass").get<bool>();
        r.comparisons.push_back(std::move(cmp));
    }
    return r;
}

std::vector<OutcomeVerdict> compare_distribution(const std::map<std::string, std::uint64_t>& counts,
                                                 const std::map<std::string, double>& analytic,
                                                 const BinomialCI& rule) {
    std::uint64_t total = 0;
    for (const auto& [k, v] : counts) total += v;
    if (total < 1) throw std::invalid_argument("compare_distribution: empty counts");
    for (const auto& [k, p] : analytic)
        if (p < 0 || p > 1) throw std::invalid_argument("compare_distribution: probability out of range");

    std::vector<OutcomeVerdict> out;
    auto n = static_cast<double>(total);
    for (const auto& [outcome, p] : analytic) {
        auto it = counts.find(outcome);
        double phat = it == counts.end() ? 0.0 : static_cast<double>(it->second) / n;
        double tol = rule.z * std::sqrt(p * (1.0 - p) / n);
        out.push_back({outcome, phat, p, tol,
                       std::abs(phat - p) <= tol ? Verdict::Pass : Verdict::Fail});
    }
    for (const auto& [outcome, count] : counts)
        if (!analytic.count(outcome))
            out.push_back({outcome, static_cast<double>(count) / n, 0.0, 0.0, Verdict::Other});
    return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: no samples");
    std::sort(samples.begin(), samples.end());
    auto n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double f = cdf(samples[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

Report run_experiment(const ExperimentSpec& spec, unsigned threads) {
    Experiment exp = build_experiment(spec);

    std::uint64_t n_chunks = (spec.trials + kChunkSize - 1) / kChunkSize;
    std::vector<ChunkAccum> chunks(n_chunks);
    auto run_chunk = [&](std::uint64_t c) {
        std::uint64_t begin = c * kChunkSize;
        std::uint64_t end = std::min(begin + kChunkSize, spec.trials);
        for (std::uint64_t t = begin; t < end; ++t) {
            Rng rng(derive_seed(spec.master_seed, t));
            exp.trial(rng, chunks[c]);
        }
    };

    if (threads <= 1 || n_chunks == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        auto n_workers = std::min<std::uint64_t>(threads, n_chunks);
        for (std::uint64_t w = 0; w < n_workers; ++w)
            pool.emplace_back([&] {
                for (std::uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
                    run_chunk(c);
            });
        for (auto& t : pool) t.join();
    }

    // Merge in fixed chunk order so floating-point reductions are schedule
    // independent.
    ChunkAccum merged;
    for (const auto& chunk : chunks) {
        for (const auto& [k, v] : chunk.counts) merged.counts[k] += v;
        merged.samples.insert(merged.samples.end(), chunk.samples.begin(), chunk.samples.end());
    }

    Report report;
    report.spec = spec;
    report.counts = merged.counts;
    report.n_samples = spec.trials;
    report.comparisons = exp.finalize(merged, spec.trials);
    return report;
}

void emit_report(const Report& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Json) {
        out << report.to_json().dump(2) << "\n";
        return;
    }
    out << "statistic,analytic_op,rule,empirical,analytic,tolerance,pass\n";
    char buf[64];
    auto num = [&buf](double x) {
        std::snprintf(buf, sizeof buf, "%.12g", x);
        return std::string(buf);
    };
    for (const auto& c : report.comparisons)
        out << c.statistic << "," << c.analytic_op << "," << c.rule << "," << num(c.empirical) << ","
            << num(c.analytic) << "," << num(c.tolerance) << "," << (c.pass ? "true" : "false")
            << "\n";
}

void emit_report_file(const Report& report, ReportFormat format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot open '" + path + "' for writing");
    emit_report(report, format, out);
    out.flush();
    if (!out) throw std::runtime_error("emit_report: write failed for '" + path + "'");
}

const std::vector<std::string>& analytic_registry() {
    static const std::vector<std::string> ops = {
        "markov::absorption_probability",
        "markov::max_not_exceeding_probability",
        "uhf::prob_finite_dimensional",
        "uhf::prob_bounded_prime",
        "simplex::extremal_traces_at_most_prob",
        "villadsen::expected_R",
        "villadsen::ccdf_R",
        "villadsen::zstable_probability",
        "graphs::kirchberg_predicates",
        "ktheory::wood_limit_probability",
    };
    return ops;
}

}  // namespace cstarlab::harness
