#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cstarlab/graphs.hpp"
#include "cstarlab/harness.hpp"
#include "cstarlab/ktheory.hpp"
#include "cstarlab/markov.hpp"
#include "cstarlab/rng.hpp"
#include "cstarlab/simplex.hpp"
#include "cstarlab/uhf.hpp"
#include "cstarlab/villadsen.hpp"

namespace {

using namespace cstarlab;

// "0:1/2,1:1/2" -> initial distribution over states.
markov::InitialDistribution parse_pi(const std::string& s) {
    markov::InitialDistribution init;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--pi", "expected state:weight pairs, got '" + item + "'");
        init.weights[std::stol(item.substr(0, colon))] = parse_rational(item.substr(colon + 1));
    }
    init.validate();
    return init;
}

markov::TransitionSpec absorbing_chain(const std::string& p, const std::string& q0) {
    Rational pr = parse_rational(p);
    Rational q = q0.empty() ? Rational(1) - pr : parse_rational(q0);
    return markov::TransitionSpec::constant_absorbing(pr, q);
}

villadsen::QFamily parse_family(const std::string& kind, const std::string& q) {
    if (kind == "constant") return villadsen::ConstantQ{parse_rational(q)};
    if (kind == "inverse_square") return villadsen::OneMinusInverseSquare{};
    throw CLI::ValidationError("--family", "expected 'constant' or 'inverse_square'");
}

const char* kind_name(markov::ChainKind k) {
    switch (k) {
        case markov::ChainKind::PositiveRecurrent: return "positive_recurrent";
        case markov::ChainKind::NullRecurrent: return "null_recurrent";
        case markov::ChainKind::Transient: return "transient";
        default: return "inconclusive";
    }
}

std::string prob_string(const markov::Prob& p) {
    if (p.exact) return to_string(p.value());
    return "[" + to_string(p.lower) + ", " + to_string(p.upper) + "]";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampling and exact invariants for random operator-algebra constructions"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Master seed (env CSTARLAB_SEED)")
        ->envname("CSTARLAB_SEED")
        ->capture_default_str();

    std::string p = "1/2", q0, pi = "0:1";
    long k = 1, start = 0;
    std::uint64_t n_samples = 1, max_steps = 1000;

    auto* markov_cmd = app.add_subcommand("markov", "Birth-death chain computations");
    markov_cmd->require_subcommand(1);

    auto* classify = markov_cmd->add_subcommand("classify", "Recurrence classification");
    classify->add_option("--p", p, "Constant up probability");
    classify->callback([&] {
        auto spec = markov::TransitionSpec::constant_reflecting(parse_rational(p));
        std::cout << kind_name(markov::classify_chain(spec).kind) << "\n";
    });

    auto* absorb = markov_cmd->add_subcommand("absorb", "Exact absorption probability");
    absorb->add_option("--p", p, "Constant up probability");
    absorb->add_option("--q0", q0, "P(0 -> -1), defaults to 1-p");
    absorb->add_option("--start", start, "Start state");
    absorb->callback([&] {
        auto spec = absorbing_chain(p, q0);
        std::cout << prob_string(markov::absorption_probability(
                         spec, start, markov::AbsorptionMode::AbsorbAtMinusOne))
                  << "\n";
    });

    auto* hitmax = markov_cmd->add_subcommand("hitmax", "P(sup of walk <= k)");
    hitmax->add_option("--p", p, "Constant up probability");
    hitmax->add_option("--q0", q0, "P(0 -> -1), defaults to 1-p");
    hitmax->add_option("--k", k, "Level bound")->required();
    hitmax->add_option("--start", start, "Start state");
    hitmax->callback([&] {
        std::cout << to_string(markov::max_not_exceeding_probability(absorbing_chain(p, q0), k, start))
                  << "\n";
    });

    auto* uhf_cmd = app.add_subcommand("uhf", "Random UHF algebras");
    uhf_cmd->require_subcommand(1);

    auto* uhf_sample = uhf_cmd->add_subcommand("sample", "Sample supernatural numbers");
    uhf_sample->add_option("--p", p, "Constant up probability");
    uhf_sample->add_option("--q0", q0, "P(0 -> -1), defaults to 1-p");
    uhf_sample->add_option("--pi", pi, "Initial distribution state:weight,...");
    uhf_sample->add_option("--n", n_samples, "Number of samples");
    uhf_sample->add_option("--max-steps", max_steps, "Truncation length");
    uhf_sample->callback([&] {
        auto spec = absorbing_chain(p, q0);
        auto init = parse_pi(pi);
        for (std::uint64_t t = 0; t < n_samples; ++t) {
            Rng rng(derive_seed(seed, t));
            auto path = markov::simulate_path(spec, init, max_steps, rng);
            std::cout << uhf::build_supernatural(path).to_string() << "\n";
        }
    });

    auto* uhf_prob = uhf_cmd->add_subcommand("prob", "Exact UHF invariant probabilities");
    uhf_prob->add_option("--p", p, "Constant up probability");
    uhf_prob->add_option("--q0", q0, "P(0 -> -1), defaults to 1-p");
    uhf_prob->add_option("--pi", pi, "Initial distribution state:weight,...");
    uhf_prob->add_option("--k", k, "Prime index bound");
    uhf_prob->callback([&] {
        auto spec = absorbing_chain(p, q0);
        auto init = parse_pi(pi);
        std::cout << "finite_dimensional = " << prob_string(uhf::prob_finite_dimensional(spec, init))
                  << "\n"
                  << "bounded_prime(k=" << k
                  << ") = " << to_string(uhf::prob_bounded_prime(spec, init, k)) << "\n";
    });

    std::string measure = "C";
    auto* simplex_cmd = app.add_subcommand("simplex", "Random Choquet simplex towers");
    simplex_cmd->require_subcommand(1);

    auto* simplex_sample = simplex_cmd->add_subcommand("sample", "Sample a tower");
    simplex_sample->add_option("--p", p, "Constant up probability");
    simplex_sample->add_option("--q0", q0, "P(0 -> -1), defaults to 1-p");
    simplex_sample->add_option("--pi", pi, "Initial distribution state:weight,...");
    simplex_sample->add_option("--measure", measure, "Collapse row measure: K, C, or P");
    simplex_sample->add_option("--max-steps", max_steps, "Truncation length");
    simplex_sample->callback([&] {
        simplex::Measure m = measure == "K"   ? simplex::Measure::K
                             : measure == "P" ? simplex::Measure::P
                                              : simplex::Measure::C;
        Rng rng(seed);
        auto tower = simplex::sample_tower(absorbing_chain(p, q0), parse_pi(pi), m, max_steps, rng);
        std::cout << "dims:";
        for (long d : tower.dims) std::cout << " " << d;
        std::cout << "\nabsorbed: " << (tower.absorbed ? "true" : "false") << "\n";
    });

    auto* simplex_traces = simplex_cmd->add_subcommand("traces", "P(at most k extremal traces)");
    simplex_traces->add_option("--p", p, "Constant up probability");
    simplex_traces->add_option("--q0", q0, "P(0 -> -1), defaults to 1-p");
    simplex_traces->add_option("--pi", pi, "Initial distribution state:weight,...");
    simplex_traces->add_option("--k", k, "Trace count bound")->required();
    simplex_traces->callback([&] {
        std::cout << to_string(simplex::extremal_traces_at_most_prob(absorbing_chain(p, q0),
                                                                     parse_pi(pi), k))
                  << "\n";
    });

    double beta = 0.0, r_value = 1.0;
    int power = 0, bit_budget = 53;
    std::string family = "constant", fq = "1/2";
    std::uint64_t cutoff = 1000;

    auto* vill_cmd = app.add_subcommand("villadsen", "Radius-of-comparison distributions");
    vill_cmd->require_subcommand(1);

    auto* vill_sample = vill_cmd->add_subcommand("sample", "Sample R, CSV (w0, r)");
    vill_sample->add_option("--beta", beta, "Drift parameter");
    vill_sample->add_option("--power", power, "W0 = 2^power");
    vill_sample->add_option("--bit-budget", bit_budget, "Bits of W");
    vill_sample->add_option("--n", n_samples, "Number of samples");
    vill_sample->callback([&] {
        auto spec = villadsen::BetaWalkSpec::delta_power(beta, power, bit_budget);
        std::cout << "w0,r\n";
        char buf[64];
        for (std::uint64_t t = 0; t < n_samples; ++t) {
            Rng rng(derive_seed(seed, t));
            auto s = villadsen::sample_R(spec, rng);
            std::snprintf(buf, sizeof buf, "%.12g,%.12g", s.w0, s.r);
            std::cout << buf << "\n";
        }
    });

    auto* vill_ccdf = vill_cmd->add_subcommand("ccdf", "P(R >= r)");
    vill_ccdf->add_option("--beta", beta, "Drift parameter");
    vill_ccdf->add_option("--power", power, "W0 = 2^power");
    vill_ccdf->add_option("--r", r_value, "Evaluation point")->required();
    vill_ccdf->callback([&] {
        std::cout << villadsen::ccdf_R(villadsen::BetaWalkSpec::delta_power(beta, power), r_value)
                  << "\n";
    });

    auto* vill_mean = vill_cmd->add_subcommand("mean", "E(R)");
    vill_mean->add_option("--beta", beta, "Drift parameter");
    vill_mean->add_option("--power", power, "W0 = 2^power");
    vill_mean->callback([&] {
        std::cout << villadsen::expected_R(villadsen::BetaWalkSpec::delta_power(beta, power)) << "\n";
    });

    auto* vill_zstable = vill_cmd->add_subcommand("zstable", "Tame-choice probability");
    vill_zstable->add_option("--family", family, "constant | inverse_square");
    vill_zstable->add_option("--q", fq, "q for the constant family");
    vill_zstable->add_option("--cutoff", cutoff, "Tail cutoff");
    vill_zstable->callback([&] {
        std::cout << to_string(villadsen::zstable_probability(parse_family(family, fq), cutoff))
                  << "\n";
    });

    std::uint64_t gn = 100, gr = 3;
    auto* graph_cmd = app.add_subcommand("graph", "Random regular multigraphs and their algebras");
    graph_cmd->require_subcommand(1);

    auto* graph_sample = graph_cmd->add_subcommand("sample", "Sample a multigraph, print edges");
    graph_sample->add_option("--n", gn, "Vertex count (even)");
    graph_sample->add_option("--r", gr, "Regularity (matchings)");
    graph_sample->callback([&] {
        Rng rng(seed);
        auto g = graphs::sample_regular_multigraph(gn, gr, rng);
        graphs::write_edge_list(std::cout, g);
        auto pred = graphs::kirchberg_predicates(graphs::double_to_digraph(g));
        std::cout << "simple: " << (pred.simple ? "true" : "false")
                  << "\npurely_infinite: " << (pred.purely_infinite ? "true" : "false") << "\n";
    });

    auto* graph_kth = graph_cmd->add_subcommand("ktheory", "K-groups of a sampled doubled graph");
    graph_kth->add_option("--n", gn, "Vertex count (even)");
    graph_kth->add_option("--r", gr, "Regularity (matchings)");
    graph_kth->callback([&] {
        Rng rng(seed);
        auto g = graphs::sample_regular_multigraph(gn, gr, rng);
        auto kg = ktheory::k_groups(graphs::double_to_digraph(g));
        std::cout << "K0 = " << kg.k0.to_string() << "\nK1 = Z^" << kg.k1_rank << "\n";
    });

    std::string config_path, format = "json", out_path;
    std::uint64_t trials_override = 0;
    unsigned threads = 1;
    auto* exp_cmd = app.add_subcommand("experiment", "Declarative Monte Carlo experiments");
    auto* exp_run = exp_cmd->add_subcommand("run", "Run a JSON experiment config");
    exp_cmd->require_subcommand(1);
    exp_run->add_option("config", config_path, "Path to JSON config")->required();
    exp_run->add_option("--trials", trials_override, "Override trial count");
    exp_run->add_option("--threads", threads, "Worker threads");
    exp_run->add_option("--format", format, "Report format: json | csv");
    exp_run->add_option("--out", out_path, "Write the report to a file");
    exp_run->callback([&] {
        std::ifstream in(config_path);
        if (!in) throw CLI::ValidationError("config", "cannot open '" + config_path + "'");
        harness::json doc = harness::json::parse(in);
        if (app.count("--seed")) doc["master_seed"] = seed;
        if (trials_override) doc["trials"] = trials_override;
        auto spec = harness::ExperimentSpec::from_json(doc);
        auto report = harness::run_experiment(spec, threads);
        auto fmt = format == "csv" ? harness::ReportFormat::Csv : harness::ReportFormat::Json;
        if (out_path.empty())
            harness::emit_report(report, fmt, std::cout);
        else
            harness::emit_report_file(report, fmt, out_path);
        if (!report.all_pass()) std::exit(2);
    });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
