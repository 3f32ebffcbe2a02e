// trustnet command line: scenario validation, simulation runs, and one-shot
// trust ratings from an evidence file.
//
// Exit codes: 0 success, 1 validation failure, 2 I/O or parse failure.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "trustnet/trustnet.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitParse = 2;

std::string read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) throw trustnet::parse_error("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

trustnet::ScenarioConfig load_scenario(const std::string& path) {
    return trustnet::parse_scenario(read_file(path));
}

// Non-fatal advisory: clusters should hold similar member counts so
// workloads can spread evenly.
void warn_on_size_imbalance(const trustnet::ScenarioConfig& config) {
    trustnet::ClusterDag dag;
    for (const auto& c : config.clusters) {
        trustnet::Cluster cluster{c.id, {}};
        for (const auto& m : c.members) cluster.members.push_back(m.id);
        dag.add_cluster(std::move(cluster));
    }
    auto report = trustnet::size_uniformity_report(dag, 2.0);
    for (const auto& pair : report.flagged)
        std::cerr << "warning: cluster sizes of '" << pair.smaller << "' and '" << pair.larger
                  << "' differ by a factor of " << trustnet::format_fixed(pair.ratio, 2)
                  << " (tolerance 2.00)\n";
}

int cmd_validate(const std::string& path) {
    trustnet::ScenarioConfig config;
    try {
        config = load_scenario(path);
    } catch (const trustnet::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    auto report = trustnet::validate(config);
    if (!report.ok()) {
        std::cerr << report.to_text();
        std::cerr << report.violations.size() << " violation(s)\n";
        return kExitValidation;
    }
    warn_on_size_imbalance(config);
    std::cout << "scenario is valid\n";
    return kExitOk;
}

int cmd_simulate(const std::string& path, std::optional<std::uint64_t> seed,
                 std::optional<int> rounds, const std::string& out_dir) {
    trustnet::ScenarioConfig config;
    try {
        config = load_scenario(path);
    } catch (const trustnet::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    if (seed) config.sim.seed = *seed;
    if (rounds) {
        // trimming the horizon also drops schedule entries beyond it
        config.sim.rounds = *rounds;
        std::erase_if(config.tasks,
                      [&](const trustnet::TaskSpec& t) { return t.round > *rounds; });
        std::erase_if(config.faults,
                      [&](const trustnet::FaultSpec& f) { return f.round > *rounds; });
        std::erase_if(config.attaches,
                      [&](const trustnet::AttachSpec& a) { return a.round > *rounds; });
    }

    auto report = trustnet::validate(config);
    if (!report.ok()) {
        std::cerr << report.to_text();
        std::cerr << report.violations.size() << " violation(s)\n";
        return kExitValidation;
    }

    auto result = trustnet::run(config);
    auto bundle = trustnet::write_report_bundle(result, out_dir);
    trustnet::print_summary(result, std::cout);
    std::cout << "wrote " << bundle.trust_timeseries.string() << "\n";
    std::cout << "wrote " << bundle.task_log.string() << "\n";
    std::cout << "wrote " << bundle.summary.string() << "\n";
    return kExitOk;
}

struct EvidenceLine {
    trustnet::UncertaintyFacet facet;
    trustnet::Observation observation;
    std::optional<double> weight;
};

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Evidence lines: "<source> | <kind> | <samples or label> [| weight]".
// Sources are matched by canonical name or id; the facet is the decomposed
// facet of the requested kind.
std::vector<EvidenceLine> parse_evidence(const std::string& text,
                                         const trustnet::ScenarioConfig& config) {
    std::vector<EvidenceLine> lines;
    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto fail = [&](const std::string& message) -> trustnet::parse_error {
            return trustnet::parse_error("line " + std::to_string(line_no) + ": " + message);
        };

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            auto bar = line.find('|', start);
            fields.push_back(trim(line.substr(start, bar - start)));
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
        if (fields.size() < 3 || fields.size() > 4)
            throw fail("expected '<source> | <kind> | <payload> [| weight]'");

        const trustnet::UncertaintySource* source = nullptr;
        for (const auto& s : config.sources)
            if (s.name == fields[0] || s.id == fields[0]) source = &s;
        if (!source) throw fail("unknown uncertainty source '" + fields[0] + "'");

        auto kind = trustnet::parse_facet_kind(fields[1]);
        if (!kind) throw fail("kind must be 'aleatoric' or 'epistemic'");

        const trustnet::UncertaintyFacet* facet = nullptr;
        for (const auto& f : config.facets)
            if (f.source_id == source->id && f.kind == *kind) facet = &f;
        if (!facet)
            throw fail("source '" + source->name + "' has no " + fields[1] + " facet");

        std::optional<double> weight;
        if (fields.size() == 4) {
            try {
                weight = std::stod(fields[3]);
            } catch (const std::exception&) {
                throw fail("weight '" + fields[3] + "' is not a number");
            }
            if (!(*weight > 0.0)) throw fail("weight must be positive");
        }

        try {
            if (*kind == trustnet::FacetKind::Aleatoric) {
                trustnet::QuantSamples samples;
                std::istringstream values(fields[2]);
                std::string token;
                while (values >> token) samples.values.push_back(std::stod(token));
                if (samples.values.empty()) throw fail("no samples given");
                lines.push_back({*facet, trustnet::Observation(*facet, std::move(samples)),
                                 weight});
            } else {
                lines.push_back({*facet,
                                 trustnet::Observation(*facet, trustnet::QualLabel{fields[2]},
                                                       config.term_set),
                                 weight});
            }
        } catch (const trustnet::parse_error&) {
            throw;
        } catch (const std::exception& e) {
            throw fail(e.what());
        }
    }
    return lines;
}

int cmd_trust(const std::string& path, const std::string& scenario_path, std::uint64_t seed) {
    trustnet::ScenarioConfig config; // canonical defaults unless a scenario is given
    try {
        if (!scenario_path.empty()) config = load_scenario(scenario_path);
    } catch (const trustnet::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }

    std::vector<EvidenceLine> lines;
    try {
        lines = parse_evidence(read_file(path), config);
    } catch (const trustnet::parse_error& e) {
        std::cerr << "evidence error: " << e.what() << "\n";
        return kExitParse;
    }
    if (lines.empty()) {
        std::cerr << "evidence error: no observations\n";
        return kExitParse;
    }

    trustnet::QuantifierConfig quantifier;
    try {
        quantifier.rulebase = trustnet::build_rulebase(config.fuzzy);
    } catch (const trustnet::error& e) {
        std::cerr << "fuzzy configuration invalid: " << e.what() << "\n";
        return kExitValidation;
    }
    quantifier.fuzzy_resolution = config.fuzzy.resolution;
    quantifier.montecarlo = config.montecarlo;
    quantifier.montecarlo.rng_seed = trustnet::derive_seed(seed, "cli-trust");

    trustnet::UncertaintySet evidence;
    std::vector<trustnet::UncertaintyFacet> facets;
    for (const auto& line : lines) {
        evidence.add(line.facet, line.observation);
        facets.push_back(line.facet);
    }

    trustnet::WeightSet weights =
        trustnet::weights_for(facets, config.sources, config.weight_overrides);
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines[i].weight) weights.weights[i] = *lines[i].weight;

    auto q = trustnet::black_box_1(evidence, quantifier);
    auto rating = trustnet::black_box_2(q, weights);

    std::cout << "facet | kind | q | w\n";
    for (std::size_t i = 0; i < q.size(); ++i) {
        const auto& entry = q.entries()[i];
        std::cout << entry.facet.id << " | " << trustnet::to_string(entry.facet.kind) << " | "
                  << trustnet::format_fixed(entry.certainty) << " | "
                  << trustnet::format_fixed(weights.weights[i]);
        if (entry.fallback) std::cout << " | fallback";
        std::cout << "\n";
    }
    std::cout << "Q = [";
    for (std::size_t i = 0; i < q.size(); ++i)
        std::cout << (i ? ", " : "") << trustnet::format_fixed(q.entries()[i].certainty);
    std::cout << "]\n";
    std::cout << "W = [";
    for (std::size_t i = 0; i < weights.size(); ++i)
        std::cout << (i ? ", " : "") << trustnet::format_fixed(weights.weights[i]);
    std::cout << "]\n";
    std::cout << "T = " << trustnet::format_fixed(rating.value) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trust management under uncertainty for clustered networks"};
    app.require_subcommand(1);

    std::string scenario_path, evidence_path, out_dir = "report", trust_scenario;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> rounds_override;
    std::uint64_t trust_seed = 1;

    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("scenario", scenario_path, "scenario JSON file")->required();

    auto* simulate = app.add_subcommand("simulate", "run a scenario and write the report bundle");
    simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("--seed", seed_override, "override the master seed");
    simulate->add_option("--rounds", rounds_override, "override the round count");
    simulate->add_option("--out", out_dir, "output directory (default: report)");

    auto* trust = app.add_subcommand("trust", "rate one node from an evidence file");
    trust->add_option("evidence", evidence_path, "evidence file")->required();
    trust->add_option("--scenario", trust_scenario, "scenario supplying taxonomy/weights");
    trust->add_option("--seed", trust_seed, "seed for the bootstrap streams");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (validate->parsed()) return cmd_validate(scenario_path);
        if (simulate->parsed())
            return cmd_simulate(scenario_path, seed_override, rounds_override, out_dir);
        if (trust->parsed()) return cmd_trust(evidence_path, trust_scenario, trust_seed);
    } catch (const trustnet::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}
