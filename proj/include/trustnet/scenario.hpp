#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "trustnet/dag.hpp"
#include "trustnet/error.hpp"
#include "trustnet/fuzzy.hpp"
#include "trustnet/montecarlo.hpp"
#include "trustnet/trust.hpp"
#include "trustnet/uncertainty.hpp"

namespace trustnet {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Raw scenario data. Everything here is plain values so a parsed document can
// be re-serialized losslessly; heavier objects (RuleBase, ClusterDag) are
// materialized after validation.
// ---------------------------------------------------------------------------

struct TermSpec {
    std::string name;
    std::string shape; // "triangle" | "trapezoid"
    std::vector<double> params;

    bool operator==(const TermSpec&) const = default;
};

struct VariableSpec {
    std::string name;
    double lo = 0.0, hi = 1.0;
    std::vector<TermSpec> terms;

    bool operator==(const VariableSpec&) const = default;
};

struct FuzzySpec {
    int resolution = 1001;
    std::vector<VariableSpec> inputs;
    VariableSpec output;
    std::vector<FuzzyRule> rules;

    bool operator==(const FuzzySpec&) const = default;
};

struct NodeSpec {
    NodeId id;
    double reliability = 0.9;

    bool operator==(const NodeSpec&) const = default;
};

struct ClusterSpec {
    ClusterId id;
    std::vector<NodeSpec> members;

    bool operator==(const ClusterSpec&) const = default;
};

struct TaskSpec {
    int round = 1;
    std::string id;
    ClusterId cluster;
    int workers = 1;
    std::optional<ClusterId> partner; // cross-cluster collaboration target

    bool operator==(const TaskSpec&) const = default;
};

enum class FaultEffect { DegradeReliability, RestoreReliability };

struct FaultSpec {
    int round = 1;
    NodeId node;
    FaultEffect effect = FaultEffect::DegradeReliability;
    double delta = 0.0; // degrade only

    bool operator==(const FaultSpec&) const = default;
};

struct AttachSpec {
    int round = 1;
    ClusterSpec cluster;
    std::size_t fanout = 2;

    bool operator==(const AttachSpec&) const = default;
};

struct PreseedSpec {
    NodeId node;
    double rating = 0.5;
    std::size_t count = 1;

    bool operator==(const PreseedSpec&) const = default;
};

struct SimulationParams {
    int rounds = 1;
    int interactions_per_round = 0;
    std::size_t maturity = 10;       // lifetime evaluations before a node counts as mature
    std::size_t window = 20;         // rolling-average window H
    double threshold = 0.5;          // minimum rolling average for task eligibility
    std::uint64_t seed = 1;          // master seed; every stream derives from it
    int samples_per_observation = 8; // quantitative samples generated per facet

    bool operator==(const SimulationParams&) const = default;
};

inline FuzzySpec fuzzy_spec_of(const RuleBase& rulebase, int resolution = 1001) {
    auto variable_spec = [](const LinguisticVariable& v) {
        VariableSpec spec{v.name(), v.lo(), v.hi(), {}};
        for (const auto& [term, mf] : v.terms())
            spec.terms.push_back({term, mf.is_trapezoid() ? "trapezoid" : "triangle",
                                  mf.parameters()});
        return spec;
    };
    FuzzySpec spec;
    spec.resolution = resolution;
    for (const auto& v : rulebase.inputs()) spec.inputs.push_back(variable_spec(v));
    spec.output = variable_spec(rulebase.output());
    spec.rules = rulebase.rules();
    return spec;
}

inline MembershipFunction build_membership(const TermSpec& term) {
    if (term.shape == "triangle") {
        if (term.params.size() != 3)
            throw input_error("term '" + term.name + "': triangle needs 3 parameters");
        return MembershipFunction::triangular(term.params[0], term.params[1], term.params[2]);
    }
    if (term.shape == "trapezoid") {
        if (term.params.size() != 4)
            throw input_error("term '" + term.name + "': trapezoid needs 4 parameters");
        return MembershipFunction::trapezoidal(term.params[0], term.params[1], term.params[2],
                                               term.params[3]);
    }
    throw input_error("term '" + term.name + "': unknown shape '" + term.shape + "'");
}

inline LinguisticVariable build_variable(const VariableSpec& spec) {
    std::vector<std::pair<std::string, MembershipFunction>> terms;
    for (const auto& t : spec.terms) terms.emplace_back(t.name, build_membership(t));
    return LinguisticVariable(spec.name, spec.lo, spec.hi, std::move(terms));
}

inline RuleBase build_rulebase(const FuzzySpec& spec) {
    std::vector<LinguisticVariable> inputs;
    for (const auto& v : spec.inputs) inputs.push_back(build_variable(v));
    return RuleBase(std::move(inputs), build_variable(spec.output), spec.rules);
}

// ---------------------------------------------------------------------------
// The scenario document.
// ---------------------------------------------------------------------------

struct ScenarioConfig {
    std::vector<UncertaintySource> sources = canonical_taxonomy();
    std::vector<UncertaintyFacet> facets = decompose(canonical_taxonomy());
    std::vector<std::string> term_set = default_term_set();

    FuzzySpec fuzzy = fuzzy_spec_of(default_rule_base());

    MonteCarloConfig montecarlo{10'000, 0, 1.0}; // rng_seed stays 0; streams derive from sim.seed

    std::map<std::string, double> weight_overrides; // source name -> weight

    std::vector<ClusterSpec> clusters;
    std::vector<std::array<ClusterId, 2>> edges;
    std::vector<std::string> observed_facets; // empty means: every declared facet

    SimulationParams sim;

    std::vector<TaskSpec> tasks;
    std::vector<FaultSpec> faults;
    std::vector<AttachSpec> attaches;
    std::vector<PreseedSpec> preseed;

    bool operator==(const ScenarioConfig&) const = default;

    std::vector<std::string> effective_observed_facets() const {
        if (!observed_facets.empty()) return observed_facets;
        std::vector<std::string> ids;
        ids.reserve(facets.size());
        for (const auto& f : facets) ids.push_back(f.id);
        return ids;
    }

    const UncertaintyFacet* find_facet(const std::string& id) const {
        for (const auto& f : facets)
            if (f.id == id) return &f;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Validation. Collects every problem instead of stopping at the first.
// ---------------------------------------------------------------------------

struct ConfigViolation {
    std::string code;
    std::string subject;
    std::string message;
};

struct ValidationReport {
    std::vector<ConfigViolation> violations;
    bool ok() const { return violations.empty(); }

    std::string to_text() const {
        std::string out;
        for (const auto& v : violations)
            out += v.code + " [" + v.subject + "]: " + v.message + "\n";
        return out;
    }
};

inline ValidationReport validate(const ScenarioConfig& config) {
    ValidationReport report;
    auto flag = [&](std::string code, std::string subject, std::string message) {
        report.violations.push_back({std::move(code), std::move(subject), std::move(message)});
    };
    // ids end up in CSV cells and ';'-joined worker lists
    auto check_id = [&](const std::string& id, const char* what) {
        if (id.find_first_of(",;|\n\r") != std::string::npos)
            flag("id-chars", id, std::string(what) + " id contains a reserved separator");
    };

    // taxonomy
    for (const auto& v : validate_scenario_taxonomy(config.sources, config.facets).violations)
        report.violations.push_back({v.code, v.subject, v.message});
    if (config.term_set.empty()) flag("term-set-empty", "taxonomy", "no linguistic terms declared");

    // fuzzy rule base
    if (config.fuzzy.resolution < 1)
        flag("fuzzy-resolution", "fuzzy", "defuzzification resolution must be >= 1");
    try {
        RuleBase rulebase = build_rulebase(config.fuzzy);
        if (rulebase.inputs().size() != 1)
            flag("fuzzy-inputs", "fuzzy",
                 "the qualitative pipeline needs exactly one input variable");
        auto gap = rulebase.completeness_gap();
        if (!gap.variable.empty()) {
            std::string at;
            for (double x : gap.point) at += (at.empty() ? "" : ", ") + std::to_string(x);
            flag("fuzzy-coverage", gap.variable,
                 "no rule fires at (" + at + ") for variable '" + gap.variable + "'");
        } else {
            // every declared linguistic term must be a term of the input variable
            const auto& input = rulebase.inputs().front();
            for (const auto& term : config.term_set)
                if (!input.find_term(term))
                    flag("term-unmapped", term,
                         "term '" + term + "' has no membership function in '" + input.name() + "'");
        }
    } catch (const error& e) {
        flag("fuzzy-invalid", "fuzzy", e.what());
    }

    // monte carlo
    try {
        config.montecarlo.validate();
    } catch (const error& e) {
        flag("montecarlo-invalid", "montecarlo", e.what());
    }

    // weight overrides
    for (const auto& [name, weight] : config.weight_overrides) {
        bool known = false;
        for (const auto& s : config.sources) known = known || s.name == name;
        if (!known) flag("weight-unknown-source", name, "weight override for undeclared source");
        if (!(weight > 0.0) || !std::isfinite(weight))
            flag("weight-not-positive", name, "weights must be strictly positive");
    }

    // topology (initial clusters plus scheduled attaches)
    std::map<ClusterId, int> cluster_available_round; // first round the cluster exists
    std::map<NodeId, int> node_available_round;
    auto check_cluster_spec = [&](const ClusterSpec& spec, int available_round) {
        if (spec.id.empty()) flag("cluster-empty-id", spec.id, "cluster has no id");
        check_id(spec.id, "cluster");
        if (spec.members.empty())
            flag("cluster-empty", spec.id, "cluster '" + spec.id + "' has no members");
        if (cluster_available_round.count(spec.id))
            flag("cluster-duplicate", spec.id, "cluster id declared twice");
        cluster_available_round[spec.id] = available_round;
        for (const auto& m : spec.members) {
            check_id(m.id, "node");
            if (node_available_round.count(m.id))
                flag("node-duplicate", m.id, "node '" + m.id + "' declared in two clusters");
            node_available_round[m.id] = available_round;
            if (!(m.reliability >= 0.0 && m.reliability <= 1.0))
                flag("reliability-range", m.id, "reliability must lie in [0,1]");
        }
    };
    for (const auto& c : config.clusters) check_cluster_spec(c, 0);
    for (const auto& a : config.attaches) {
        if (a.round < 1 || a.round > config.sim.rounds)
            flag("attach-round", a.cluster.id, "attach round outside the simulated horizon");
        check_cluster_spec(a.cluster, a.round);
    }

    for (const auto& edge : config.edges) {
        for (const auto& id : edge)
            if (!cluster_available_round.count(id) || cluster_available_round[id] != 0)
                flag("edge-unknown-cluster", id,
                     "edge references cluster '" + id + "' outside the initial topology");
        if (edge[0] == edge[1]) flag("edge-self-loop", edge[0], "self-loop edge");
    }

    // acyclicity of the declared topology
    try {
        ClusterDag dag;
        for (const auto& c : config.clusters) {
            Cluster cluster{c.id, {}};
            for (const auto& m : c.members) cluster.members.push_back(m.id);
            dag.add_cluster(std::move(cluster));
        }
        for (const auto& edge : config.edges) dag.add_edge(edge[0], edge[1]);
        auto acyclicity = validate_acyclic(dag);
        if (!acyclicity.acyclic) {
            std::string cycle;
            for (const auto& id : acyclicity.cycle) cycle += (cycle.empty() ? "" : ", ") + id;
            flag("topology-cycle", cycle, "cluster edges form a cycle: " + cycle);
        }
    } catch (const error&) {
        // duplicate clusters/members were already flagged above
    }

    // observed facets
    for (const auto& id : config.observed_facets)
        if (!config.find_facet(id))
            flag("evidence-unknown-facet", id, "observed facet '" + id + "' is not declared");
    if (config.sim.interactions_per_round > 0 && config.effective_observed_facets().empty())
        flag("evidence-empty", "evidence", "interactions are scheduled but no facet is observed");

    // simulation parameters
    if (config.sim.rounds < 1) flag("sim-rounds", "simulation", "rounds must be >= 1");
    if (config.sim.interactions_per_round < 0)
        flag("sim-interactions", "simulation", "interactions_per_round must be >= 0");
    if (config.sim.window < 1) flag("sim-window", "simulation", "window must be >= 1");
    if (!(config.sim.threshold >= 0.0 && config.sim.threshold <= 1.0))
        flag("sim-threshold", "simulation", "threshold must lie in [0,1]");
    if (config.sim.samples_per_observation < 1)
        flag("sim-samples", "simulation", "samples_per_observation must be >= 1");

    // schedule
    std::set<std::string> task_ids;
    for (const auto& t : config.tasks) {
        check_id(t.id, "task");
        if (!task_ids.insert(t.id).second) flag("task-duplicate", t.id, "task id declared twice");
        if (t.workers < 1) flag("task-workers", t.id, "a task needs at least one worker");
        if (t.round < 1 || t.round > config.sim.rounds)
            flag("task-round", t.id, "task round outside the simulated horizon");
        auto cluster_round = cluster_available_round.find(t.cluster);
        if (cluster_round == cluster_available_round.end())
            flag("task-unknown-cluster", t.id, "task issues from undeclared cluster '" + t.cluster + "'");
        else if (t.round < cluster_round->second)
            flag("task-before-attach", t.id, "task runs before its cluster attaches");
        if (t.partner) {
            auto partner_round = cluster_available_round.find(*t.partner);
            if (partner_round == cluster_available_round.end())
                flag("task-unknown-partner", t.id, "partner cluster '" + *t.partner + "' undeclared");
            else if (t.round < partner_round->second)
                flag("task-before-attach", t.id, "task runs before its partner attaches");
            if (*t.partner == t.cluster)
                flag("task-self-partner", t.id, "partner must be a different cluster");
        }
    }

    for (const auto& f : config.faults) {
        if (f.round < 1 || f.round > config.sim.rounds)
            flag("fault-round", f.node, "fault round outside the simulated horizon");
        auto node_round = node_available_round.find(f.node);
        if (node_round == node_available_round.end())
            flag("fault-unknown-node", f.node, "fault targets undeclared node '" + f.node + "'");
        else if (f.round < node_round->second)
            flag("fault-before-attach", f.node, "fault fires before its node attaches");
        if (f.effect == FaultEffect::DegradeReliability) {
            if (!(f.delta > 0.0) || !std::isfinite(f.delta))
                flag("fault-delta", f.node, "degrade needs a positive delta");
            else if (node_available_round.count(f.node)) {
                // locate the declared baseline and check the step stays in range
                for (const auto& c : config.clusters)
                    for (const auto& m : c.members)
                        if (m.id == f.node && m.reliability - f.delta < 0.0)
                            flag("fault-delta-range", f.node,
                                 "delta pushes reliability below 0");
                for (const auto& a : config.attaches)
                    for (const auto& m : a.cluster.members)
                        if (m.id == f.node && m.reliability - f.delta < 0.0)
                            flag("fault-delta-range", f.node,
                                 "delta pushes reliability below 0");
            }
        }
    }

    for (const auto& p : config.preseed) {
        if (!node_available_round.count(p.node))
            flag("preseed-unknown-node", p.node, "preseed targets undeclared node '" + p.node + "'");
        if (!(p.rating >= 0.0 && p.rating <= 1.0))
            flag("preseed-rating", p.node, "preseed rating out of [0,1]");
        if (p.count < 1) flag("preseed-count", p.node, "preseed count must be >= 1");
    }

    for (const auto& a : config.attaches)
        if (a.cluster.id.empty())
            flag("attach-empty-id", "schedule", "attach event without a cluster id");

    return report;
}

// ---------------------------------------------------------------------------
// JSON (de)serialization.
// ---------------------------------------------------------------------------

namespace detail {

inline const json& require(const json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw parse_error(std::string(where) + ": missing key '" + key + "'");
    return *it;
}

} // namespace detail

inline void to_json(json& j, const TermSpec& t) {
    j = json{{"name", t.name}, {"shape", t.shape}, {"params", t.params}};
}

inline void from_json(const json& j, TermSpec& t) {
    t.name = detail::require(j, "name", "term").get<std::string>();
    t.shape = detail::require(j, "shape", "term").get<std::string>();
    t.params = detail::require(j, "params", "term").get<std::vector<double>>();
}

inline void to_json(json& j, const VariableSpec& v) {
    j = json{{"name", v.name}, {"range", {v.lo, v.hi}}, {"terms", v.terms}};
}

inline void from_json(const json& j, VariableSpec& v) {
    v.name = detail::require(j, "name", "variable").get<std::string>();
    auto range = detail::require(j, "range", "variable").get<std::vector<double>>();
    if (range.size() != 2) throw parse_error("variable '" + v.name + "': range needs [lo, hi]");
    v.lo = range[0];
    v.hi = range[1];
    v.terms = detail::require(j, "terms", "variable").get<std::vector<TermSpec>>();
}

inline void to_json(json& j, const FuzzyRule& r) {
    if (r.antecedents.size() == 1) {
        // the common single-antecedent rule serializes as a (var, term, out) triple
        j = json::array({r.antecedents[0].first, r.antecedents[0].second, r.consequent_term});
        return;
    }
    json when = json::array();
    for (const auto& [var, term] : r.antecedents) when.push_back(json::array({var, term}));
    j = json{{"when", when}, {"then", r.consequent_term}};
}

inline void from_json(const json& j, FuzzyRule& r) {
    r.antecedents.clear();
    if (j.is_array()) {
        if (j.size() != 3 || !j[0].is_string() || !j[1].is_string() || !j[2].is_string())
            throw parse_error("rule triple must be [variable, term, consequent]");
        r.antecedents.emplace_back(j[0].get<std::string>(), j[1].get<std::string>());
        r.consequent_term = j[2].get<std::string>();
        return;
    }
    for (const auto& pair : detail::require(j, "when", "rule")) {
        if (!pair.is_array() || pair.size() != 2)
            throw parse_error("rule antecedent must be [variable, term]");
        r.antecedents.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    r.consequent_term = detail::require(j, "then", "rule").get<std::string>();
}

inline void to_json(json& j, const FuzzySpec& f) {
    j = json{{"resolution", f.resolution},
             {"inputs", f.inputs},
             {"output", f.output},
             {"rules", f.rules}};
}

inline void from_json(const json& j, FuzzySpec& f) {
    f.resolution = j.value("resolution", 1001);
    f.inputs = detail::require(j, "inputs", "fuzzy").get<std::vector<VariableSpec>>();
    f.output = detail::require(j, "output", "fuzzy").get<VariableSpec>();
    f.rules = detail::require(j, "rules", "fuzzy").get<std::vector<FuzzyRule>>();
}

inline void to_json(json& j, const UncertaintySource& s) {
    j = json{{"id", s.id},
             {"name", s.name},
             {"priority", s.priority},
             {"category", std::string(to_string(s.category))}};
}

inline void from_json(const json& j, UncertaintySource& s) {
    s.id = detail::require(j, "id", "source").get<std::string>();
    s.name = j.value("name", s.id);
    s.priority = detail::require(j, "priority", "source").get<int>();
    auto category = detail::require(j, "category", "source").get<std::string>();
    auto parsed = parse_category(category);
    if (!parsed)
        throw parse_error("source '" + s.id + "': unknown category '" + category + "'");
    s.category = *parsed;
}

inline void to_json(json& j, const UncertaintyFacet& f) {
    j = json{{"id", f.id},
             {"source", f.source_id},
             {"kind", std::string(to_string(f.kind))},
             {"name", f.name}};
}

inline void from_json(const json& j, UncertaintyFacet& f) {
    f.id = detail::require(j, "id", "facet").get<std::string>();
    f.source_id = detail::require(j, "source", "facet").get<std::string>();
    auto kind = detail::require(j, "kind", "facet").get<std::string>();
    auto parsed = parse_facet_kind(kind);
    if (!parsed) throw parse_error("facet '" + f.id + "': unknown kind '" + kind + "'");
    f.kind = *parsed;
    f.name = j.value("name", f.id);
}

inline void to_json(json& j, const NodeSpec& n) {
    j = json{{"id", n.id}, {"reliability", n.reliability}};
}

inline void from_json(const json& j, NodeSpec& n) {
    n.id = detail::require(j, "id", "node").get<std::string>();
    n.reliability = j.value("reliability", 0.9);
}

inline void to_json(json& j, const ClusterSpec& c) {
    j = json{{"id", c.id}, {"members", c.members}};
}

inline void from_json(const json& j, ClusterSpec& c) {
    c.id = detail::require(j, "id", "cluster").get<std::string>();
    c.members = detail::require(j, "members", "cluster").get<std::vector<NodeSpec>>();
}

inline void to_json(json& j, const TaskSpec& t) {
    j = json{{"round", t.round}, {"id", t.id}, {"cluster", t.cluster}, {"workers", t.workers}};
    if (t.partner) j["partner"] = *t.partner;
}

inline void from_json(const json& j, TaskSpec& t) {
    t.round = detail::require(j, "round", "task").get<int>();
    t.id = detail::require(j, "id", "task").get<std::string>();
    t.cluster = detail::require(j, "cluster", "task").get<std::string>();
    t.workers = j.value("workers", 1);
    if (j.contains("partner")) t.partner = j["partner"].get<std::string>();
    else t.partner.reset();
}

inline void to_json(json& j, const FaultSpec& f) {
    j = json{{"round", f.round},
             {"node", f.node},
             {"effect", f.effect == FaultEffect::DegradeReliability ? "degrade" : "restore"}};
    if (f.effect == FaultEffect::DegradeReliability) j["delta"] = f.delta;
}

inline void from_json(const json& j, FaultSpec& f) {
    f.round = detail::require(j, "round", "fault").get<int>();
    f.node = detail::require(j, "node", "fault").get<std::string>();
    auto effect = detail::require(j, "effect", "fault").get<std::string>();
    if (effect == "degrade") {
        f.effect = FaultEffect::DegradeReliability;
        f.delta = detail::require(j, "delta", "fault").get<double>();
    } else if (effect == "restore") {
        f.effect = FaultEffect::RestoreReliability;
        f.delta = 0.0;
    } else {
        throw parse_error("fault on '" + f.node + "': unknown effect '" + effect + "'");
    }
}

inline void to_json(json& j, const AttachSpec& a) {
    j = json{{"round", a.round}, {"cluster", a.cluster}, {"fanout", a.fanout}};
}

inline void from_json(const json& j, AttachSpec& a) {
    a.round = detail::require(j, "round", "attach").get<int>();
    a.cluster = detail::require(j, "cluster", "attach").get<ClusterSpec>();
    a.fanout = j.value("fanout", std::size_t{2});
}

inline void to_json(json& j, const PreseedSpec& p) {
    j = json{{"node", p.node}, {"rating", p.rating}, {"count", p.count}};
}

inline void from_json(const json& j, PreseedSpec& p) {
    p.node = detail::require(j, "node", "preseed").get<std::string>();
    p.rating = detail::require(j, "rating", "preseed").get<double>();
    p.count = j.value("count", std::size_t{1});
}

inline void to_json(json& j, const SimulationParams& s) {
    j = json{{"rounds", s.rounds},
             {"interactions_per_round", s.interactions_per_round},
             {"maturity", s.maturity},
             {"window", s.window},
             {"threshold", s.threshold},
             {"seed", s.seed},
             {"samples_per_observation", s.samples_per_observation}};
}

inline void from_json(const json& j, SimulationParams& s) {
    s.rounds = detail::require(j, "rounds", "simulation").get<int>();
    s.interactions_per_round = j.value("interactions_per_round", 0);
    s.maturity = j.value("maturity", std::size_t{10});
    s.window = j.value("window", std::size_t{20});
    s.threshold = j.value("threshold", 0.5);
    s.seed = j.value("seed", std::uint64_t{1});
    s.samples_per_observation = j.value("samples_per_observation", 8);
}

inline void to_json(json& j, const ScenarioConfig& c) {
    j = json{
        {"taxonomy",
         {{"sources", c.sources}, {"facets", c.facets}, {"terms", c.term_set}}},
        {"fuzzy", c.fuzzy},
        {"montecarlo",
         {{"trials", c.montecarlo.trials}, {"dispersion_cap", c.montecarlo.dispersion_cap}}},
        {"weights", c.weight_overrides},
        {"topology", {{"clusters", c.clusters}, {"edges", c.edges}}},
        {"evidence", c.observed_facets},
        {"simulation", c.sim},
        {"schedule", {{"tasks", c.tasks}, {"faults", c.faults}, {"attaches", c.attaches}}},
        {"ledger_preseed", c.preseed},
    };
}

inline void from_json(const json& j, ScenarioConfig& c) {
    c = ScenarioConfig{};
    if (j.contains("taxonomy")) {
        const auto& t = j["taxonomy"];
        if (t.contains("sources")) c.sources = t["sources"].get<std::vector<UncertaintySource>>();
        if (t.contains("facets")) c.facets = t["facets"].get<std::vector<UncertaintyFacet>>();
        else c.facets = decompose(c.sources);
        if (t.contains("terms")) c.term_set = t["terms"].get<std::vector<std::string>>();
    }
    if (j.contains("fuzzy")) c.fuzzy = j["fuzzy"].get<FuzzySpec>();
    if (j.contains("montecarlo")) {
        const auto& m = j["montecarlo"];
        c.montecarlo.trials = m.value("trials", 10'000);
        c.montecarlo.dispersion_cap = m.value("dispersion_cap", 1.0);
    }
    if (j.contains("weights"))
        c.weight_overrides = j["weights"].get<std::map<std::string, double>>();
    if (j.contains("topology")) {
        const auto& t = j["topology"];
        if (t.contains("clusters")) c.clusters = t["clusters"].get<std::vector<ClusterSpec>>();
        if (t.contains("edges")) {
            c.edges.clear();
            for (const auto& e : t["edges"]) {
                if (!e.is_array() || e.size() != 2)
                    throw parse_error("topology edge must be [from, to]");
                c.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
            }
        }
    }
    if (j.contains("evidence"))
        c.observed_facets = j["evidence"].get<std::vector<std::string>>();
    if (j.contains("simulation")) c.sim = j["simulation"].get<SimulationParams>();
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        if (s.contains("tasks")) c.tasks = s["tasks"].get<std::vector<TaskSpec>>();
        if (s.contains("faults")) c.faults = s["faults"].get<std::vector<FaultSpec>>();
        if (s.contains("attaches")) c.attaches = s["attaches"].get<std::vector<AttachSpec>>();
    }
    if (j.contains("ledger_preseed"))
        c.preseed = j["ledger_preseed"].get<std::vector<PreseedSpec>>();
}

inline ScenarioConfig parse_scenario(const std::string& text) {
    try {
        return json::parse(text).get<ScenarioConfig>();
    } catch (const json::exception& e) {
        throw parse_error(std::string("scenario: ") + e.what());
    }
}

inline std::string serialize_scenario(const ScenarioConfig& config) {
    return json(config).dump(2) + "\n";
}

} // namespace trustnet
