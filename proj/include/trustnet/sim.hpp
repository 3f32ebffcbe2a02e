#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trustnet/dag.hpp"
#include "trustnet/error.hpp"
#include "trustnet/ledger.hpp"
#include "trustnet/rng.hpp"
#include "trustnet/scenario.hpp"
#include "trustnet/trust.hpp"

namespace trustnet {

struct TimeseriesRow {
    int round = 0;
    NodeId node;
    ClusterId cluster;
    std::optional<double> rolling_average; // empty until the node has evidence
    std::size_t count = 0;
    bool is_coordinator = false;
};

struct CoordinatorSample {
    int round = 0;
    ClusterId cluster;
    NodeId node;
    bool bootstrap = false;
};

enum class TaskStatus { Assigned, Refused, RoutingError };

inline std::string_view to_string(TaskStatus s) {
    switch (s) {
        case TaskStatus::Assigned: return "assigned";
        case TaskStatus::Refused: return "refused";
        case TaskStatus::RoutingError: return "routing_error";
    }
    return "?";
}

struct TaskOutcome {
    int round = 0;
    std::string task_id;
    TaskStatus status = TaskStatus::Refused;
    std::vector<NodeId> workers; // highest rolling average first
    std::string detail;
};

struct SimulationReport {
    std::vector<TimeseriesRow> trust_table;            // post-sync state, per round per node
    std::vector<CoordinatorSample> coordinator_timeline; // per round per cluster
    std::vector<TaskOutcome> task_log;
    std::vector<TrustRecord> evaluations;              // audit trail of every rating produced
    std::vector<std::size_t> divergence_by_round;      // replicas disagreeing after sync; all zero
    std::map<NodeId, double> final_rolling;            // nodes with evidence only
    std::map<NodeId, std::size_t> final_count;
    std::map<NodeId, double> final_reliability;        // latent ground truth at end of run
    std::size_t fallback_entries = 0;                  // neutral 0.5 substitutions by the quantifiers
    double rank_correlation = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t seed = 0;
    ScenarioConfig config;

    std::size_t total_divergence() const {
        return std::accumulate(divergence_by_round.begin(), divergence_by_round.end(),
                               std::size_t{0});
    }
};

// Average ranks (1-based, ties averaged) of v.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

inline double spearman_rank_correlation(const std::vector<double>& x,
                                        const std::vector<double>& y) {
    if (x.size() != y.size()) throw contract_error("rank correlation needs equal-length series");
    const std::size_t n = x.size();
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    auto rx = average_ranks(x), ry = average_ranks(y);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return cov / std::sqrt(vx * vy);
}

// Deterministic round-based driver. Every random draw comes from a stream
// keyed by (master seed, purpose, ids, round), so the whole report is a pure
// function of the scenario document.
class Simulation {
public:
    explicit Simulation(ScenarioConfig config) : config_(std::move(config)) {
        auto report = validate(config_);
        if (!report.ok())
            throw contract_error("scenario config invalid:\n" + report.to_text());

        quantifier_.rulebase = build_rulebase(config_.fuzzy);
        quantifier_.fuzzy_resolution = config_.fuzzy.resolution;
        quantifier_.montecarlo = config_.montecarlo;

        for (const auto& id : config_.effective_observed_facets())
            observed_.push_back(*config_.find_facet(id));
        if (!observed_.empty())
            weights_ = weights_for(observed_, config_.sources, config_.weight_overrides);

        for (const auto& spec : config_.clusters) add_cluster(spec, std::nullopt);
        for (const auto& edge : config_.edges) dag_.add_edge(edge[0], edge[1]);

        for (const auto& p : config_.preseed)
            for (auto& [id, replica] : replicas_) replica.preseed(p.node, p.rating, p.count);
    }

    SimulationReport run() {
        SimulationReport report;
        report.seed = config_.sim.seed;
        report.config = config_;

        for (int round = 1; round <= config_.sim.rounds; ++round) {
            // topology grows between rounds
            for (const auto& attach : config_.attaches)
                if (attach.round == round) apply_attach(attach);

            run_interactions(round, report);
            report.divergence_by_round.push_back(sync_and_audit());
            elect_and_record(round, report);

            // scheduled tasks and faults close the round; a fault shows up in
            // observations from the next round on
            for (const auto& task : config_.tasks)
                if (task.round == round) report.task_log.push_back(assign_task(task));
            for (const auto& fault : config_.faults)
                if (fault.round == round) inject_fault(fault);
        }

        finalize(report);
        return report;
    }

    // One mutual evaluation between cluster peers: each side observes the
    // other's behaviour across the configured facets and rates it.
    std::pair<TrustRecord, TrustRecord> communication_round(const NodeId& a, const NodeId& b,
                                                            int round) {
        if (a == b) throw contract_error("a node cannot hold a communication round with itself");
        const auto* home_a = dag_.home_of(a);
        const auto* home_b = dag_.home_of(b);
        if (!home_a || !home_b) throw contract_error("communication_round: unknown node");
        if (*home_a != *home_b)
            throw contract_error("nodes '" + a + "' and '" + b + "' are not cluster peers");
        return {rate(b, a, round), rate(a, b, round)};
    }

    // Evidence about `about`, gathered by `evaluator`: per observed facet,
    // either noisy measurements (spread scales with 1 - reliability) or a
    // linguistic label drawn from a reliability-tilted distribution.
    UncertaintySet generate_evidence(const NodeId& about, const NodeId& evaluator, int round) {
        const double r = profiles_.at(about).reliability;
        Rng rng(derive_seed(config_.sim.seed, "obs", about, evaluator,
                            static_cast<std::uint64_t>(round)));
        UncertaintySet evidence;
        for (const auto& facet : observed_) {
            if (facet.kind == FacetKind::Aleatoric) {
                QuantSamples samples;
                samples.unit = "au";
                double spread = config_.montecarlo.dispersion_cap * (1.0 - r);
                for (int i = 0; i < config_.sim.samples_per_observation; ++i)
                    samples.values.push_back(rng.next_normal(1.0, spread));
                evidence.add(facet, Observation(facet, std::move(samples)));
            } else {
                // P(Low) = r, P(Medium) = r(1-r), P(High) = (1-r)^2
                double u = rng.next_double();
                const auto& terms = config_.term_set;
                std::string label = terms.back();
                if (u < r)
                    label = terms.front();
                else if (u < r + r * (1.0 - r) && terms.size() > 1)
                    label = terms[terms.size() / 2];
                evidence.add(facet, Observation(facet, QualLabel{label}, config_.term_set));
            }
        }
        return evidence;
    }

    // Trust-gated workload distribution: workers are the top-k mature members
    // at or above the threshold; cross-cluster tasks must follow a DAG edge.
    TaskOutcome assign_task(const TaskSpec& task) {
        TaskOutcome out;
        out.round = task.round;
        out.task_id = task.id;

        const auto& cluster = dag_.cluster(task.cluster);
        const auto& replica = replicas_.at(task.cluster);
        Coordinator coordinator =
            coordinator_of(replica, cluster.members, config_.sim.maturity);
        out.detail = "coordinator=" + coordinator.node;
        if (coordinator.bootstrap) out.detail += " (bootstrap)";

        if (task.partner) {
            auto targets = delegation_targets(dag_, task.cluster);
            if (std::find(targets.begin(), targets.end(), *task.partner) == targets.end()) {
                out.status = TaskStatus::RoutingError;
                out.detail += "; partner '" + *task.partner + "' is not a delegation target";
                return out;
            }
            const auto& partner_cluster = dag_.cluster(*task.partner);
            Coordinator partner_coordinator = coordinator_of(
                replicas_.at(*task.partner), partner_cluster.members, config_.sim.maturity);
            out.detail += "; partner_coordinator=" + partner_coordinator.node;
            if (partner_coordinator.bootstrap) out.detail += " (bootstrap)";
        }

        std::vector<std::pair<double, NodeId>> eligible;
        for (const auto& node : cluster.members) {
            const auto* entry = replica.find(node);
            if (!entry || entry->count < config_.sim.maturity || entry->history.empty()) continue;
            double avg = entry->rolling_average();
            if (avg >= config_.sim.threshold) eligible.emplace_back(avg, node);
        }
        std::sort(eligible.begin(), eligible.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });

        if (eligible.size() < static_cast<std::size_t>(task.workers)) {
            out.status = TaskStatus::Refused;
            out.detail += "; only " + std::to_string(eligible.size()) + " of " +
                          std::to_string(task.workers) + " eligible workers";
            return out;
        }
        out.status = TaskStatus::Assigned;
        for (int i = 0; i < task.workers; ++i) out.workers.push_back(eligible[i].second);
        return out;
    }

    void inject_fault(const FaultSpec& fault) {
        auto& profile = profiles_.at(fault.node);
        if (fault.effect == FaultEffect::DegradeReliability)
            profile.reliability = std::clamp(profile.reliability - fault.delta, 0.0, 1.0);
        else
            profile.reliability = profile.baseline;
    }

    const ClusterDag& dag() const { return dag_; }
    const std::map<ClusterId, LedgerReplica>& replicas() const { return replicas_; }
    const std::map<NodeId, ReliabilityProfile>& profiles() const { return profiles_; }
    const WeightSet& weights() const { return weights_; }

private:
    TrustRecord rate(const NodeId& evaluator, const NodeId& evaluated, int round) {
        UncertaintySet evidence = generate_evidence(evaluated, evaluator, round);
        QuantifierConfig qc = quantifier_;
        qc.montecarlo.rng_seed = derive_seed(config_.sim.seed, "mc", evaluated, evaluator,
                                             static_cast<std::uint64_t>(round));
        CertaintyVector certainties = black_box_1(evidence, qc);
        for (const auto& entry : certainties.entries())
            if (entry.fallback) ++fallback_entries_;
        TrustRating rating = black_box_2(certainties, weights_);
        return TrustRecord{evaluated, evaluator, round, rating.value};
    }

    void add_cluster(const ClusterSpec& spec, std::optional<std::size_t> attach_fanout) {
        Cluster cluster{spec.id, {}};
        for (const auto& m : spec.members) {
            cluster.members.push_back(m.id);
            profiles_[m.id] = ReliabilityProfile{m.reliability, m.reliability};
        }
        if (!attach_fanout) {
            dag_.add_cluster(std::move(cluster));
        } else {
            std::map<ClusterId, double> means;
            for (const auto& [id, c] : dag_.clusters())
                means[id] = cluster_mean_trust(replicas_.at(id), c);
            attach_cluster(dag_, std::move(cluster), means, *attach_fanout);
        }
        if (replicas_.empty()) {
            replicas_.emplace(spec.id, LedgerReplica(spec.id, config_.sim.window));
        } else {
            replicas_.emplace(spec.id, replicas_.begin()->second.fork(spec.id));
        }
    }

    void apply_attach(const AttachSpec& attach) { add_cluster(attach.cluster, attach.fanout); }

    void run_interactions(int round, SimulationReport& report) {
        if (config_.sim.interactions_per_round <= 0) return;
        for (auto& [cluster_id, replica] : replicas_) {
            const auto& members = dag_.cluster(cluster_id).members;
            const std::size_t n = members.size();
            if (n < 2) continue;
            Rng rng(derive_seed(config_.sim.seed, "pairs", cluster_id,
                                static_cast<std::uint64_t>(round)));
            for (int t = 0; t < config_.sim.interactions_per_round; ++t) {
                std::size_t i = rng.next_index(n);
                std::size_t j = rng.next_index(n - 1);
                if (j >= i) ++j;
                auto [about_i, about_j] = communication_round(members[i], members[j], round);
                replica.record_evaluation(about_i);
                replica.record_evaluation(about_j);
                report.evaluations.push_back(about_i);
                report.evaluations.push_back(about_j);
            }
        }
    }

    std::size_t sync_and_audit() {
        std::vector<LedgerReplica*> all;
        all.reserve(replicas_.size());
        for (auto& [id, replica] : replicas_) all.push_back(&replica);
        sync_replicas(all);
        std::size_t divergent = 0;
        if (!all.empty()) {
            std::string reference = all.front()->serialize();
            for (std::size_t i = 1; i < all.size(); ++i)
                if (all[i]->serialize() != reference) ++divergent;
        }
        return divergent;
    }

    void elect_and_record(int round, SimulationReport& report) {
        for (const auto& [cluster_id, replica] : replicas_) {
            const auto& members = dag_.cluster(cluster_id).members;
            Coordinator coordinator = coordinator_of(replica, members, config_.sim.maturity);
            report.coordinator_timeline.push_back(
                {round, cluster_id, coordinator.node, coordinator.bootstrap});
            for (const auto& node : members) {
                TimeseriesRow row;
                row.round = round;
                row.node = node;
                row.cluster = cluster_id;
                const auto* entry = replica.find(node);
                if (entry && !entry->history.empty()) {
                    row.rolling_average = entry->rolling_average();
                    row.count = entry->count;
                } else if (entry) {
                    row.count = entry->count;
                }
                row.is_coordinator = node == coordinator.node;
                report.trust_table.push_back(std::move(row));
            }
        }
    }

    void finalize(SimulationReport& report) {
        report.fallback_entries = fallback_entries_;
        if (!replicas_.empty()) {
            const auto& reference = replicas_.begin()->second;
            for (const auto& [node, entry] : reference.entries()) {
                if (!profiles_.count(node)) continue;
                report.final_count[node] = entry.count;
                if (!entry.history.empty()) report.final_rolling[node] = entry.rolling_average();
            }
        }
        for (const auto& [node, profile] : profiles_)
            report.final_reliability[node] = profile.reliability;

        std::vector<double> reliability, trust;
        for (const auto& [node, avg] : report.final_rolling) {
            reliability.push_back(profiles_.at(node).reliability);
            trust.push_back(avg);
        }
        if (reliability.size() >= 2)
            report.rank_correlation = spearman_rank_correlation(reliability, trust);
    }

    ScenarioConfig config_;
    QuantifierConfig quantifier_;
    std::map<NodeId, ReliabilityProfile> profiles_;
    ClusterDag dag_;
    std::map<ClusterId, LedgerReplica> replicas_;
    std::vector<UncertaintyFacet> observed_;
    WeightSet weights_;
    std::size_t fallback_entries_ = 0;
};

inline SimulationReport run(ScenarioConfig config) {
    return Simulation(std::move(config)).run();
}

} // namespace trustnet
