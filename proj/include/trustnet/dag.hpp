#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "trustnet/error.hpp"
#include "trustnet/ledger.hpp"

namespace trustnet {

// Latent ground truth driving a node's observable behaviour. reliability is
// the live value; baseline is what RestoreReliability returns it to.
struct ReliabilityProfile {
    double reliability = 0.9;
    double baseline = 0.9;

    void validate() const {
        if (!(reliability >= 0.0 && reliability <= 1.0) || !(baseline >= 0.0 && baseline <= 1.0))
            throw input_error("reliability must lie in [0,1]");
    }

    bool operator==(const ReliabilityProfile&) const = default;
};

struct NetNode {
    NodeId id;
    ClusterId cluster_id;
    ReliabilityProfile profile;
    bool capable = true; // all nodes are assumed provisioned for evaluation duty

    bool operator==(const NetNode&) const = default;
};

// A peer-to-peer group: any member may talk to any member, no hierarchy.
struct Cluster {
    ClusterId id;
    std::vector<NodeId> members; // kept sorted, unique

    bool operator==(const Cluster&) const = default;
};

struct DagEdge {
    ClusterId from, to;

    auto operator<=>(const DagEdge&) const = default;
};

struct AcyclicityReport {
    bool acyclic = false;
    std::vector<ClusterId> topological_order; // filled when acyclic
    std::vector<ClusterId> cycle;             // vertices of a found cycle otherwise
};

// Clusters as vertices of a directed acyclic collaboration graph. An edge
// from A to B means A may delegate decision-making toward B.
class ClusterDag {
public:
    void add_cluster(Cluster cluster) {
        if (cluster.members.empty())
            throw contract_error("cluster '" + cluster.id + "' has no members");
        if (clusters_.count(cluster.id))
            throw contract_error("cluster '" + cluster.id + "' already exists");
        std::sort(cluster.members.begin(), cluster.members.end());
        if (std::adjacent_find(cluster.members.begin(), cluster.members.end()) !=
            cluster.members.end())
            throw contract_error("cluster '" + cluster.id + "' lists a member twice");
        for (const auto& node : cluster.members)
            if (!node_home_.emplace(node, cluster.id).second)
                throw contract_error("node '" + node + "' already belongs to a cluster");
        clusters_.emplace(cluster.id, std::move(cluster));
    }

    void add_edge(const ClusterId& from, const ClusterId& to) {
        if (from == to) throw contract_error("self-loop on cluster '" + from + "'");
        require_cluster(from);
        require_cluster(to);
        edges_.insert({from, to}); // set semantics: duplicates collapse
    }

    bool has_cluster(const ClusterId& id) const { return clusters_.count(id) > 0; }
    const Cluster& cluster(const ClusterId& id) const { return require_cluster(id); }
    const std::map<ClusterId, Cluster>& clusters() const { return clusters_; }
    const std::set<DagEdge>& edges() const { return edges_; }

    const ClusterId* home_of(const NodeId& node) const {
        auto it = node_home_.find(node);
        return it == node_home_.end() ? nullptr : &it->second;
    }

    std::vector<ClusterId> successors(const ClusterId& id) const {
        std::vector<ClusterId> out;
        for (auto it = edges_.lower_bound({id, ""}); it != edges_.end() && it->from == id; ++it)
            out.push_back(it->to);
        return out;
    }

private:
    const Cluster& require_cluster(const ClusterId& id) const {
        auto it = clusters_.find(id);
        if (it == clusters_.end()) throw contract_error("unknown cluster '" + id + "'");
        return it->second;
    }

    std::map<ClusterId, Cluster> clusters_;
    std::set<DagEdge> edges_;
    std::map<NodeId, ClusterId> node_home_;
};

// Kahn's algorithm with an id-ordered frontier, so the topological order is
// deterministic. When a cycle exists, one concrete cycle is walked out and
// reported.
inline AcyclicityReport validate_acyclic(const ClusterDag& dag) {
    std::map<ClusterId, int> in_degree;
    for (const auto& [id, cluster] : dag.clusters()) in_degree[id] = 0;
    for (const auto& edge : dag.edges()) ++in_degree[edge.to];

    std::set<ClusterId> frontier;
    for (const auto& [id, degree] : in_degree)
        if (degree == 0) frontier.insert(id);

    AcyclicityReport report;
    while (!frontier.empty()) {
        ClusterId id = *frontier.begin();
        frontier.erase(frontier.begin());
        report.topological_order.push_back(id);
        for (const auto& next : dag.successors(id))
            if (--in_degree[next] == 0) frontier.insert(next);
    }

    if (report.topological_order.size() == dag.clusters().size()) {
        report.acyclic = true;
        return report;
    }

    // Every unresolved vertex still has an unresolved predecessor; walking
    // predecessors must therefore revisit one, closing a cycle.
    report.topological_order.clear();
    std::set<ClusterId> unresolved;
    for (const auto& [id, degree] : in_degree)
        if (degree > 0) unresolved.insert(id);

    std::vector<ClusterId> path;
    std::map<ClusterId, std::size_t> seen_at;
    ClusterId current = *unresolved.begin();
    while (!seen_at.count(current)) {
        seen_at[current] = path.size();
        path.push_back(current);
        for (const auto& edge : dag.edges()) {
            if (edge.to == current && unresolved.count(edge.from)) {
                current = edge.from;
                break;
            }
        }
    }
    report.cycle.assign(path.begin() + static_cast<long>(seen_at[current]), path.end());
    std::sort(report.cycle.begin(), report.cycle.end());
    return report;
}

// Mean trust of a cluster's members under a replica view. Members without
// recorded evidence contribute the neutral 0.5.
inline double cluster_mean_trust(const LedgerReplica& replica, const Cluster& cluster) {
    double sum = 0.0;
    for (const auto& node : cluster.members) {
        const auto* entry = replica.find(node);
        sum += (entry && !entry->history.empty()) ? entry->rolling_average() : 0.5;
    }
    return sum / static_cast<double>(cluster.members.size());
}

// Attaches a new cluster with out-edges toward the `fanout` most trusted
// existing clusters (ties by cluster id). The new vertex gains no in-edges,
// so acyclicity is preserved by construction.
inline void attach_cluster(ClusterDag& dag, Cluster new_cluster,
                           const std::map<ClusterId, double>& mean_trust, std::size_t fanout) {
    std::vector<std::pair<double, ClusterId>> ranked;
    for (const auto& [id, cluster] : dag.clusters()) {
        auto it = mean_trust.find(id);
        ranked.emplace_back(it != mean_trust.end() ? it->second : 0.5, id);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    ClusterId new_id = new_cluster.id;
    dag.add_cluster(std::move(new_cluster));
    std::size_t take = std::min(fanout, ranked.size());
    for (std::size_t i = 0; i < take; ++i) dag.add_edge(new_id, ranked[i].second);
}

// The clusters a given cluster may delegate work to: its direct successors.
inline std::vector<ClusterId> delegation_targets(const ClusterDag& dag, const ClusterId& cluster) {
    if (!dag.has_cluster(cluster)) throw contract_error("unknown cluster '" + cluster + "'");
    return dag.successors(cluster);
}

struct SizeImbalance {
    ClusterId smaller, larger;
    double ratio = 1.0;

    bool operator==(const SizeImbalance&) const = default;
};

struct SizeUniformityReport {
    double tolerance = 2.0;
    std::vector<SizeImbalance> flagged;
    bool uniform() const { return flagged.empty(); }
};

// Flags cluster pairs whose member-count ratio exceeds the tolerance.
inline SizeUniformityReport size_uniformity_report(const ClusterDag& dag, double tolerance = 2.0) {
    SizeUniformityReport report;
    report.tolerance = tolerance;
    const auto& clusters = dag.clusters();
    for (auto a = clusters.begin(); a != clusters.end(); ++a) {
        for (auto b = std::next(a); b != clusters.end(); ++b) {
            double sa = static_cast<double>(a->second.members.size());
            double sb = static_cast<double>(b->second.members.size());
            double ratio = std::max(sa, sb) / std::min(sa, sb);
            if (ratio > tolerance) {
                if (sa <= sb)
                    report.flagged.push_back({a->first, b->first, ratio});
                else
                    report.flagged.push_back({b->first, a->first, ratio});
            }
        }
    }
    return report;
}

} // namespace trustnet
