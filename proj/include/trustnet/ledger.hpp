#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "trustnet/error.hpp"

namespace trustnet {

using NodeId = std::string;
using ClusterId = std::string;

// One finished evaluation: evaluator's rating of evaluated_node at `round`.
struct TrustRecord {
    NodeId evaluated_node;
    NodeId evaluator;
    int round = 0;
    double rating = 0.0;

    void validate() const {
        if (evaluated_node == evaluator)
            throw contract_error("node '" + evaluator + "' cannot evaluate itself");
        if (round < 0) throw contract_error("round must be >= 0");
        if (!(rating >= 0.0 && rating <= 1.0))
            throw contract_error("rating out of [0,1]");
    }

    // Global application order; rating participates only to break exact
    // duplicates deterministically.
    auto order_key() const { return std::tie(round, evaluator, evaluated_node, rating); }
    auto identity_key() const { return std::tie(round, evaluator, evaluated_node); }

    bool operator==(const TrustRecord&) const = default;
};

// Per-node window of recent ratings. The rolling average is always a
// from-scratch mean over the stored window, summed front to back, so it can
// be replayed exactly by an oracle.
struct LedgerEntry {
    NodeId node_id;
    std::deque<double> history;
    std::size_t count = 0; // lifetime evaluations, >= history.size()

    double rolling_average() const {
        if (history.empty())
            throw no_evidence_error("node '" + node_id + "' has no recorded evaluations");
        double sum = 0.0;
        for (double r : history) sum += r;
        return sum / static_cast<double>(history.size());
    }

    void apply(double rating, std::size_t window) {
        history.push_back(rating);
        if (history.size() > window) history.pop_front();
        ++count;
    }

    bool operator==(const LedgerEntry&) const = default;
};

inline double rolling_average(const LedgerEntry& entry) { return entry.rolling_average(); }

// One cluster's replica of the network-wide ledger. Between syncs the live
// view reflects locally recorded evaluations; sync rebuilds every replica
// from the last agreed state plus the union of pending records in global
// order, after which all replicas are byte-equal.
class LedgerReplica {
public:
    LedgerReplica() = default;
    LedgerReplica(ClusterId cluster_id, std::size_t window)
        : cluster_id_(std::move(cluster_id)), window_(window) {
        if (window_ == 0) throw contract_error("ledger window must be >= 1");
    }

    const ClusterId& cluster_id() const { return cluster_id_; }
    std::size_t window() const { return window_; }
    const std::map<NodeId, LedgerEntry>& entries() const { return entries_; }
    const std::vector<TrustRecord>& pending() const { return pending_; }

    const LedgerEntry* find(const NodeId& node) const {
        auto it = entries_.find(node);
        return it == entries_.end() ? nullptr : &it->second;
    }

    // Applies the record locally and queues it for replication.
    const LedgerEntry& record_evaluation(const TrustRecord& record) {
        record.validate();
        pending_.push_back(record);
        return apply_to(entries_, record);
    }

    // A new cluster joining the network starts from this replica's synced
    // state.
    LedgerReplica fork(ClusterId new_cluster_id) const {
        LedgerReplica out(std::move(new_cluster_id), window_);
        out.entries_ = entries_;
        out.base_ = base_;
        return out;
    }

    // Installs synthetic history (election fixtures): `count` lifetime
    // evaluations all at `rating`. Applied to the synced base so it survives
    // the next sync.
    void preseed(const NodeId& node, double rating, std::size_t count) {
        if (!(rating >= 0.0 && rating <= 1.0))
            throw contract_error("preseed rating out of [0,1]");
        LedgerEntry entry{node, {}, count};
        entry.history.assign(std::min(count, window_), rating);
        base_[node] = entry;
        entries_[node] = std::move(entry);
    }

    // Canonical byte-exact form of the ledger content, used by the
    // divergence audit. Deliberately excludes the hosting cluster's id:
    // replicas must agree on entries, not on who holds them.
    std::string serialize() const {
        std::string out = "window=" + std::to_string(window_) + "\n";
        char buf[64];
        for (const auto& [node, entry] : entries_) {
            out += node + " count=" + std::to_string(entry.count) + " history=";
            for (double r : entry.history) {
                std::snprintf(buf, sizeof buf, "%a,", r);
                out += buf;
            }
            out += "\n";
        }
        return out;
    }

private:
    LedgerEntry& apply_to(std::map<NodeId, LedgerEntry>& entries, const TrustRecord& record) {
        auto [it, inserted] = entries.try_emplace(record.evaluated_node,
                                                  LedgerEntry{record.evaluated_node, {}, 0});
        it->second.apply(record.rating, window_);
        return it->second;
    }

    friend void sync_replicas(std::vector<LedgerReplica*> replicas);

    ClusterId cluster_id_;
    std::size_t window_ = 20;
    std::map<NodeId, LedgerEntry> entries_; // live view
    std::map<NodeId, LedgerEntry> base_;    // state as of the last sync
    std::vector<TrustRecord> pending_;      // recorded locally since the last sync
};

// Round-synchronous replication: the union of all pending records is applied
// to every replica on top of the last synced state, sorted by
// (round, evaluator, evaluated). Duplicate identities apply once.
inline void sync_replicas(std::vector<LedgerReplica*> replicas) {
    std::vector<TrustRecord> merged;
    for (const auto* replica : replicas)
        merged.insert(merged.end(), replica->pending_.begin(), replica->pending_.end());
    std::sort(merged.begin(), merged.end(),
              [](const TrustRecord& a, const TrustRecord& b) { return a.order_key() < b.order_key(); });
    merged.erase(std::unique(merged.begin(), merged.end(),
                             [](const TrustRecord& a, const TrustRecord& b) {
                                 return a.identity_key() == b.identity_key();
                             }),
                 merged.end());

    for (auto* replica : replicas) {
        auto entries = replica->base_;
        for (const auto& record : merged) replica->apply_to(entries, record);
        replica->entries_ = entries;
        replica->base_ = std::move(entries);
        replica->pending_.clear();
    }
}

inline void sync_replicas(std::vector<LedgerReplica>& replicas) {
    std::vector<LedgerReplica*> ptrs;
    ptrs.reserve(replicas.size());
    for (auto& r : replicas) ptrs.push_back(&r);
    sync_replicas(std::move(ptrs));
}

struct Coordinator {
    NodeId node;
    bool bootstrap = false; // true while no member has reached maturity
};

// The coordinator is the mature member (count >= maturity) with the highest
// rolling average; ties go to the smallest node id. With no mature member
// the smallest-id member stands in as the temporary bootstrap coordinator.
inline Coordinator coordinator_of(const LedgerReplica& replica, std::vector<NodeId> members,
                                  std::size_t maturity) {
    if (members.empty()) throw contract_error("cannot elect a coordinator for an empty cluster");
    std::sort(members.begin(), members.end());

    const NodeId* best = nullptr;
    double best_avg = -1.0;
    for (const auto& node : members) {
        const auto* entry = replica.find(node);
        if (!entry || entry->count < maturity || entry->history.empty()) continue;
        double avg = entry->rolling_average();
        if (avg > best_avg) {
            best_avg = avg;
            best = &node;
        }
    }
    if (best) return {*best, false};
    return {members.front(), true};
}

} // namespace trustnet
