#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trustnet/error.hpp"
#include "trustnet/fuzzy.hpp"
#include "trustnet/montecarlo.hpp"
#include "trustnet/rng.hpp"
#include "trustnet/uncertainty.hpp"

namespace trustnet {

// One quantified uncertainty: a certainty score in [0,1] tagged with the
// facet it came from. 1 means minimal uncertainty.
struct CertaintyEntry {
    UncertaintyFacet facet;
    double certainty = 0.5;
    bool fallback = false;
};

// Output of Black Box 1: index-aligned with the evidence set it came from,
// partition sizes preserved.
class CertaintyVector {
public:
    CertaintyVector() = default;
    explicit CertaintyVector(std::vector<CertaintyEntry> entries) : entries_(std::move(entries)) {
        for (const auto& e : entries_)
            if (!(e.certainty >= 0.0 && e.certainty <= 1.0))
                throw contract_error("certainty for facet '" + e.facet.id + "' out of [0,1]");
    }

    const std::vector<CertaintyEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::size_t aleatoric_count() const { return count(FacetKind::Aleatoric); }
    std::size_t epistemic_count() const { return count(FacetKind::Epistemic); }

    std::vector<double> values() const {
        std::vector<double> q;
        q.reserve(entries_.size());
        for (const auto& e : entries_) q.push_back(e.certainty);
        return q;
    }

private:
    std::size_t count(FacetKind k) const {
        std::size_t n = 0;
        for (const auto& e : entries_)
            if (e.facet.kind == k) ++n;
        return n;
    }

    std::vector<CertaintyEntry> entries_;
};

// Positive weights aligned index-for-index with a certainty vector.
struct WeightSet {
    std::vector<double> weights;

    void validate() const {
        if (weights.empty()) throw contract_error("weight set is empty");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                throw contract_error("weights must be strictly positive finite reals");
    }

    std::size_t size() const { return weights.size(); }

    bool operator==(const WeightSet&) const = default;
};

struct TrustRating {
    double value = 0.0; // in [0,1]; 0 = absolute distrust, 1 = absolute trust
    std::string evaluated_node;
    std::string evaluator;
    int round = 0;
};

struct QuantifierConfig {
    RuleBase rulebase = default_rule_base();
    int fuzzy_resolution = 1001;
    MonteCarloConfig montecarlo;
};

// Black Box 1: route each observation to its quantifier. Aleatoric facets go
// to the bootstrap, epistemic facets to the Mamdani pipeline. Each element
// gets its own bootstrap stream, derived from the configured seed and the
// element index, keeping the output independent of evaluation order.
inline CertaintyVector black_box_1(const UncertaintySet& set, const QuantifierConfig& config) {
    std::vector<CertaintyEntry> entries;
    entries.reserve(set.size());
    std::size_t index = 0;
    for (const auto& element : set.elements()) {
        CertaintyEntry entry{element.facet, 0.5, false};
        if (element.facet.kind == FacetKind::Aleatoric) {
            MonteCarloConfig mc = config.montecarlo;
            mc.rng_seed = derive_seed(config.montecarlo.rng_seed, "bb1-element",
                                      static_cast<std::uint64_t>(index));
            auto result = quantify_aleatoric(element.observation, mc);
            entry.certainty = result.certainty;
            entry.fallback = result.fallback;
        } else {
            auto result = quantify_epistemic(element.observation, config.rulebase,
                                             config.fuzzy_resolution);
            entry.certainty = result.certainty;
            entry.fallback = result.fallback;
        }
        entries.push_back(std::move(entry));
        ++index;
    }
    return CertaintyVector(std::move(entries));
}

// Priority tier -> weight: w = 5 - priority, so tier 1 weighs 4 and tier 4
// weighs 1. Both facets of a decomposed source carry the source's full
// weight. Overrides are keyed by source name.
inline WeightSet weights_for(const std::vector<UncertaintyFacet>& facets,
                             const std::vector<UncertaintySource>& taxonomy,
                             const std::map<std::string, double>& overrides = {}) {
    WeightSet ws;
    ws.weights.reserve(facets.size());
    for (const auto& facet : facets) {
        const UncertaintySource* source = nullptr;
        for (const auto& s : taxonomy)
            if (s.id == facet.source_id) {
                source = &s;
                break;
            }
        if (!source)
            throw taxonomy_error("facet '" + facet.id + "' references unknown source '" +
                                 facet.source_id + "'");
        auto it = overrides.find(source->name);
        ws.weights.push_back(it != overrides.end() ? it->second
                                                   : static_cast<double>(5 - source->priority));
    }
    ws.validate();
    return ws;
}

inline WeightSet default_weights(const std::vector<UncertaintyFacet>& facets) {
    return weights_for(facets, canonical_taxonomy());
}

// Black Box 2: T = sum(q_i * w_i) / sum(w_i). Bounded by the q bounds,
// invariant under uniform weight scaling, strictly monotone in every q_i.
inline TrustRating black_box_2(const CertaintyVector& q, const WeightSet& w) {
    if (q.empty())
        throw no_evidence_error("cannot rate trust from an empty certainty vector");
    if (q.size() != w.size())
        throw contract_error("certainty vector and weight set sizes differ");
    w.validate();
    double weighted = 0.0, total = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        weighted += q.entries()[i].certainty * w.weights[i];
        total += w.weights[i];
    }
    TrustRating rating;
    rating.value = weighted / total;
    return rating;
}

// The full per-node evaluation: quantify the evidence, then aggregate.
inline TrustRating evaluate_node(const UncertaintySet& evidence, const WeightSet& weights,
                                 const QuantifierConfig& config,
                                 const std::string& evaluated_node = {},
                                 const std::string& evaluator = {}, int round = 0) {
    if (evidence.empty())
        throw no_evidence_error("evaluate_node needs nonempty evidence");
    TrustRating rating = black_box_2(black_box_1(evidence, config), weights);
    rating.evaluated_node = evaluated_node;
    rating.evaluator = evaluator;
    rating.round = round;
    return rating;
}

} // namespace trustnet
