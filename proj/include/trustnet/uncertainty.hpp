#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "trustnet/error.hpp"

namespace trustnet {

enum class Category { Aleatoric, Epistemic, Both };
enum class FacetKind { Aleatoric, Epistemic };

inline std::string_view to_string(Category c) {
    switch (c) {
        case Category::Aleatoric: return "aleatoric";
        case Category::Epistemic: return "epistemic";
        case Category::Both: return "both";
    }
    return "?";
}

inline std::string_view to_string(FacetKind k) {
    return k == FacetKind::Aleatoric ? "aleatoric" : "epistemic";
}

inline std::optional<Category> parse_category(std::string_view s) {
    if (s == "aleatoric") return Category::Aleatoric;
    if (s == "epistemic") return Category::Epistemic;
    if (s == "both") return Category::Both;
    return std::nullopt;
}

inline std::optional<FacetKind> parse_facet_kind(std::string_view s) {
    if (s == "aleatoric") return FacetKind::Aleatoric;
    if (s == "epistemic") return FacetKind::Epistemic;
    return std::nullopt;
}

// One named source of uncertainty with its severity tier (1 = most severe)
// and whether it is measured quantitatively, assessed qualitatively, or both.
struct UncertaintySource {
    std::string id;
    std::string name;
    int priority = 4;
    Category category = Category::Aleatoric;

    bool operator==(const UncertaintySource&) const = default;
};

// A source reduced to a single uncertainty type. Sources categorized as Both
// must be decomposed into at least one facet of each kind before observation.
struct UncertaintyFacet {
    std::string id;
    std::string source_id;
    FacetKind kind = FacetKind::Aleatoric;
    std::string name;

    bool operator==(const UncertaintyFacet&) const = default;
};

// Quantitative evidence: raw measurements. The unit tag is carried for
// reporting only; quantification is unit-free.
struct QuantSamples {
    std::vector<double> values;
    std::string unit;

    bool operator==(const QuantSamples&) const = default;
};

// Qualitative evidence: a linguistic term from the facet's declared term set.
struct QualLabel {
    std::string term;

    bool operator==(const QualLabel&) const = default;
};

inline const std::vector<std::string>& default_term_set() {
    static const std::vector<std::string> terms{"Low", "Medium", "High"};
    return terms;
}

// A single piece of evidence about one facet. Valid on construction:
// payload kind must match the facet kind, samples must be finite and
// nonempty, labels must come from the term set.
class Observation {
public:
    Observation(const UncertaintyFacet& facet, QuantSamples samples)
        : facet_id_(facet.id), payload_(std::move(samples)) {
        if (facet.kind != FacetKind::Aleatoric)
            throw taxonomy_error("quantitative observation for epistemic facet '" + facet.id + "'");
        const auto& v = std::get<QuantSamples>(payload_).values;
        if (v.empty())
            throw input_error("empty sample list for facet '" + facet.id + "'");
        for (double x : v)
            if (!std::isfinite(x))
                throw input_error("non-finite sample for facet '" + facet.id + "'");
    }

    Observation(const UncertaintyFacet& facet, QualLabel label,
                const std::vector<std::string>& term_set = default_term_set())
        : facet_id_(facet.id), payload_(std::move(label)) {
        if (facet.kind != FacetKind::Epistemic)
            throw taxonomy_error("qualitative observation for aleatoric facet '" + facet.id + "'");
        const auto& term = std::get<QualLabel>(payload_).term;
        if (std::find(term_set.begin(), term_set.end(), term) == term_set.end())
            throw taxonomy_error("label '" + term + "' not in the declared term set");
    }

    const std::string& facet_id() const { return facet_id_; }

    bool is_quantitative() const { return std::holds_alternative<QuantSamples>(payload_); }
    FacetKind kind() const {
        return is_quantitative() ? FacetKind::Aleatoric : FacetKind::Epistemic;
    }

    const QuantSamples& samples() const { return std::get<QuantSamples>(payload_); }
    const QualLabel& label() const { return std::get<QualLabel>(payload_); }

    bool operator==(const Observation&) const = default;

private:
    std::string facet_id_;
    std::variant<QuantSamples, QualLabel> payload_;
};

// The evidence set U about one node: facets paired with observations.
// Every element is either aleatoric or epistemic, never both, so the set
// always splits cleanly into the two partitions.
class UncertaintySet {
public:
    struct Element {
        UncertaintyFacet facet;
        Observation observation;

        bool operator==(const Element&) const = default;
    };

    UncertaintySet() = default;

    void add(UncertaintyFacet facet, Observation observation) {
        if (observation.facet_id() != facet.id)
            throw taxonomy_error("observation refers to facet '" + observation.facet_id() +
                                 "', not '" + facet.id + "'");
        if (observation.kind() != facet.kind)
            throw taxonomy_error("observation kind disagrees with facet '" + facet.id + "'");
        elements_.push_back(Element{std::move(facet), std::move(observation)});
    }

    const std::vector<Element>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }

    std::size_t aleatoric_count() const { return count(FacetKind::Aleatoric); }
    std::size_t epistemic_count() const { return count(FacetKind::Epistemic); }

    std::vector<UncertaintyFacet> facets() const {
        std::vector<UncertaintyFacet> out;
        out.reserve(elements_.size());
        for (const auto& e : elements_) out.push_back(e.facet);
        return out;
    }

private:
    std::size_t count(FacetKind k) const {
        std::size_t n = 0;
        for (const auto& e : elements_)
            if (e.facet.kind == k) ++n;
        return n;
    }

    std::vector<Element> elements_;
};

struct Partition {
    std::vector<UncertaintySet::Element> aleatoric; // U_A, |U_A| = j
    std::vector<UncertaintySet::Element> epistemic; // U_E, |U_E| = k
};

// Splits U into U_A and U_E by facet kind. j + k = n by construction.
inline Partition partition(const UncertaintySet& set) {
    Partition p;
    for (const auto& e : set.elements()) {
        if (e.facet.kind == FacetKind::Aleatoric)
            p.aleatoric.push_back(e);
        else
            p.epistemic.push_back(e);
    }
    return p;
}

// The eleven canonical sources with their severity tiers and categories.
inline const std::vector<UncertaintySource>& canonical_taxonomy() {
    static const std::vector<UncertaintySource> sources{
        {"hardware-malfunctions", "Hardware Malfunctions", 1, Category::Both},
        {"data-management", "Data Management", 2, Category::Aleatoric},
        {"network-design", "Network Design", 2, Category::Both},
        {"network-stability", "Network Stability", 2, Category::Both},
        {"devices-heterogeneity", "Devices Heterogeneity", 3, Category::Both},
        {"data-quality", "Data Quality", 3, Category::Aleatoric},
        {"network-scalability", "Network Scalability", 3, Category::Epistemic},
        {"privacy-protection", "Privacy Protection", 3, Category::Both},
        {"quality-of-service", "Quality of Service", 4, Category::Aleatoric},
        {"geographical-dispersal", "Geographical Dispersal", 4, Category::Aleatoric},
        {"environmental-effects", "Environmental Effects", 4, Category::Both},
    };
    return sources;
}

// Default decomposition: a Both source yields "<id>/measured" (aleatoric)
// plus "<id>/assessed" (epistemic); single-category sources yield one facet
// named after the source id.
inline std::vector<UncertaintyFacet> decompose(const UncertaintySource& source) {
    switch (source.category) {
        case Category::Aleatoric:
            return {{source.id, source.id, FacetKind::Aleatoric, source.name}};
        case Category::Epistemic:
            return {{source.id, source.id, FacetKind::Epistemic, source.name}};
        case Category::Both:
            return {{source.id + "/measured", source.id, FacetKind::Aleatoric,
                     source.name + " (measured)"},
                    {source.id + "/assessed", source.id, FacetKind::Epistemic,
                     source.name + " (assessed)"}};
    }
    throw taxonomy_error("source '" + source.id + "' has no category");
}

inline std::vector<UncertaintyFacet> decompose(const std::vector<UncertaintySource>& sources) {
    std::vector<UncertaintyFacet> out;
    for (const auto& s : sources)
        for (auto& f : decompose(s)) out.push_back(std::move(f));
    return out;
}

struct TaxonomyViolation {
    std::string code;    // stable machine-readable tag
    std::string subject; // offending source/facet id
    std::string message;

    bool operator==(const TaxonomyViolation&) const = default;
};

struct TaxonomyReport {
    std::vector<TaxonomyViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Checks a scenario's taxonomy. Reports rather than throws so a config
// file's problems can all be listed in one pass.
inline TaxonomyReport validate_scenario_taxonomy(const std::vector<UncertaintySource>& sources,
                                                 const std::vector<UncertaintyFacet>& facets) {
    TaxonomyReport report;
    auto flag = [&](std::string code, std::string subject, std::string message) {
        report.violations.push_back({std::move(code), std::move(subject), std::move(message)});
    };

    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto& s = sources[i];
        if (s.priority < 1 || s.priority > 4)
            flag("priority-out-of-range", s.id,
                 "priority " + std::to_string(s.priority) + " outside 1..4");
        if (s.id.empty()) flag("empty-id", s.name, "source has no id");
        for (std::size_t j = i + 1; j < sources.size(); ++j)
            if (sources[j].id == s.id)
                flag("duplicate-source", s.id, "source id declared twice");
    }

    auto find_source = [&](const std::string& id) -> const UncertaintySource* {
        for (const auto& s : sources)
            if (s.id == id) return &s;
        return nullptr;
    };

    for (std::size_t i = 0; i < facets.size(); ++i) {
        const auto& f = facets[i];
        if (!find_source(f.source_id))
            flag("unknown-source", f.id, "facet references undeclared source '" + f.source_id + "'");
        for (std::size_t j = i + 1; j < facets.size(); ++j)
            if (facets[j].id == f.id)
                flag("duplicate-facet", f.id, "facet id declared twice");
    }

    for (const auto& s : sources) {
        std::size_t aleatoric = 0, epistemic = 0;
        for (const auto& f : facets) {
            if (f.source_id != s.id) continue;
            (f.kind == FacetKind::Aleatoric ? aleatoric : epistemic)++;
        }
        switch (s.category) {
            case Category::Both:
                if (aleatoric == 0)
                    flag("missing-aleatoric-facet", s.id, "Both-source lacks an aleatoric facet");
                if (epistemic == 0)
                    flag("missing-epistemic-facet", s.id, "Both-source lacks an epistemic facet");
                break;
            case Category::Aleatoric:
                if (epistemic > 0)
                    flag("facet-kind-mismatch", s.id, "aleatoric source has an epistemic facet");
                if (aleatoric != 1)
                    flag("facet-count", s.id, "aleatoric source needs exactly one aleatoric facet");
                break;
            case Category::Epistemic:
                if (aleatoric > 0)
                    flag("facet-kind-mismatch", s.id, "epistemic source has an aleatoric facet");
                if (epistemic != 1)
                    flag("facet-count", s.id, "epistemic source needs exactly one epistemic facet");
                break;
        }
    }
    return report;
}

} // namespace trustnet
