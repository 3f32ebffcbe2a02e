#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "trustnet/rng.hpp"
#include "trustnet/trust.hpp"

using namespace trustnet;

namespace {

CertaintyVector vector_of(const std::vector<double>& values) {
    std::vector<CertaintyEntry> entries;
    for (std::size_t i = 0; i < values.size(); ++i)
        entries.push_back({{"f" + std::to_string(i), "s", FacetKind::Aleatoric, ""},
                           values[i],
                           false});
    return CertaintyVector(std::move(entries));
}

UncertaintyFacet facet_of(const std::string& source_id, FacetKind kind) {
    for (const auto& facet : decompose(canonical_taxonomy()))
        if (facet.source_id == source_id && facet.kind == kind) return facet;
    throw taxonomy_error("no such facet in the canonical decomposition: " + source_id);
}

} // namespace

TEST_CASE("black_box_2 computes the weighted mean") {
    SECTION("all ones gives absolute trust") {
        auto rating = black_box_2(vector_of({1.0, 1.0, 1.0}), WeightSet{{2.0, 1.0, 0.5}});
        CHECK(rating.value == 1.0);
    }

    SECTION("all zeros gives absolute distrust") {
        auto rating = black_box_2(vector_of({0.0, 0.0}), WeightSet{{1.0, 9.0}});
        CHECK(rating.value == 0.0);
    }

    SECTION("q=(0.5,1.0), w=(1,3) gives 0.875") {
        auto rating = black_box_2(vector_of({0.5, 1.0}), WeightSet{{1.0, 3.0}});
        CHECK(rating.value == Catch::Approx(0.875).margin(1e-15));
    }

    SECTION("cardinality mismatch is a contract error") {
        CHECK_THROWS_AS(black_box_2(vector_of({0.5}), WeightSet{{1.0, 2.0}}), contract_error);
    }

    SECTION("no evidence cannot be rated") {
        CHECK_THROWS_AS(black_box_2(CertaintyVector{}, WeightSet{{}}), no_evidence_error);
    }

    SECTION("non-positive weights are rejected") {
        CHECK_THROWS_AS(black_box_2(vector_of({0.5}), WeightSet{{0.0}}), contract_error);
        CHECK_THROWS_AS(black_box_2(vector_of({0.5}), WeightSet{{-1.0}}), contract_error);
    }
}

TEST_CASE("trust rating properties over random inputs") {
    Rng rng(424242);
    for (int trial = 0; trial < 2000; ++trial) {
        std::size_t n = 1 + rng.next_index(8);
        std::vector<double> q(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            q[i] = rng.next_double();
            w[i] = rng.next_range(1e-6, 10.0);
        }
        double t = black_box_2(vector_of(q), WeightSet{w}).value;

        // bounds
        REQUIRE(t >= 0.0);
        REQUIRE(t <= 1.0);

        // weight-scale invariance
        double c = rng.next_range(1e-3, 1e3);
        std::vector<double> scaled = w;
        for (auto& x : scaled) x *= c;
        double t_scaled = black_box_2(vector_of(q), WeightSet{scaled}).value;
        REQUIRE(std::abs(t - t_scaled) < 1e-12);

        // permutation invariance
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_index(i)]);
        std::vector<double> pq(n), pw(n);
        for (std::size_t i = 0; i < n; ++i) {
            pq[i] = q[perm[i]];
            pw[i] = w[perm[i]];
        }
        double t_perm = black_box_2(vector_of(pq), WeightSet{pw}).value;
        REQUIRE(std::abs(t - t_perm) < 1e-12);

        // strict monotonicity in a bumped coordinate
        std::size_t k = rng.next_index(n);
        if (q[k] < 0.99) {
            std::vector<double> bumped = q;
            bumped[k] += rng.next_range(0.005, 1.0 - q[k]);
            REQUIRE(black_box_2(vector_of(bumped), WeightSet{w}).value > t);
        }
    }
}

TEST_CASE("default weights follow the priority tiers") {
    SECTION("priority 1 weighs 4") {
        auto w = default_weights({facet_of("hardware-malfunctions", FacetKind::Aleatoric)});
        REQUIRE(w.size() == 1);
        CHECK(w.weights[0] == 4.0);
    }

    SECTION("priority 4 weighs 1") {
        auto w = default_weights({facet_of("environmental-effects", FacetKind::Epistemic)});
        CHECK(w.weights[0] == 1.0);
    }

    SECTION("both facets of one source carry its full weight") {
        auto w = default_weights({facet_of("hardware-malfunctions", FacetKind::Aleatoric),
                                  facet_of("hardware-malfunctions", FacetKind::Epistemic)});
        CHECK(w.weights == std::vector<double>{4.0, 4.0});
    }

    SECTION("equal tiers degenerate to the arithmetic mean") {
        std::vector<UncertaintyFacet> facets{facet_of("data-management", FacetKind::Aleatoric),
                                             facet_of("network-design", FacetKind::Aleatoric),
                                             facet_of("network-stability", FacetKind::Aleatoric)};
        auto w = default_weights(facets);
        CHECK(w.weights == std::vector<double>{3.0, 3.0, 3.0});

        auto t = black_box_2(vector_of({0.2, 0.5, 0.8}), w);
        CHECK(t.value == Catch::Approx(0.5).margin(1e-12));
    }

    SECTION("unknown source raises a taxonomy error") {
        CHECK_THROWS_AS(default_weights({{"x", "nope", FacetKind::Aleatoric, ""}}),
                        taxonomy_error);
    }

    SECTION("overrides replace the tier weight by source name") {
        auto w = weights_for({facet_of("hardware-malfunctions", FacetKind::Aleatoric)},
                             canonical_taxonomy(), {{"Hardware Malfunctions", 9.5}});
        CHECK(w.weights[0] == 9.5);
    }
}

TEST_CASE("black_box_1 dispatches by facet kind") {
    QuantifierConfig config;
    config.montecarlo = MonteCarloConfig{1000, 77, 1.0};

    SECTION("empty evidence gives an empty vector") {
        auto q = black_box_1(UncertaintySet{}, config);
        CHECK(q.empty());
        CHECK(q.aleatoric_count() == 0);
        CHECK(q.epistemic_count() == 0);
    }

    SECTION("a constant-sample facet quantifies to exactly 1") {
        UncertaintySet evidence;
        auto facet = facet_of("data-quality", FacetKind::Aleatoric);
        evidence.add(facet, Observation(facet, QuantSamples{{2.0, 2.0, 2.0}, ""}));
        auto q = black_box_1(evidence, config);
        REQUIRE(q.size() == 1);
        CHECK(q.entries()[0].certainty == 1.0);
    }

    SECTION("mixed evidence keeps partition sizes and matches per-facet oracles") {
        UncertaintySet evidence;
        auto a1 = facet_of("data-quality", FacetKind::Aleatoric);
        auto a2 = facet_of("hardware-malfunctions", FacetKind::Aleatoric);
        auto e1 = facet_of("network-scalability", FacetKind::Epistemic);
        evidence.add(a1, Observation(a1, QuantSamples{{1.0, 1.2, 0.8, 1.1}, ""}));
        evidence.add(a2, Observation(a2, QuantSamples{{5.0, 5.5, 4.5}, ""}));
        evidence.add(e1, Observation(e1, QualLabel{"Medium"}));

        auto q = black_box_1(evidence, config);
        REQUIRE(q.size() == 3);
        CHECK(q.aleatoric_count() == 2);
        CHECK(q.epistemic_count() == 1);
        CHECK(q.aleatoric_count() == evidence.aleatoric_count());
        CHECK(q.epistemic_count() == evidence.epistemic_count());

        // per-facet oracles with the same derived element streams
        for (std::size_t i = 0; i < evidence.size(); ++i) {
            const auto& element = evidence.elements()[i];
            double expected;
            if (element.facet.kind == FacetKind::Aleatoric) {
                MonteCarloConfig mc = config.montecarlo;
                mc.rng_seed = derive_seed(config.montecarlo.rng_seed, "bb1-element",
                                          static_cast<std::uint64_t>(i));
                expected = quantify_aleatoric(element.observation, mc).certainty;
            } else {
                expected = quantify_epistemic(element.observation, config.rulebase,
                                              config.fuzzy_resolution)
                               .certainty;
            }
            REQUIRE(q.entries()[i].certainty == expected);
        }
    }

    SECTION("insufficient data produces the flagged 0.5 entry") {
        UncertaintySet evidence;
        auto facet = facet_of("data-quality", FacetKind::Aleatoric);
        evidence.add(facet, Observation(facet, QuantSamples{{7.0}, ""}));
        auto q = black_box_1(evidence, config);
        REQUIRE(q.size() == 1);
        CHECK(q.entries()[0].certainty == 0.5);
        CHECK(q.entries()[0].fallback);
    }
}

TEST_CASE("evaluate_node composes the two black boxes") {
    QuantifierConfig config;
    config.montecarlo = MonteCarloConfig{1000, 3, 1.0};

    SECTION("zero-dispersion evidence with any single weight rates 1.0") {
        UncertaintySet evidence;
        auto facet = facet_of("quality-of-service", FacetKind::Aleatoric);
        evidence.add(facet, Observation(facet, QuantSamples{{4.0, 4.0, 4.0, 4.0}, ""}));
        auto rating = evaluate_node(evidence, WeightSet{{2.5}}, config, "N2", "N1", 7);
        CHECK(rating.value == 1.0);
        CHECK(rating.evaluated_node == "N2");
        CHECK(rating.evaluator == "N1");
        CHECK(rating.round == 7);
    }

    SECTION("empty evidence is refused") {
        CHECK_THROWS_AS(evaluate_node(UncertaintySet{}, WeightSet{{1.0}}, config),
                        no_evidence_error);
    }

    SECTION("five mixed facets equal the weighted mean of per-facet oracles") {
        UncertaintySet evidence;
        std::vector<std::pair<std::string, FacetKind>> picks{
            {"hardware-malfunctions", FacetKind::Aleatoric},
            {"hardware-malfunctions", FacetKind::Epistemic},
            {"data-quality", FacetKind::Aleatoric},
            {"network-scalability", FacetKind::Epistemic},
            {"quality-of-service", FacetKind::Aleatoric},
        };
        Rng rng(555);
        const char* labels[] = {"Low", "Medium", "High"};
        for (const auto& [source, kind] : picks) {
            auto facet = facet_of(source, kind);
            if (kind == FacetKind::Aleatoric) {
                QuantSamples samples;
                for (int i = 0; i < 16; ++i)
                    samples.values.push_back(rng.next_normal(1.0, 0.2));
                evidence.add(facet, Observation(facet, std::move(samples)));
            } else {
                evidence.add(facet, Observation(facet, QualLabel{labels[rng.next_index(3)]}));
            }
        }

        auto weights = default_weights(evidence.facets());
        auto rating = evaluate_node(evidence, weights, config);

        auto q = black_box_1(evidence, config);
        double weighted = 0.0, total = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            weighted += q.entries()[i].certainty * weights.weights[i];
            total += weights.weights[i];
        }
        CHECK(rating.value == Catch::Approx(weighted / total).margin(1e-12));
    }
}
