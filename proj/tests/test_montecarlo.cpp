#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "trustnet/montecarlo.hpp"
#include "trustnet/rng.hpp"

using namespace trustnet;

namespace {

Observation quantitative(std::vector<double> values) {
    UncertaintyFacet facet{"f", "s", FacetKind::Aleatoric, ""};
    return Observation(facet, QuantSamples{std::move(values), "au"});
}

std::vector<double> noisy_samples(std::size_t n, double mean, double spread, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(rng.next_normal(mean, spread));
    return out;
}

} // namespace

TEST_CASE("constant samples short-circuit to zero dispersion") {
    MonteCarloConfig config{1000, 7, 1.0};
    auto estimate = monte_carlo_estimate(QuantSamples{{5.0, 5.0, 5.0, 5.0}, ""}, config);
    CHECK(estimate.point_estimate == 0.0);
    CHECK(estimate.resample_mean == 0.0);
    CHECK(estimate.resample_std == 0.0);
    CHECK(dispersion_to_certainty(estimate, config) == 1.0);
}

TEST_CASE("balanced coin flips recover the closed-form CV of 1.0") {
    // 500 zeros and 500 ones: mean 0.5, std 0.5 (up to the n-1 correction)
    std::vector<double> flips(1000, 0.0);
    for (std::size_t i = 500; i < 1000; ++i) flips[i] = 1.0;

    MonteCarloConfig config{10'000, 42, 1.0};
    auto estimate = monte_carlo_estimate(QuantSamples{flips, ""}, config);
    CHECK(estimate.point_estimate == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("same samples and seed give bit-identical estimates") {
    auto samples = noisy_samples(64, 2.0, 0.4, 11);
    MonteCarloConfig config{2000, 1234, 1.0};
    auto first = monte_carlo_estimate(QuantSamples{samples, ""}, config);
    auto second = monte_carlo_estimate(QuantSamples{samples, ""}, config);
    CHECK(first.point_estimate == second.point_estimate);
    CHECK(first.resample_mean == second.resample_mean);
    CHECK(first.resample_std == second.resample_std);
}

TEST_CASE("sample order does not matter") {
    auto samples = noisy_samples(32, 1.0, 0.3, 5);
    auto shuffled = samples;
    Rng rng(77);
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.next_index(i)]);

    MonteCarloConfig config{1000, 9, 1.0};
    CHECK(monte_carlo_estimate(QuantSamples{samples, ""}, config).point_estimate ==
          monte_carlo_estimate(QuantSamples{shuffled, ""}, config).point_estimate);
}

TEST_CASE("fewer than two samples is insufficient data") {
    MonteCarloConfig config{1000, 1, 1.0};
    CHECK_THROWS_AS(monte_carlo_estimate(QuantSamples{{3.0}, ""}, config),
                    insufficient_data_error);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(monte_carlo_estimate(QuantSamples{{1.0, 2.0}, ""},
                                         MonteCarloConfig{50, 0, 1.0}),
                    input_error);
    CHECK_THROWS_AS(monte_carlo_estimate(QuantSamples{{1.0, 2.0}, ""},
                                         MonteCarloConfig{1000, 0, 0.0}),
                    input_error);
}

TEST_CASE("dispersion maps affinely onto certainty") {
    MonteCarloConfig config{1000, 0, 1.0};
    CHECK(dispersion_to_certainty({0.0, 0.0, 0.0}, config) == 1.0);
    CHECK(dispersion_to_certainty({1.0, 1.0, 0.0}, config) == 0.0);
    CHECK(dispersion_to_certainty({2.5, 2.5, 0.0}, config) == 0.0); // saturates past the cap
    CHECK(dispersion_to_certainty({0.5, 0.5, 0.0}, config) == Catch::Approx(0.5));

    MonteCarloConfig wide{1000, 0, 2.0};
    CHECK(dispersion_to_certainty({1.0, 1.0, 0.0}, wide) == Catch::Approx(0.5));
}

TEST_CASE("quantify_aleatoric composes estimate and mapping") {
    MonteCarloConfig config{2000, 3, 1.0};

    SECTION("constant samples give full certainty") {
        auto result = quantify_aleatoric(quantitative({3.0, 3.0, 3.0}), config);
        CHECK(result.certainty == 1.0);
        CHECK_FALSE(result.fallback);
    }

    SECTION("heavy noise saturates to zero") {
        // CV far beyond the cap: alternating huge magnitudes around a tiny mean
        auto result = quantify_aleatoric(quantitative({-9.0, 11.0, -10.0, 12.0, -11.0, 9.0}),
                                         config);
        CHECK(result.certainty == 0.0);
    }

    SECTION("CV near 0.25 lands near 0.75") {
        auto samples = noisy_samples(1000, 1.0, 0.25, 21);
        auto result = quantify_aleatoric(quantitative(samples), config);
        CHECK(result.certainty == Catch::Approx(0.75).margin(0.05));
    }

    SECTION("single sample falls back to 0.5 with a flag") {
        auto result = quantify_aleatoric(quantitative({3.0}), config);
        CHECK(result.certainty == 0.5);
        CHECK(result.fallback);
    }

    SECTION("qualitative observations are refused") {
        UncertaintyFacet facet{"f", "s", FacetKind::Epistemic, ""};
        Observation obs(facet, QualLabel{"Low"});
        CHECK_THROWS_AS(quantify_aleatoric(obs, config), contract_error);
    }
}

TEST_CASE("widening the spread never raises certainty") {
    MonteCarloConfig config{2000, 17, 1.0};
    auto z = noisy_samples(200, 0.0, 1.0, 8);

    double previous = 2.0;
    for (double spread : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        std::vector<double> samples;
        samples.reserve(z.size());
        for (double v : z) samples.push_back(1.0 + spread * v);
        double q = quantify_aleatoric(quantitative(samples), config).certainty;
        CHECK(q <= previous + 1e-12);
        previous = q;
    }
}

TEST_CASE("certainty is stable across seeds") {
    auto samples = noisy_samples(300, 1.0, 0.3, 99);
    MonteCarloConfig config{2000, 0, 1.0};

    std::vector<double> qs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        config.rng_seed = seed;
        qs.push_back(quantify_aleatoric(quantitative(samples), config).certainty);
    }
    double mean = 0.0;
    for (double q : qs) mean += q;
    mean /= static_cast<double>(qs.size());
    double var = 0.0;
    for (double q : qs) var += (q - mean) * (q - mean);
    var /= static_cast<double>(qs.size() - 1);
    CHECK(std::sqrt(var) < 0.02);
}

TEST_CASE("positive scaling leaves the CV branch untouched") {
    auto samples = noisy_samples(100, 2.0, 0.3, 33);
    MonteCarloConfig config{1000, 4, 1.0};
    double base = monte_carlo_estimate(QuantSamples{samples, ""}, config).point_estimate;

    for (double factor : {0.001, 0.5, 3.0, 1e6}) {
        std::vector<double> scaled;
        scaled.reserve(samples.size());
        for (double v : samples) scaled.push_back(factor * v);
        double q = monte_carlo_estimate(QuantSamples{scaled, ""}, config).point_estimate;
        CHECK(q == Catch::Approx(base).epsilon(1e-9));
    }
}
