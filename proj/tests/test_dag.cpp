#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "trustnet/dag.hpp"
#include "trustnet/rng.hpp"

using namespace trustnet;

namespace {

Cluster cluster_of(const ClusterId& id, std::vector<NodeId> members) {
    return Cluster{id, std::move(members)};
}

// H1 -> H2, H1 -> H3, H2 -> H4, H3 -> H4
ClusterDag diamond() {
    ClusterDag dag;
    dag.add_cluster(cluster_of("H1", {"N1", "N2"}));
    dag.add_cluster(cluster_of("H2", {"N3", "N4"}));
    dag.add_cluster(cluster_of("H3", {"N5", "N6"}));
    dag.add_cluster(cluster_of("H4", {"N7", "N8"}));
    dag.add_edge("H1", "H2");
    dag.add_edge("H1", "H3");
    dag.add_edge("H2", "H4");
    dag.add_edge("H3", "H4");
    return dag;
}

} // namespace

TEST_CASE("cluster membership is a partition") {
    ClusterDag dag;
    dag.add_cluster(cluster_of("H1", {"N1", "N2"}));
    CHECK_THROWS_AS(dag.add_cluster(cluster_of("H2", {"N2", "N3"})), contract_error);
    CHECK_THROWS_AS(dag.add_cluster(cluster_of("H1", {"N9"})), contract_error);
    CHECK_THROWS_AS(dag.add_cluster(cluster_of("H3", {})), contract_error);
    CHECK_THROWS_AS(dag.add_cluster(cluster_of("H4", {"N5", "N5"})), contract_error);
    CHECK(*dag.home_of("N1") == "H1");
    CHECK(dag.home_of("N9") == nullptr);
}

TEST_CASE("edges reject self-loops and deduplicate") {
    ClusterDag dag;
    dag.add_cluster(cluster_of("A", {"a"}));
    dag.add_cluster(cluster_of("B", {"b"}));
    CHECK_THROWS_AS(dag.add_edge("A", "A"), contract_error);
    CHECK_THROWS_AS(dag.add_edge("A", "missing"), contract_error);
    dag.add_edge("A", "B");
    dag.add_edge("A", "B");
    CHECK(dag.edges().size() == 1);
}

TEST_CASE("acyclicity validation") {
    SECTION("the diamond validates in id order") {
        auto report = validate_acyclic(diamond());
        REQUIRE(report.acyclic);
        bool order_a = report.topological_order ==
                       std::vector<ClusterId>{"H1", "H2", "H3", "H4"};
        bool order_b = report.topological_order ==
                       std::vector<ClusterId>{"H1", "H3", "H2", "H4"};
        CHECK((order_a || order_b));
    }

    SECTION("a single cluster with no edges is trivially acyclic") {
        ClusterDag dag;
        dag.add_cluster(cluster_of("H1", {"N1"}));
        auto report = validate_acyclic(dag);
        CHECK(report.acyclic);
        CHECK(report.topological_order == std::vector<ClusterId>{"H1"});
    }

    SECTION("a two-cycle is reported with its vertices") {
        ClusterDag dag;
        dag.add_cluster(cluster_of("A", {"a"}));
        dag.add_cluster(cluster_of("B", {"b"}));
        dag.add_edge("A", "B");
        dag.add_edge("B", "A");
        auto report = validate_acyclic(dag);
        REQUIRE_FALSE(report.acyclic);
        CHECK(report.cycle == std::vector<ClusterId>{"A", "B"});
    }

    SECTION("a longer cycle behind a clean prefix is still found") {
        ClusterDag dag;
        for (const char* id : {"A", "B", "C", "D"})
            dag.add_cluster(cluster_of(id, {std::string("n-") + id}));
        dag.add_edge("A", "B"); // A is a clean source
        dag.add_edge("B", "C");
        dag.add_edge("C", "D");
        dag.add_edge("D", "B");
        auto report = validate_acyclic(dag);
        REQUIRE_FALSE(report.acyclic);
        CHECK(report.cycle == std::vector<ClusterId>{"B", "C", "D"});
    }
}

TEST_CASE("attach_cluster") {
    SECTION("attaching to an empty dag adds an isolated vertex") {
        ClusterDag dag;
        attach_cluster(dag, cluster_of("H1", {"N1"}), {}, 2);
        CHECK(dag.has_cluster("H1"));
        CHECK(dag.edges().empty());
    }

    SECTION("fanout 2 picks the two most trusted clusters") {
        ClusterDag dag;
        dag.add_cluster(cluster_of("H1", {"N1"}));
        dag.add_cluster(cluster_of("H2", {"N2"}));
        dag.add_cluster(cluster_of("H3", {"N3"}));
        std::map<ClusterId, double> means{{"H1", 0.9}, {"H2", 0.8}, {"H3", 0.7}};
        attach_cluster(dag, cluster_of("H4", {"N4"}), means, 2);
        std::set<DagEdge> expected{{"H4", "H1"}, {"H4", "H2"}};
        CHECK(dag.edges() == expected);
    }

    SECTION("fanout beyond the cluster count attaches to everything") {
        ClusterDag dag;
        dag.add_cluster(cluster_of("H1", {"N1"}));
        dag.add_cluster(cluster_of("H2", {"N2"}));
        attach_cluster(dag, cluster_of("H3", {"N3"}), {{"H1", 0.5}, {"H2", 0.5}}, 10);
        CHECK(dag.edges().size() == 2);
    }

    SECTION("trust ties break by cluster id") {
        ClusterDag dag;
        dag.add_cluster(cluster_of("Hc", {"N1"}));
        dag.add_cluster(cluster_of("Ha", {"N2"}));
        dag.add_cluster(cluster_of("Hb", {"N3"}));
        attach_cluster(dag, cluster_of("Hx", {"N4"}),
                       {{"Ha", 0.5}, {"Hb", 0.5}, {"Hc", 0.5}}, 2);
        std::set<DagEdge> expected{{"Hx", "Ha"}, {"Hx", "Hb"}};
        CHECK(dag.edges() == expected);
    }

    SECTION("1000 random attaches preserve acyclicity") {
        ClusterDag dag;
        Rng rng(2025);
        std::map<ClusterId, double> means;
        for (int i = 0; i < 1000; ++i) {
            std::string id = "C" + std::to_string(i);
            attach_cluster(dag, cluster_of(id, {"n" + std::to_string(i)}), means,
                           1 + rng.next_index(3));
            means[id] = rng.next_double();
            if (i % 50 == 0) REQUIRE(validate_acyclic(dag).acyclic);
        }
        REQUIRE(validate_acyclic(dag).acyclic);
    }
}

TEST_CASE("delegation targets") {
    auto dag = diamond();

    SECTION("H1 may delegate to H2 and H3") {
        CHECK(delegation_targets(dag, "H1") == std::vector<ClusterId>{"H2", "H3"});
    }

    SECTION("a sink delegates to nobody") {
        CHECK(delegation_targets(dag, "H4").empty());
    }

    SECTION("a cluster never delegates to itself") {
        for (const auto& [id, cluster] : dag.clusters()) {
            auto targets = delegation_targets(dag, id);
            CHECK(std::find(targets.begin(), targets.end(), id) == targets.end());
        }
    }

    SECTION("unknown cluster is a contract error") {
        CHECK_THROWS_AS(delegation_targets(dag, "H9"), contract_error);
    }

    SECTION("random dags agree with a brute-force adjacency scan") {
        Rng rng(606);
        ClusterDag dag2;
        const int n = 30;
        for (int i = 0; i < n; ++i)
            dag2.add_cluster(cluster_of("C" + std::to_string(i), {"m" + std::to_string(i)}));
        // edges only from lower to higher index: acyclic by construction
        std::set<DagEdge> edges;
        for (int e = 0; e < 120; ++e) {
            int a = static_cast<int>(rng.next_index(n - 1));
            int b = a + 1 + static_cast<int>(rng.next_index(n - a - 1));
            dag2.add_edge("C" + std::to_string(a), "C" + std::to_string(b));
        }
        for (int i = 0; i < n; ++i) {
            ClusterId id = "C" + std::to_string(i);
            std::vector<ClusterId> expected;
            for (const auto& edge : dag2.edges())
                if (edge.from == id) expected.push_back(edge.to);
            std::sort(expected.begin(), expected.end());
            REQUIRE(delegation_targets(dag2, id) == expected);
        }
    }
}

TEST_CASE("size uniformity report") {
    SECTION("uniform clusters raise no flags") {
        ClusterDag dag;
        for (int c = 0; c < 3; ++c) {
            std::vector<NodeId> members;
            for (int i = 0; i < 8; ++i)
                members.push_back("n" + std::to_string(c) + "-" + std::to_string(i));
            dag.add_cluster(cluster_of("H" + std::to_string(c), members));
        }
        CHECK(size_uniformity_report(dag).uniform());
    }

    SECTION("sizes 4 and 10 exceed tolerance 2.0") {
        ClusterDag dag;
        std::vector<NodeId> four, ten;
        for (int i = 0; i < 4; ++i) four.push_back("a" + std::to_string(i));
        for (int i = 0; i < 10; ++i) ten.push_back("b" + std::to_string(i));
        dag.add_cluster(cluster_of("H1", four));
        dag.add_cluster(cluster_of("H2", ten));
        auto report = size_uniformity_report(dag, 2.0);
        REQUIRE(report.flagged.size() == 1);
        CHECK(report.flagged[0].smaller == "H1");
        CHECK(report.flagged[0].larger == "H2");
        CHECK(report.flagged[0].ratio == Catch::Approx(2.5));
    }

    SECTION("random sizes agree with a brute-force pairwise check") {
        Rng rng(17);
        ClusterDag dag;
        std::vector<std::pair<ClusterId, std::size_t>> sizes;
        for (int c = 0; c < 12; ++c) {
            std::size_t size = 1 + rng.next_index(12);
            std::vector<NodeId> members;
            for (std::size_t i = 0; i < size; ++i)
                members.push_back("x" + std::to_string(c) + "-" + std::to_string(i));
            ClusterId id = "H" + std::to_string(c);
            dag.add_cluster(cluster_of(id, members));
            sizes.emplace_back(id, size);
        }
        std::sort(sizes.begin(), sizes.end());

        auto report = size_uniformity_report(dag, 2.0);
        std::set<std::pair<ClusterId, ClusterId>> expected;
        for (std::size_t i = 0; i < sizes.size(); ++i)
            for (std::size_t j = i + 1; j < sizes.size(); ++j) {
                double hi = static_cast<double>(std::max(sizes[i].second, sizes[j].second));
                double lo = static_cast<double>(std::min(sizes[i].second, sizes[j].second));
                if (hi / lo > 2.0) {
                    auto smaller = sizes[i].second <= sizes[j].second ? sizes[i].first
                                                                      : sizes[j].first;
                    auto larger = sizes[i].second <= sizes[j].second ? sizes[j].first
                                                                     : sizes[i].first;
                    expected.insert({smaller, larger});
                }
            }
        std::set<std::pair<ClusterId, ClusterId>> actual;
        for (const auto& f : report.flagged) actual.insert({f.smaller, f.larger});
        REQUIRE(actual == expected);
    }
}

TEST_CASE("cluster mean trust treats missing evidence as neutral") {
    LedgerReplica replica("H1", 20);
    replica.preseed("N1", 0.9, 5);
    auto mean = cluster_mean_trust(replica, cluster_of("H1", {"N1", "N2"}));
    CHECK(mean == Catch::Approx((0.9 + 0.5) / 2.0));
}
