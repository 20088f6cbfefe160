#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "taep/aux_similarity.hpp"
#include "taep/errors.hpp"
#include "taep/rng.hpp"

using namespace taep;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const std::filesystem::path path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

// Brute-force all-pairs shortest paths for the BFS cross-check.
std::vector<std::vector<long long>> floyd_warshall(const HierarchyGraph& graph) {
    const std::size_t n = graph.node_count();
    const long long inf = 1LL << 40;
    std::vector<std::vector<long long>> dist(n, std::vector<long long>(n, inf));
    for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (const std::size_t j : graph.adjacency()[i]) dist[i][j] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (dist[i][k] + dist[k][j] < dist[i][j]) dist[i][j] = dist[i][k] + dist[k][j];
    return dist;
}

}  // namespace

TEST_CASE("hierarchy path similarity on a three-node chain") {
    HierarchyGraph graph;
    graph.add_edge("a", "b");
    graph.add_edge("b", "c");
    const SimilarityMatrix r = wordnet_similarity(graph, std::vector<std::string>{"a", "b", "c"});
    CHECK(r(0, 0) == 1.0);
    CHECK(r(0, 1) == 0.5);
    CHECK(r(1, 2) == 0.5);
    CHECK(r(0, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(r(i, j) == r(j, i));
}

TEST_CASE("siblings sharing a parent sit at path length two") {
    HierarchyGraph graph;
    graph.add_edge("cat", "animal");
    graph.add_edge("dog", "animal");
    const SimilarityMatrix r =
        wordnet_similarity(graph, std::vector<std::string>{"cat", "dog"});
    CHECK(r(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("hierarchy similarity is invariant to edge order and duplicates") {
    HierarchyGraph a;
    a.add_edge("x", "y");
    a.add_edge("y", "z");
    HierarchyGraph b;
    b.add_edge("y", "z");
    b.add_edge("x", "y");
    b.add_edge("x", "y");
    b.add_edge("y", "x");
    const std::vector<std::string> labels{"x", "z"};
    const SimilarityMatrix ra = wordnet_similarity(a, labels);
    const SimilarityMatrix rb = wordnet_similarity(b, labels);
    CHECK(ra == rb);
}

TEST_CASE("hierarchy similarity rejects unresolved labels and disconnected pairs") {
    HierarchyGraph graph;
    graph.add_edge("a", "b");
    graph.add_edge("c", "d");
    try {
        wordnet_similarity(graph, std::vector<std::string>{"a", "nope"});
        FAIL("expected an unresolved-label error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("nope") != std::string::npos);
    }
    CHECK_THROWS_AS(wordnet_similarity(graph, std::vector<std::string>{"a", "c"}),
                    ValidationError);
}

TEST_CASE("BFS distances match a brute-force oracle on a random graph") {
    SplitMix64 rng(1234);
    HierarchyGraph graph;
    const std::size_t n = 40;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("n" + std::to_string(i));
    // Random spanning tree keeps it connected; extra edges add shortcuts.
    for (std::size_t i = 1; i < n; ++i)
        graph.add_edge(names[i], names[rng.next_u64() % i]);
    for (int extra = 0; extra < 25; ++extra) {
        const std::size_t i = rng.next_u64() % n;
        const std::size_t j = rng.next_u64() % n;
        if (i != j) graph.add_edge(names[i], names[j]);
    }

    const auto oracle = floyd_warshall(graph);
    const SimilarityMatrix r = wordnet_similarity(graph, names);
    for (std::size_t i = 0; i < n; ++i) {
        const auto bfs = graph.bfs_distances(graph.node_index(names[i]));
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(bfs[graph.node_index(names[j])] == oracle[graph.node_index(names[i])]
                                                           [graph.node_index(names[j])]);
            CHECK(r(i, j) ==
                  1.0 / (static_cast<double>(oracle[graph.node_index(names[i])]
                                                   [graph.node_index(names[j])]) +
                         1.0));
        }
    }
}

TEST_CASE("dice similarity hand example") {
    HitCounts counts;
    counts.single["i"] = 40;
    counts.single["j"] = 60;
    counts.pair[{"i", "j"}] = 10;
    const SimilarityMatrix r =
        cooccurrence_similarity(counts, std::vector<std::string>{"i", "j"});
    CHECK(r(0, 1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r(1, 0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(r(0, 0) == 1.0);
    CHECK(r(1, 1) == 1.0);
}

TEST_CASE("dice similarity treats missing pairs as zero and checks singles") {
    HitCounts counts;
    counts.single["i"] = 40;
    counts.single["j"] = 60;
    const SimilarityMatrix r =
        cooccurrence_similarity(counts, std::vector<std::string>{"i", "j"});
    CHECK(r(0, 1) == 0.0);

    HitCounts missing;
    missing.single["i"] = 40;
    try {
        cooccurrence_similarity(missing, std::vector<std::string>{"i", "j"});
        FAIL("expected an error naming the label without a count");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("j") != std::string::npos);
    }

    HitCounts zero;
    zero.single["i"] = 40;
    zero.single["j"] = 0;
    CHECK_THROWS_AS(cooccurrence_similarity(zero, std::vector<std::string>{"i", "j"}),
                    ValidationError);
}

TEST_CASE("both builders return entries in [0,1] with unit diagonal") {
    HitCounts counts;
    counts.single["a"] = 5;
    counts.single["b"] = 7;
    counts.single["c"] = 11;
    counts.pair[{"a", "b"}] = 3;
    counts.pair[{"b", "c"}] = 6;
    const SimilarityMatrix r =
        cooccurrence_similarity(counts, std::vector<std::string>{"a", "b", "c"});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r(i, i) == 1.0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(r(i, j) >= 0.0);
            CHECK(r(i, j) <= 1.0);
            CHECK(r(i, j) == r(j, i));
        }
    }
}

TEST_CASE("hierarchy file parsing") {
    const auto path = write_temp("taep_test_hierarchy.txt",
                                 "# taxonomy\n"
                                 "cat\tanimal\n"
                                 "dog\tanimal\n"
                                 "\n"
                                 "animal\tentity\n");
    const HierarchyGraph graph = load_hierarchy_file(path);
    CHECK(graph.has_node("cat"));
    CHECK(graph.has_node("entity"));
    const SimilarityMatrix r =
        wordnet_similarity(graph, std::vector<std::string>{"cat", "entity"});
    CHECK(r(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const auto bad = write_temp("taep_test_hierarchy_bad.txt", "cat\tanimal\nno_parent\n");
    try {
        load_hierarchy_file(bad);
        FAIL("expected a parse error with the line number");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    CHECK_THROWS_AS(load_hierarchy_file("/nonexistent/taep_hierarchy"), std::invalid_argument);
}

TEST_CASE("counts file parsing") {
    const auto path = write_temp("taep_test_counts.txt",
                                 "# singles and pairs\n"
                                 "cat\t40\n"
                                 "dog\t60\n"
                                 "cat\tdog\t10\n");
    const HitCounts counts = load_counts_file(path);
    CHECK(counts.single_count("cat") == 40.0);
    CHECK(counts.pair_count("dog", "cat") == 10.0);
    const SimilarityMatrix r =
        cooccurrence_similarity(counts, std::vector<std::string>{"cat", "dog"});
    CHECK(r(0, 1) == doctest::Approx(0.1).epsilon(1e-15));

    const auto negative = write_temp("taep_test_counts_neg.txt", "cat\t-3\n");
    CHECK_THROWS_AS(load_counts_file(negative), ValidationError);
    const auto malformed = write_temp("taep_test_counts_bad.txt", "cat\tdog\tcow\t10\n");
    CHECK_THROWS_AS(load_counts_file(malformed), ValidationError);
    const auto not_number = write_temp("taep_test_counts_nan.txt", "cat\tmany\n");
    CHECK_THROWS_AS(load_counts_file(not_number), ValidationError);
}
