#include "doctest.h"

#include <functional>
#include <numeric>

#include "litkg/curation.hpp"
#include "litkg/graph.hpp"
#include "litkg/graph_query.hpp"
#include "litkg/graph_stats.hpp"
#include "litkg/ingest.hpp"
#include "litkg/rng.hpp"
#include "support/test_util.hpp"

using namespace litkg;

namespace {

// Small curated-input builders for synthetic graphs.
CuratedGraphInput papers_with_cites(int n, const std::vector<std::pair<int, int>>& edges) {
    CuratedGraphInput curated;
    for (int i = 0; i < n; ++i) {
        std::string id = "p" + std::to_string(1000 + i); // zero-padded sort order
        curated.entities.push_back(
            {id, PaperRecord{id, "Title " + id, std::nullopt, std::nullopt, std::nullopt}});
    }
    for (auto [a, b] : edges)
        curated.triplets.push_back({Relation::cites, "p" + std::to_string(1000 + a),
                                    "p" + std::to_string(1000 + b), std::nullopt});
    std::sort(curated.triplets.begin(), curated.triplets.end(),
              [](const CuratedTriplet& x, const CuratedTriplet& y) {
                  return x.sort_key() < y.sort_key();
              });
    return curated;
}

} // namespace

TEST_CASE("build_graph reproduces curated counts exactly") {
    auto loaded = load_corpus(litkg::test::fixture_corpus_dir());
    auto curated = curate(loaded.corpus);
    auto graph = build_graph(curated);
    CHECK(graph.entity_count() == curated.entities.size());
    CHECK(graph.triplet_count() == curated.triplets.size());
    CHECK(graph.count_of(EntityKind::Paper) == 12);
    CHECK(graph.count_of(EntityKind::Author) == 7);
    CHECK(graph.count_of(EntityKind::Institution) == 3);
}

TEST_CASE("build_graph rejects signature violations") {
    CuratedGraphInput curated;
    curated.entities.push_back(
        {"a1", PaperRecord{"a1", "T", std::nullopt, std::nullopt, std::nullopt}});
    curated.entities.push_back({"auth1", AuthorAttrs{"A", "", "One"}});
    // cites must be paper -> paper; tail here is an author
    curated.triplets.push_back({Relation::cites, "a1", "auth1", std::nullopt});
    CHECK_THROWS_WITH_AS(static_cast<void>(build_graph(curated)),
                         doctest::Contains("expects paper"), InputError);
}

TEST_CASE("build_graph rejects duplicate triplets and dangling keys") {
    auto dup = papers_with_cites(2, {{0, 1}, {0, 1}});
    CHECK_THROWS_AS(static_cast<void>(build_graph(dup)), InputError);

    CuratedGraphInput dangling = papers_with_cites(2, {});
    dangling.triplets.push_back({Relation::cites, "p1000", "ghost", std::nullopt});
    CHECK_THROWS_AS(static_cast<void>(build_graph(dangling)), InputError);
}

TEST_CASE("degree_distribution on a path counts undirected degree") {
    auto graph = build_graph(papers_with_cites(3, {{0, 1}, {1, 2}})); // a - b - c
    auto hist = degree_distribution(graph);
    CHECK(hist == std::map<long, long>{{1, 2}, {2, 1}});
}

TEST_CASE("degree_distribution with everything excluded is all zeros") {
    auto graph = build_graph(papers_with_cites(3, {{0, 1}, {1, 2}}));
    std::set<Relation> all(kAllRelations.begin(), kAllRelations.end());
    auto hist = degree_distribution(graph, all);
    CHECK(hist == std::map<long, long>{{0, 3}});
}

TEST_CASE("degree_distribution of a star with its relation excluded") {
    // 1 paper with 4 concepts, exclude associated_concept -> degrees {0:5}
    CuratedGraphInput curated;
    curated.entities.push_back(
        {"p1", PaperRecord{"p1", "T", std::nullopt, std::nullopt, std::nullopt}});
    for (int i = 0; i < 4; ++i) {
        std::string name = "c" + std::to_string(i);
        curated.entities.push_back({name, ConceptAttrs{name, "X", 1, false}});
        curated.triplets.push_back({Relation::associated_concept, "p1", name, 0.9});
    }
    auto graph = build_graph(curated);
    auto hist = degree_distribution(graph, {Relation::associated_concept});
    CHECK(hist == std::map<long, long>{{0, 5}});
    auto full = degree_distribution(graph);
    CHECK(full == std::map<long, long>{{1, 4}, {4, 1}});
}

TEST_CASE("degree histogram mass conservation") {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_index(40));
        std::set<std::pair<int, int>> edges;
        int m = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n * 2)));
        for (int e = 0; e < m; ++e) {
            int a = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
            int b = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
            if (a == b) continue; // curation drops self-citations
            edges.insert({a, b});
        }
        auto graph = build_graph(
            papers_with_cites(n, {edges.begin(), edges.end()}));
        auto hist = degree_distribution(graph);
        long mass = 0;
        for (auto [d, c] : hist) mass += d * c;
        CHECK(mass == 2 * static_cast<long>(graph.triplet_count()));
    }
}

TEST_CASE("connected_components basics") {
    CHECK(connected_components(build_graph(papers_with_cites(4, {{0, 1}, {2, 3}}))).count == 2);
    CHECK(connected_components(build_graph(papers_with_cites(3, {}))).count == 3);
}

TEST_CASE("connected_components matches a union-find oracle on random graphs") {
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 1 + static_cast<int>(rng.uniform_index(500));
        std::vector<std::pair<int, int>> edges;
        std::set<std::pair<int, int>> seen;
        int m = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        for (int e = 0; e < m; ++e) {
            int a = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
            int b = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
            if (a == b || !seen.insert({a, b}).second) continue;
            edges.push_back({a, b});
        }
        auto graph = build_graph(papers_with_cites(n, edges));
        auto cc = connected_components(graph);

        // oracle: union-find
        std::vector<int> parent(static_cast<size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
            return x;
        };
        for (auto [a, b] : edges) parent[static_cast<size_t>(find(a))] = find(b);
        std::set<int> roots;
        for (int v = 0; v < n; ++v) roots.insert(find(v));
        CHECK(cc.count == static_cast<long>(roots.size()));
    }
}

TEST_CASE("component count drops by exactly one per bridging edge") {
    // incremental fixture: chain up 8 isolated nodes, then add intra-component
    // edges and watch the count stay put
    const int n = 8;
    std::vector<std::pair<int, int>> edges;
    long previous = connected_components(build_graph(papers_with_cites(n, edges))).count;
    CHECK(previous == n);
    for (int i = 0; i + 1 < n; ++i) {
        edges.push_back({i, i + 1}); // bridges two components
        long count = connected_components(build_graph(papers_with_cites(n, edges))).count;
        CHECK(count == previous - 1);
        previous = count;
    }
    edges.push_back({0, 7}); // intra-component: no change
    CHECK(connected_components(build_graph(papers_with_cites(n, edges))).count == previous);
}

TEST_CASE("removing relations never increases any entity's degree") {
    auto loaded = load_corpus(litkg::test::fixture_corpus_dir());
    auto graph = build_graph(curate(loaded.corpus));
    auto cumulative = [&](const std::map<long, long>& hist) {
        // histogram -> count of entities with degree <= d for each d
        std::map<long, long> cum;
        long running = 0;
        long max_degree = hist.empty() ? 0 : hist.rbegin()->first;
        for (long d = 0; d <= max_degree; ++d) {
            auto it = hist.find(d);
            if (it != hist.end()) running += it->second;
            cum[d] = running;
        }
        return cum;
    };
    auto full = cumulative(degree_distribution(graph));
    for (Relation r : kAllRelations) {
        auto hist = degree_distribution(graph, {r});
        auto sub = cumulative(hist);
        // the sub-graph CDF dominates: at every degree at least as many
        // entities sit at or below it as in the full graph
        for (const auto& [d, count] : full) {
            long sub_count = d <= sub.rbegin()->first
                                 ? sub.lower_bound(d)->second
                                 : static_cast<long>(graph.entity_count());
            CHECK(sub_count >= count);
        }
        // mass conservation with exclusions: 2 x included triplets
        long mass = 0;
        for (auto [d, c] : hist) mass += d * c;
        CHECK(mass == 2 * static_cast<long>(graph.triplet_count() - graph.relation_count(r)));
    }
}

TEST_CASE("largest_cc_diameter on canonical shapes") {
    CHECK(largest_cc_diameter(build_graph(papers_with_cites(3, {{0, 1}, {1, 2}}))) == 2);
    CHECK(largest_cc_diameter(build_graph(papers_with_cites(
              6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}))) == 3); // C6
    CHECK(largest_cc_diameter(build_graph(papers_with_cites(
              4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}))) == 1); // K4
    CHECK(largest_cc_diameter(build_graph(papers_with_cites(1, {}))) == 0); // singleton
}

TEST_CASE("double-sweep fallback returns a valid lower bound") {
    auto graph = build_graph(papers_with_cites(10, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5},
                                                    {5, 6}, {6, 7}, {7, 8}, {8, 9}}));
    long exact = largest_cc_diameter(graph);
    long approx = largest_cc_diameter(graph, /*exact_node_limit=*/2);
    CHECK(exact == 9);
    CHECK(approx <= exact);
    CHECK(approx >= 1);
    // on a path the double sweep is exact
    CHECK(approx == exact);
}

TEST_CASE("query_concept_topic ranks authors by matched-paper count") {
    auto loaded = load_corpus(litkg::test::fixture_corpus_dir());
    auto graph = build_graph(curate(loaded.corpus));
    auto result = query_concept_topic(graph, {"remdesivir"}, {"Lab Trials (human)"});

    // p001, p002, p003 carry both the concept and the topic
    REQUIRE(result.papers.size() == 3);
    std::vector<std::string> ids;
    for (EntityId p : result.papers) ids.push_back(graph.entity(p).key);
    CHECK(ids == std::vector<std::string>{"p001", "p002", "p003"});

    // john q smith wrote p001 and p002 -> ranked first with count 2
    REQUIRE(!result.authors.empty());
    CHECK(graph.entity(result.authors[0].id).key == "john q smith");
    CHECK(result.authors[0].count == 2);

    // mit reaches p001/p002 (smith, jones) and p003 (alice chen) -> count 3
    REQUIRE(!result.institutions.empty());
    CHECK(graph.entity(result.institutions[0].id).key == "mit");
    CHECK(result.institutions[0].count == 3);
}

TEST_CASE("query_concept_topic is conjunctive and strict about empty groups") {
    auto loaded = load_corpus(litkg::test::fixture_corpus_dir());
    auto graph = build_graph(curate(loaded.corpus));
    CHECK(query_concept_topic(graph, {}, {"Lab Trials (human)"}).papers.empty());
    CHECK(query_concept_topic(graph, {"remdesivir"}, {}).papers.empty());
    // topics match but no concept matches -> empty
    auto r = query_concept_topic(graph, {"no such concept"}, {"Lab Trials (human)"});
    CHECK(r.papers.empty());
    REQUIRE(r.unknown_concepts.size() == 1);
}

TEST_CASE("query_concept_citation_rank orders by in-corpus citations") {
    auto loaded = load_corpus(litkg::test::fixture_corpus_dir());
    auto graph = build_graph(curate(loaded.corpus));
    auto result = query_concept_citation_rank(graph, {"coronavirus"}, 10);
    REQUIRE(result.rows.size() >= 2);
    CHECK(graph.entity(result.rows[0].paper).key == "p001");
    CHECK(result.rows[0].cited_by == 3);
    CHECK(graph.entity(result.rows[1].paper).key == "p002");
    CHECK(result.rows[1].cited_by == 1);
    // zero-citation matches are included, ties in paper_id order
    for (size_t i = 2; i < result.rows.size(); ++i) CHECK(result.rows[i].cited_by == 0);

    auto limited = query_concept_citation_rank(graph, {"coronavirus"}, 3);
    CHECK(limited.rows.size() == 3);
}

TEST_CASE("query results are invariant to input row order") {
    auto loaded = load_corpus(litkg::test::fixture_corpus_dir());
    litkg::test::TempDir shuffled_dir("graph_roworder");
    // rewrite concept_mentions with rows reversed
    {
        auto text = litkg::test::read_file(litkg::test::fixture_corpus_dir() /
                                           "concept_mentions.csv");
        auto lines = str::split(str::trim(text), '\n');
        std::string out = lines[0] + "\n";
        for (size_t i = lines.size(); i > 1; --i) out += lines[i - 1] + "\n";
        for (const char* name : {"papers.csv", "author_mentions.csv", "topic_assignments.csv",
                                 "bibliography.csv", "sections.jsonl"})
            litkg::test::write_file(shuffled_dir / name, litkg::test::read_file(
                                                             litkg::test::fixture_corpus_dir() / name));
        litkg::test::write_file(shuffled_dir / "concept_mentions.csv", out);
    }
    auto graph_a = build_graph(curate(loaded.corpus));
    auto loaded_b = load_corpus(shuffled_dir.path());
    auto graph_b = build_graph(curate(loaded_b.corpus));

    auto ra = query_concept_citation_rank(graph_a, {"coronavirus"}, 10);
    auto rb = query_concept_citation_rank(graph_b, {"coronavirus"}, 10);
    REQUIRE(ra.rows.size() == rb.rows.size());
    for (size_t i = 0; i < ra.rows.size(); ++i) {
        CHECK(graph_a.entity(ra.rows[i].paper).key == graph_b.entity(rb.rows[i].paper).key);
        CHECK(ra.rows[i].cited_by == rb.rows[i].cited_by);
    }
}

TEST_CASE("compute_stats summarizes the fixture graph") {
    auto loaded = load_corpus(litkg::test::fixture_corpus_dir());
    auto graph = build_graph(curate(loaded.corpus));
    auto stats = compute_stats(graph);
    CHECK(stats.entity_counts.at("paper") == 12);
    CHECK(stats.relation_counts.at("cites") == 4);
    // mean out-degree over all papers, zeros included
    CHECK(stats.mean_out_degree.at("cites") == doctest::Approx(4.0 / 12.0));
    CHECK(stats.component_count >= 1);
    CHECK(stats.largest_cc_size > 0);
}
