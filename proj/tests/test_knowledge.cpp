#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "semcom/errors.hpp"
#include "semcom/knowledge_graph.hpp"
#include "semcom/random.hpp"
#include "semcom/semantic_match.hpp"

using namespace semcom;

namespace {

KnowledgeGraph coffee_graph() {
    KnowledgeGraph kg;
    for (const char* v : {"table", "mug", "coffee_machine", "coffee", "phone"}) kg.add_vertex(v);
    kg.add_arc("table", "pick_up", "mug");
    kg.add_arc("mug", "brew", "coffee_machine");
    kg.add_arc("coffee_machine", "serve", "coffee");
    kg.add_arc("table", "order", "phone");
    kg.add_arc("phone", "deliver", "coffee");
    return kg;
}

// Every walk up to max_depth, kept if simple and ending at goal, then sorted.
std::vector<KnowledgePath> brute_force_paths(const KnowledgeGraph& kg, const std::string& start,
                                             const std::string& goal, std::size_t max_depth) {
    std::vector<KnowledgePath> frontier{{{start}, {}}};
    std::vector<KnowledgePath> out;
    for (std::size_t depth = 0; depth < max_depth; ++depth) {
        std::vector<KnowledgePath> next;
        for (const auto& p : frontier) {
            for (const Arc& a : kg.arcs()) {
                if (a.from != p.vertices.back()) continue;
                KnowledgePath q = p;
                q.vertices.push_back(a.to);
                q.actions.push_back(a.action);
                const std::set<std::string> unique(q.vertices.begin(), q.vertices.end());
                if (unique.size() != q.vertices.size()) continue;
                if (a.to == goal) {
                    out.push_back(q);
                } else {
                    next.push_back(q);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end(), [](const KnowledgePath& a, const KnowledgePath& b) {
        return std::tie(a.vertices, a.actions) < std::tie(b.vertices, b.actions);
    });
    return out;
}

}  // namespace

TEST_CASE("graph construction rejects unknown endpoints and duplicates") {
    KnowledgeGraph kg;
    kg.add_vertex("a");
    kg.add_vertex("b");
    kg.add_arc("a", "go", "b");
    CHECK(kg.has_arc({"a", "go", "b"}));
    CHECK_THROWS_AS(kg.add_arc("a", "go", "b"), ConfigError);
    CHECK_THROWS_AS(kg.add_arc("a", "go", "zzz"), LookupError);
    CHECK_NOTHROW(kg.add_arc("a", "run", "b"));
    CHECK(kg.outgoing("a").size() == 2);
    CHECK(kg.outgoing("a")[0].action == "go");
}

TEST_CASE("coffee graph has exactly two routes") {
    const KnowledgeGraph kg = coffee_graph();
    const auto paths = find_paths(kg, "table", "coffee", 8, 16);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].vertices == std::vector<std::string>{"table", "mug", "coffee_machine", "coffee"});
    CHECK(paths[1].actions == std::vector<std::string>{"order", "deliver"});
    CHECK(paths[0].length() == 3);
    for (const auto& p : paths) CHECK(path_in_graph(kg, p));
    CHECK(find_paths(kg, "table", "coffee", 2, 16).size() == 1);
    CHECK(find_paths(kg, "table", "coffee", 8, 1).size() == 1);
    CHECK(find_paths(kg, "coffee", "table", 8, 16).empty());
    CHECK_THROWS_AS(find_paths(kg, "nowhere", "coffee", 8, 16), LookupError);
    KnowledgePath fake{{"table", "coffee"}, {"teleport"}};
    CHECK_FALSE(path_in_graph(kg, fake));
}

TEST_CASE("path search matches brute-force enumeration on random graphs") {
    Rng rng = make_stream(5, "graphs");
    for (int trial = 0; trial < 40; ++trial) {
        KnowledgeGraph kg;
        const int n = 6;
        for (int i = 0; i < n; ++i) kg.add_vertex("v" + std::to_string(i));
        std::bernoulli_distribution edge(0.35);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                for (const char* act : {"a", "b"}) {
                    if (edge(rng)) kg.add_arc("v" + std::to_string(i), act, "v" + std::to_string(j));
                }
            }
        }
        for (std::size_t depth : {2u, 4u, 6u}) {
            const auto expected = brute_force_paths(kg, "v0", "v5", depth);
            CHECK(find_paths(kg, "v0", "v5", depth, 1000) == expected);
            const auto capped = find_paths(kg, "v0", "v5", depth, 3);
            CHECK(capped.size() == std::min<std::size_t>(3, expected.size()));
            CHECK(std::equal(capped.begin(), capped.end(), expected.begin()));
        }
    }
}

TEST_CASE("trigram embedding is deterministic, normalized and case-blind") {
    const TrigramHashEmbedding e;
    const Eigen::VectorXd a = e.embed("Coffee");
    CHECK(a.size() == TrigramHashEmbedding::kDims);
    CHECK(a.norm() == doctest::Approx(1.0));
    CHECK(a == e.embed("coffee"));
    CHECK(semantic_distance(a, e.embed("coffee"), DistanceMetric::cosine) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(semantic_distance(a, e.embed("coffees"), DistanceMetric::cosine) <
          semantic_distance(a, e.embed("table"), DistanceMetric::cosine));
    CHECK(semantic_distance(a, -a, DistanceMetric::euclidean) == doctest::Approx(2.0));
}

TEST_CASE("synonym table admits aliases that trigrams alone reject") {
    SemanticMatchConfig plain;
    SemanticMatchConfig syn;
    syn.provider = make_embedding_provider("synonym_table", {{"desk", "table"}, {"cup", "mug"}});
    const std::set<std::string> objects{"table", "mug", "coffee"};
    const std::set<std::string> labels{"desk", "cup", "coffee", "sofa"};
    CHECK(semantic_match(objects, labels, plain) == std::set<std::string>{"coffee"});
    CHECK(semantic_match(objects, labels, syn) == std::set<std::string>{"coffee", "cup", "desk"});
    const auto table = match_table(objects, labels, syn);
    CHECK(table.at("table") == std::set<std::string>{"desk"});
    CHECK(table.at("mug") == std::set<std::string>{"cup"});
    CHECK_THROWS_AS(make_embedding_provider("word2vec"), ConfigError);
    syn.epsilon = -1.0;
    CHECK_THROWS_AS(syn.validate(), ConfigError);
}

TEST_CASE("feasibility modes") {
    const auto paths = find_paths(coffee_graph(), "table", "coffee", 8, 16);
    CHECK(check_feasibility(paths, {"table", "phone", "coffee"}, FeasibilityMode::subset));
    CHECK_FALSE(check_feasibility(paths, {"table", "coffee"}, FeasibilityMode::subset));
    CHECK(check_feasibility(paths, {"mug"}, FeasibilityMode::intersect));
    CHECK_FALSE(check_feasibility(paths, {"sofa"}, FeasibilityMode::intersect));
    CHECK_FALSE(check_feasibility(paths, {}, FeasibilityMode::intersect));
}
