#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "mswig/catalog_graphs.hpp"
#include "mswig/graph.hpp"
#include "mswig/independence.hpp"
#include "support/oracles.hpp"

using namespace mswig;
using mswig::testing::axiom_closure;
using mswig::testing::closure_contains;
using mswig::testing::moral_separated;
using mswig::testing::random_dag;
using mswig::testing::random_mgraph;
using mswig::testing::trail_separated;

namespace {

std::vector<Term> terms(std::initializer_list<const char*> names) {
    std::vector<Term> out;
    for (const char* n : names) out.emplace_back(n);
    return out;
}

std::vector<std::string> texts(const std::vector<CIStatement>& v) {
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(s.text());
    return out;
}

// every consecutive witness pair must be an edge of the expanded graph
void check_witness_is_trail(const MGraph& g, const std::vector<std::string>& path,
                            const std::string& x, const std::string& y) {
    REQUIRE(path.size() >= 2);
    CHECK(path.front() == x);
    CHECK(path.back() == y);
    MGraph e = g.expand_latents();
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        auto ch = e.children(path[i]);
        auto pa = e.parents(path[i]);
        bool adjacent = std::find(ch.begin(), ch.end(), path[i + 1]) != ch.end() ||
                        std::find(pa.begin(), pa.end(), path[i + 1]) != pa.end();
        CHECK_MESSAGE(adjacent, path[i], " and ", path[i + 1], " are not adjacent");
    }
}

}  // namespace

TEST_CASE("term text renders labels and display overrides") {
    CHECK(Term("Y").text() == "Y");
    CHECK(Term("Y", {"d"}).text() == "Y(d)");
    Term t("Y_star", {"d"});
    t.display = "Y_star(Y(d),S(d))";
    CHECK(t.text() == "Y_star(Y(d),S(d))");
}

TEST_CASE("statements canonicalize side order, term order and given order") {
    auto s = CIStatement::make(terms({"S"}), terms({"Y", "D"}));
    CHECK(s.text() == "D,Y _||_ S");
    auto swapped = CIStatement::make(terms({"D", "Y"}), terms({"S"}));
    CHECK(s == swapped);

    auto c = CIStatement::make(terms({"B"}), terms({"A"}), terms({"Z", "X"}));
    CHECK(c.text() == "A _||_ B | X,Z");

    auto e = CIStatement::make(terms({"D"}), terms({"Y_star"}), {}, {"S"});
    CHECK(e.text() == "D _||_ Y_star [given S=1]");
    CHECK(e.conditioned_on_selection());
}

TEST_CASE("d-separation on the three primitive structures") {
    MGraph chain;
    for (const char* n : {"A", "B", "C"}) chain.add_node(n, NodeKind::Observed);
    chain.add_edge("A", "B");
    chain.add_edge("B", "C");
    CHECK_FALSE(d_separated(chain, terms({"A"}), terms({"C"}), {}).separated);
    CHECK(d_separated(chain, terms({"A"}), terms({"C"}), terms({"B"})).separated);

    MGraph fork;
    for (const char* n : {"A", "B", "C"}) fork.add_node(n, NodeKind::Observed);
    fork.add_edge("B", "A");
    fork.add_edge("B", "C");
    CHECK_FALSE(d_separated(fork, terms({"A"}), terms({"C"}), {}).separated);
    CHECK(d_separated(fork, terms({"A"}), terms({"C"}), terms({"B"})).separated);

    MGraph collider;
    for (const char* n : {"A", "B", "C", "E"}) collider.add_node(n, NodeKind::Observed);
    collider.add_edge("A", "B");
    collider.add_edge("C", "B");
    collider.add_edge("B", "E");
    CHECK(d_separated(collider, terms({"A"}), terms({"C"}), {}).separated);
    CHECK_FALSE(d_separated(collider, terms({"A"}), terms({"C"}), terms({"B"})).separated);
    CHECK_FALSE(d_separated(collider, terms({"A"}), terms({"C"}), terms({"E"})).separated);
}

TEST_CASE("bidirected edges connect through their expansion latent") {
    MGraph g;
    g.add_node("A", NodeKind::Observed);
    g.add_node("B", NodeKind::Observed);
    g.add_biedge("A", "B");
    auto v = d_separated(g, terms({"A"}), terms({"B"}), {});
    CHECK_FALSE(v.separated);
    check_witness_is_trail(g, v.witness_path, "A", "B");
    CHECK(v.witness_path == std::vector<std::string>{"A", "L_A_B", "B"});
}

TEST_CASE("witness paths are trails of the expanded graph") {
    MGraph g = graph_m3();
    auto v = d_separated(g, terms({"S"}), terms({"Y"}), terms({"D", "X"}));
    REQUIRE_FALSE(v.separated);
    check_witness_is_trail(g, v.witness_path, "S", "Y");

    auto sep = d_separated(g, terms({"S"}), terms({"Y"}), terms({"D", "U", "X"}));
    CHECK(sep.separated);
    CHECK(sep.witness_path.empty());
}

TEST_CASE("query validation rejects malformed inputs") {
    MGraph g = graph_m1();
    CHECK_THROWS_AS(d_separated(g, {Term("Y", {"d"})}, terms({"S"}), {}), std::invalid_argument);
    CHECK_THROWS_AS(d_separated(g, terms({"Q"}), terms({"S"}), {}), std::invalid_argument);
    CHECK_THROWS_AS(d_separated(g, terms({"D"}), terms({"D"}), {}), std::invalid_argument);
    CHECK_THROWS_AS(d_separated(g, terms({"D"}), terms({"S"}), terms({"D"})),
                    std::invalid_argument);
    CHECK_THROWS_AS(d_separated(g, {}, terms({"S"}), {}), std::invalid_argument);
    CHECK_THROWS_AS(d_separated(g, terms({"D", "D"}), terms({"S"}), {}), std::invalid_argument);
}

TEST_CASE("reachability agrees with moralization and trail enumeration on random DAGs") {
    for (int rep = 0; rep < 400; ++rep) {
        int n = 3 + rep % 4;
        MGraph g = random_dag(n, 0.35, 9000 + rep);
        std::vector<std::string> names;
        for (const auto& node : g.nodes()) names.push_back(node.id);
        for (int xi = 0; xi < n; ++xi)
            for (int yi = xi + 1; yi < n; ++yi) {
                std::vector<int> rest;
                for (int k = 0; k < n; ++k)
                    if (k != xi && k != yi) rest.push_back(k);
                int m = static_cast<int>(rest.size());
                for (int mask = 0; mask < (1 << m); ++mask) {
                    if (__builtin_popcount(mask) > 2) continue;
                    std::vector<Term> z;
                    std::set<std::string> zs;
                    for (int k = 0; k < m; ++k)
                        if (mask & (1 << k)) {
                            z.emplace_back(names[rest[k]]);
                            zs.insert(names[rest[k]]);
                        }
                    bool engine =
                        d_separated(g, {Term(names[xi])}, {Term(names[yi])}, z).separated;
                    bool moral = moral_separated(g, {names[xi]}, {names[yi]}, zs);
                    bool trail = trail_separated(g, names[xi], names[yi], zs);
                    CAPTURE(rep);
                    CAPTURE(names[xi]);
                    CAPTURE(names[yi]);
                    REQUIRE(engine == moral);
                    REQUIRE(engine == trail);
                }
            }
    }
}

TEST_CASE("reachability agrees with the oracles on random m-graphs") {
    for (int rep = 0; rep < 150; ++rep) {
        MGraph g = random_mgraph(4, 0.4, 500 + rep);
        std::vector<std::string> names;
        for (const auto& node : g.nodes()) names.push_back(node.id);
        int n = static_cast<int>(names.size());
        for (int xi = 0; xi < n; ++xi)
            for (int yi = xi + 1; yi < n; ++yi)
                for (int zi = -1; zi < n; ++zi) {
                    if (zi == xi || zi == yi) continue;
                    std::vector<Term> z;
                    std::set<std::string> zs;
                    if (zi >= 0) {
                        z.emplace_back(names[zi]);
                        zs.insert(names[zi]);
                    }
                    bool engine =
                        d_separated(g, {Term(names[xi])}, {Term(names[yi])}, z).separated;
                    CAPTURE(rep);
                    CAPTURE(names[xi]);
                    CAPTURE(names[yi]);
                    REQUIRE(engine == moral_separated(g, {names[xi]}, {names[yi]}, zs));
                    REQUIRE(engine == trail_separated(g, names[xi], names[yi], zs));
                }
    }
}

TEST_CASE("enumeration is exact, ordered and deterministic on the simplest attrition graph") {
    MGraph g = graph_m1();
    auto all = enumerate_independencies(g, Scope::All);
    CHECK(texts(all) == std::vector<std::string>{
                            "D _||_ S",
                            "S _||_ Y",
                            "D _||_ S | Y",
                            "D _||_ Y_star | Y [given S=1]",
                            "S _||_ Y | D",
                            "D _||_ S | Y,Y_star [given S=1]",
                            "D _||_ Y_star | S,Y [given S=1]",
                        });
    CHECK(texts(enumerate_independencies(g, Scope::All)) == texts(all));
    for (const auto& s : all) {
        CHECK(s.left.size() == 1);
        CHECK(s.right.size() == 1);
        CHECK(d_separated(g, s.left, s.right, s.given).separated);
    }

    auto observed = enumerate_independencies(g, Scope::ObservedOnly);
    CHECK(texts(observed) == std::vector<std::string>{"D _||_ S"});
}

TEST_CASE("conditioning size cap is honored") {
    MGraph g = graph_m2();
    for (const auto& s : enumerate_independencies(g, Scope::All, 1))
        CHECK(s.given.size() <= 1);
    CHECK_THROWS_AS(enumerate_independencies(g, Scope::All, -1), std::invalid_argument);
}

TEST_CASE("minimal testable sets match hand-computed attrition references") {
    auto minimal = [](const MGraph& g) { return texts(minimal_testable_set(g)); };
    CHECK(minimal(graph_attrition(AttritionModel::Differential, false)) ==
          std::vector<std::string>{"D _||_ S | X"});
    CHECK(minimal(graph_attrition(AttritionModel::Determinants, false)) ==
          std::vector<std::string>{"S _||_ X | D"});
    CHECK(minimal(graph_attrition(AttritionModel::SelectiveOne, false)) ==
          std::vector<std::string>{"D _||_ X", "S _||_ X", "D _||_ X | S"});
    CHECK(minimal(graph_attrition(AttritionModel::SelectiveTwo, false)) ==
          std::vector<std::string>{"D _||_ S", "D _||_ X", "D _||_ S | X"});
    CHECK(minimal(graph_attrition(AttritionModel::Differential, true)) ==
          std::vector<std::string>{"D _||_ S", "D _||_ X", "D _||_ S | X"});
    CHECK(minimal(graph_attrition(AttritionModel::Determinants, true)) ==
          std::vector<std::string>{"D _||_ X", "S _||_ X", "D _||_ X | S"});
    CHECK(minimal(graph_attrition(AttritionModel::SelectiveOne, true)) ==
          std::vector<std::string>{"D _||_ X", "S _||_ X", "D _||_ X | S"});
    CHECK(minimal(graph_attrition(AttritionModel::SelectiveTwo, true)) ==
          std::vector<std::string>{"D _||_ S", "D _||_ X", "D _||_ S | X"});
}

TEST_CASE("the reduced set reproduces the full observed enumeration under the axioms") {
    std::vector<MGraph> graphs = {
        graph_attrition(AttritionModel::Differential, false),
        graph_attrition(AttritionModel::SelectiveOne, false),
        graph_attrition(AttritionModel::SelectiveTwo, true),
        graph_m2(),
        graph_m4(M4Variant::ExclusionI),
        graph_m4(M4Variant::ExclusionII),
    };
    for (size_t gi = 0; gi < graphs.size(); ++gi) {
        CAPTURE(gi);
        const MGraph& g = graphs[gi];
        auto full = enumerate_independencies(g, Scope::ObservedOnly);
        auto minimal = minimal_testable_set(g);
        auto full_texts = texts(full);
        for (const auto& s : minimal)
            CHECK(std::find(full_texts.begin(), full_texts.end(), s.text()) != full_texts.end());
        auto closure = axiom_closure(minimal);
        for (const auto& s : full) {
            CAPTURE(s.text());
            CHECK(closure_contains(closure, s));
        }
    }
}

TEST_CASE("reduction stays sound on random m-graphs") {
    for (int rep = 0; rep < 60; ++rep) {
        CAPTURE(rep);
        MGraph g = random_mgraph(4, 0.35, 7100 + rep);
        auto full = enumerate_independencies(g, Scope::ObservedOnly, 3);
        auto minimal = minimal_testable_set(g, 3);
        CHECK(minimal.size() <= full.size());
        auto closure = axiom_closure(minimal);
        for (const auto& s : full) {
            CAPTURE(s.text());
            CHECK(closure_contains(closure, s));
        }
    }
}
