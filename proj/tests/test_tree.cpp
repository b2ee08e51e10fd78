#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rt/errors.hpp"
#include "rt/gen.hpp"
#include "rt/tree.hpp"

using namespace rt;

TEST_CASE("free tree counts match the Pruefer oracle") {
    for (int n = 2; n <= 8; ++n) {
        std::set<std::string> classes;
        oracle::all_labelled_trees(n, [&](const std::vector<Edge>& e) {
            classes.insert(oracle::tree_code(Tree::from_edges(n, e)));
        });
        std::set<std::string> got;
        int count = 0;
        enumerate_trees(n, [&](const Tree& t) {
            ++count;
            got.insert(oracle::tree_code(t));
        });
        CHECK(count == (int)classes.size());
        CHECK(got == classes);
    }
}

TEST_CASE("n = 9 and 10 enumerations agree with leaf-extension closures") {
    for (int n = 9; n <= 10; ++n) {
        std::set<std::string> closure;
        for (const Tree& t : enumerate_trees(n - 1))
            for (int v = 0; v < n - 1; ++v) {
                auto e = t.edges();
                e.push_back({v, n - 1});
                closure.insert(oracle::tree_code(Tree::from_edges(n, e)));
            }
        std::set<std::string> got;
        int count = 0;
        enumerate_trees(n, [&](const Tree& t) {
            ++count;
            got.insert(oracle::tree_code(t));
        });
        CHECK(count == (n == 9 ? 47 : 106));
        CHECK(got == closure);
    }
}

TEST_CASE("enumeration sizes for n = 1..16") {
    const int expect[] = {0, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320};
    for (int n = 1; n <= 16; ++n) {
        int c = 0;
        enumerate_trees(n, [&](const Tree&) { ++c; });
        CHECK_MESSAGE(c == expect[n], "n=" << n);
    }
}

TEST_CASE("enumeration is deterministic and rejects out-of-range n") {
    auto a = enumerate_trees(8), b = enumerate_trees(8);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].edges() == b[i].edges());
    CHECK_THROWS_AS(enumerate_trees(0), InputError);
    CHECK_THROWS_AS(enumerate_trees(25), InputError);
}

TEST_CASE("canonical codes") {
    Tree p4 = path_tree(4);
    CHECK(canonical_code(p4) == canonical_code(relabel(p4, {2, 0, 3, 1})));
    CHECK(canonical_code(p4) != canonical_code(star_tree(3)));
    std::set<std::string> codes;
    for (auto& t : enumerate_trees(7)) codes.insert(canonical_code(t));
    CHECK(codes.size() == 11);
}

TEST_CASE("canonical code agrees with the all-roots oracle and is relabelling invariant") {
    Rng rng(7);
    for (int n = 1; n <= 12; ++n) {
        std::map<std::string, std::string> code_to_oracle;
        for (auto& t : enumerate_trees(n)) {
            std::string c = canonical_code(t);
            CHECK(code_to_oracle.emplace(c, oracle::tree_code(t)).second);
            for (int r = 0; r < 100; ++r) {
                Tree s = shuffle_labels(t, rng);
                REQUIRE(canonical_code(s) == c);
            }
        }
    }
}

TEST_CASE("bipartition") {
    auto b = bipartition(path_tree(4));
    CHECK(b.t1 == 2);
    CHECK(b.t2 == 2);
    CHECK(b.in_v1(0));
    b = bipartition(star_tree(4));
    CHECK(b.t1 == 4);
    CHECK(b.t2 == 1);
    b = bipartition(double_star(4, 2));
    CHECK(b.t1 == 4);
    CHECK(b.t2 == 2);
    for (int n = 1; n <= 14; ++n)
        enumerate_trees(n, [&](const Tree& t) {
            auto p = bipartition(t);
            REQUIRE(p.t1 >= p.t2);
            REQUIRE(p.t1 + p.t2 == t.n);
            for (auto [u, v] : t.edges()) REQUIRE(p.side[u] != p.side[v]);
        });
}

TEST_CASE("tie in class sizes goes to the class with the smallest id") {
    Tree t = relabel(path_tree(4), {1, 0, 2, 3});  // 1-0-2-3
    auto b = bipartition(t);
    CHECK(b.in_v1(0));
    CHECK(b.v1 == std::vector<int>{0, 3});
}

TEST_CASE("formula values") {
    CHECK(formula_value(2, 2) == 5);
    CHECK(formula_value(3, 1) == 5);
    CHECK(formula_value(4, 2) == 7);
    CHECK(formula_value(10, 3) == 19);
}

TEST_CASE("pad_to_balanced") {
    // Spider: centre in V2, two legs of length 3 and six of length 1.
    Tree sp = spider({3, 3, 1, 1, 1, 1, 1, 1});
    auto b = bipartition(sp);
    REQUIRE(b.t1 == 10);
    REQUIRE(b.t2 == 3);
    auto p = pad_to_balanced(sp, 0.25);
    auto nb = bipartition(p.tree);
    CHECK(nb.t2 == 5);
    CHECK(formula_value(nb.t1, nb.t2) == 19);
    CHECK(formula_value(b.t1, b.t2) == 19);

    Tree k16 = star_tree(6);
    auto q = pad_to_balanced(k16, 0.4);
    CHECK(bipartition(q.tree).t2 == 3);
    int cap = (int)std::ceil(0.4 * q.tree.n);
    for (int v = 0; v < k16.n; ++v) CHECK(q.tree.degree(v) - k16.degree(v) <= cap);

    CHECK_THROWS_AS(pad_to_balanced(spider({1, 1, 1, 1, 2}), 0.25), GateError);  // t1 = 2 t2 + 1
}

TEST_CASE("pad_to_balanced keeps the input as a subtree and balances classes") {
    Rng rng(11);
    int tried = 0;
    for (int rep = 0; rep < 200; ++rep) {
        int t2 = 3 + int(rng.below(20));
        int t1 = 2 * t2 + 2 + int(rng.below(40));
        Tree t = random_tree_classes(t1, t2, 50, rng);
        try {
            auto p = pad_to_balanced(t, 0.3);
            ++tried;
            for (auto [u, v] : t.edges())
                CHECK(std::find(p.tree.adj[u].begin(), p.tree.adj[u].end(), v) != p.tree.adj[u].end());
            auto nb = bipartition(p.tree);
            CHECK(nb.t1 <= 2 * nb.t2 + 1);
            CHECK(nb.t1 == t1);
        } catch (const GateError&) {
        }
    }
    CHECK(tried > 100);
}

TEST_CASE("JSON, parent array and DOT round trips") {
    Tree t = spider({2, 3, 1});
    Tree u = tree_from_json(tree_to_json(t));
    CHECK(u.edges() == t.edges());
    Tree w = Tree::from_parent_array(parent_array(t));
    CHECK(canonical_code(w) == canonical_code(t));
    CHECK(tree_to_dot(t).find("0 -- 1") != std::string::npos);
    CHECK_THROWS_AS(tree_from_json(nlohmann::json::parse(R"({"n":3,"edges":[[0,1],[0,1]]})")), InputError);
    CHECK_THROWS_AS(Tree::from_edges(3, {{0, 1}, {1, 1}}), InputError);
}

TEST_CASE("random generators produce the requested classes and degree bound") {
    Rng rng(3);
    for (int rep = 0; rep < 30; ++rep) {
        Tree a = path_rich_tree(100, 100, 20, rng);
        auto ba = bipartition(a);
        CHECK(ba.t1 == 100);
        CHECK(ba.t2 == 100);
        CHECK(a.max_degree() <= 20);
        Tree b = leaf_rich_tree(150, 50, 20, rng);
        auto bb = bipartition(b);
        CHECK(bb.t1 == 150);
        CHECK(bb.t2 == 50);
        CHECK(b.max_degree() <= 20);
        Tree c = path_rich_tree(150, 50, 20, rng);
        CHECK(bipartition(c).t1 == 150);
        CHECK(c.max_degree() <= 20);
    }
}
