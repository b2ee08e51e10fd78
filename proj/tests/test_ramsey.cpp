#include <cstdint>

#include "doctest.h"
#include "embed_hosts.hpp"
#include "oracles.hpp"
#include "rt/embed.hpp"
#include "rt/ramsey.hpp"

using namespace rt;

namespace {

// Every 2-colouring of K_N, with the red pairs given by the bits of mask.
bool some_coloring_free(const Tree& t, int N) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < N; ++a)
        for (int b = a + 1; b < N; ++b) pairs.push_back({a, b});
    for (uint64_t mask = 0; mask < (uint64_t(1) << pairs.size()); ++mask) {
        std::vector<std::vector<char>> red(N, std::vector<char>(N, 0)), blue = red;
        for (size_t i = 0; i < pairs.size(); ++i) {
            auto& m = (mask >> i) & 1 ? red : blue;
            m[pairs[i].first][pairs[i].second] = m[pairs[i].second][pairs[i].first] = 1;
        }
        if (!oracle::naive_copy(t, red) && !oracle::naive_copy(t, blue)) return true;
    }
    return false;
}

int brute_ramsey(const Tree& t, int limit) {
    for (int N = 1; N <= limit; ++N)
        if (!some_coloring_free(t, N)) return N;
    return -1;
}

// S_{4,2} sits on an edge uv with three further neighbours of u and one further neighbour of v.
bool has_s42(const uint32_t* adj, int N) {
    for (int u = 0; u < N; ++u)
        for (int v = 0; v < N; ++v) {
            if (!((adj[u] >> v) & 1)) continue;
            uint32_t nu = adj[u] & ~(1u << v), nv = adj[v] & ~(1u << u);
            if (__builtin_popcount(nu) >= 3 && nv && __builtin_popcount(nu | nv) >= 4) return true;
        }
    return false;
}

bool s42_free_exists(int N) {
    int m = N * (N - 1) / 2;
    for (uint64_t mask = 0; mask < (uint64_t(1) << m); ++mask) {
        uint32_t adj[2][16] = {};
        int e = 0;
        for (int a = 0; a < N; ++a)
            for (int b = a + 1; b < N; ++b, ++e) {
                int c = (mask >> e) & 1;
                adj[c][a] |= 1u << b;
                adj[c][b] |= 1u << a;
            }
        if (!has_s42(adj[0], N) && !has_s42(adj[1], N)) return true;
    }
    return false;
}

SearchOptions quick(int jobs = 1) {
    SearchOptions o;
    o.budget_secs = 120;
    o.jobs = jobs;
    return o;
}

}  // namespace

TEST_CASE("lower-bound witnesses") {
    auto p4 = lower_bound_witness(path_tree(4));
    CHECK(p4.graph.n == 4);
    CHECK(p4.ok());

    auto s42 = lower_bound_witness(double_star(4, 2));
    CHECK(s42.graph.n == 6);
    CHECK(s42.ok());
    CHECK(to_graph6(s42.graph.red) == to_graph6(burr_type2(4).red));

    auto k14 = lower_bound_witness(star_tree(4));
    CHECK(k14.graph.n == 6);
    CHECK(k14.ok());
}

TEST_CASE("exact values agree with exhaustive colouring search") {
    std::vector<Tree> trees;
    for (int n = 2; n <= 4; ++n)
        for (const Tree& t : enumerate_trees(n)) trees.push_back(t);
    trees.push_back(path_tree(5));
    for (const Tree& t : trees) {
        RamseyResult r = ramsey_exact(t, quick());
        REQUIRE(r.exact);
        CHECK(*r.exact == brute_ramsey(t, 6));
    }
    for (int n = 2; n <= 5; ++n)
        for (const Tree& t : enumerate_trees(n))
            for (int N = 1; N <= 6; ++N) {
                SearchResult s = mono_free_search(t, N, quick());
                CHECK((s.outcome == SearchOutcome::Found) == some_coloring_free(t, N));
                if (s.coloring) {
                    CHECK(!find_mono_copy(*s.coloring, t, Color::Red));
                    CHECK(!find_mono_copy(*s.coloring, t, Color::Blue));
                }
            }
}

TEST_CASE("exact values for paths and stars") {
    for (int n = 4; n <= 7; ++n) {
        RamseyResult r = ramsey_exact(path_tree(n), quick());
        REQUIRE(r.exact);
        CHECK(*r.exact == 3 * n / 2 - 1);
        CHECK(r.status == "tight");
    }
    for (int n = 4; n <= 6; ++n) {
        RamseyResult r = ramsey_exact(star_tree(n - 1), quick());
        REQUIRE(r.exact);
        CHECK(*r.exact == (n % 2 == 0 ? 2 * n - 2 : 2 * n - 3));
    }
}

TEST_CASE("double star S_{4,2} on seven vertices") {
    CHECK(s42_free_exists(6));
    CHECK(!s42_free_exists(7));
    RamseyResult r = ramsey_exact(double_star(4, 2), quick());
    REQUIRE(r.exact);
    CHECK(*r.exact == 7);
    CHECK(r.formula == 7);
}

TEST_CASE("search is independent of branching order and job count") {
    for (const Tree& t : {path_tree(6), star_tree(3), double_star(4, 2), star_tree(5)}) {
        RamseyResult r = ramsey_exact(t, quick());
        REQUIRE(r.exact);
        SearchOptions alt = quick();
        alt.blue_first = true;
        CHECK(mono_free_search(t, *r.exact, alt).outcome == SearchOutcome::None);

        SearchResult one = mono_free_search(t, *r.exact - 1, quick(1));
        SearchResult four = mono_free_search(t, *r.exact - 1, quick(4));
        REQUIRE(one.coloring);
        REQUIRE(four.coloring);
        CHECK(to_graph6(one.coloring->red) == to_graph6(four.coloring->red));
    }
}

TEST_CASE("witnesses survive a graph6 round trip") {
    for (const Tree& t : {star_tree(3), star_tree(5), path_tree(6)}) {
        RamseyResult r = ramsey_exact(t, quick());
        REQUIRE(r.witness);
        CHECK(r.witness->n == *r.exact - 1);
        RBGraph back = RBGraph::from_red(from_graph6(to_graph6(r.witness->red)));
        CHECK(!find_mono_copy(back, t, Color::Red));
        CHECK(!find_mono_copy(back, t, Color::Blue));
    }
}

TEST_CASE("budget exhaustion reports bounds") {
    SearchOptions o;
    o.budget_secs = 0;
    RamseyResult r = ramsey_exact(star_tree(7), o);
    CHECK(!r.exact);
    CHECK(r.status == "budget_exceeded");
    CHECK(r.lower_witness_n == 12);
    CHECK(r.smallest_unrefuted == 13);
    auto j = ramsey_to_json(r);
    CHECK(j["exact"].is_null());
    CHECK(j["bounds"] == nlohmann::json::array({13, 13}));
}

TEST_CASE("formula report over small trees") {
    FormulaReport rep = verify_formula(5, quick());
    CHECK(rep.rows.size() == 1 + 1 + 2 + 3);
    CHECK(rep.failures.empty());
    CHECK(rep.budget_exceeded == 0);
    for (const auto& r : rep.rows) {
        REQUIRE(r.exact);
        CHECK(*r.exact >= r.formula);
    }
    CHECK(csv_header() == "tree_code,n,t1,t2,formula,exact,status,seconds");
    CHECK(csv_row(rep.rows[0]).rfind("(()),2,1,1,2,2,tight,", 0) == 0);
}

TEST_CASE("lower bound holds for every tree up to eight vertices") {
    LowerBoundReport rep = verify_lower_bound_all(8);
    CHECK(rep.trees == 1 + 1 + 1 + 2 + 3 + 6 + 11 + 23);
    CHECK(rep.failures.empty());
}
