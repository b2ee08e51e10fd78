#include <cmath>
#include <queue>

#include "doctest.h"
#include "rt/errors.hpp"
#include "rt/graph.hpp"

using namespace rt;

namespace {

// Sizes of connected components of one colour class, by BFS on the bit rows.
std::vector<int> component_sizes(const BitGraph& g) {
    std::vector<char> seen(g.n, 0);
    std::vector<int> out;
    for (int s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        int size = 0;
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            ++size;
            for (int w = 0; w < g.n; ++w)
                if (g.has(v, w) && !seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
        }
        out.push_back(size);
    }
    return out;
}

}  // namespace

TEST_CASE("Burr constructions") {
    RBGraph g = burr_type1(3, 2);
    CHECK(g.n == 5);
    auto blue = component_sizes(g.blue);
    std::sort(blue.begin(), blue.end());
    CHECK(blue == std::vector<int>{1, 4});
    for (int v = 0; v < 4; ++v) CHECK(g.red.has(v, 4));
    CHECK(g.red.edges() == 4);

    RBGraph h = burr_type2(4);
    CHECK(h.n == 6);
    for (int s : component_sizes(h.blue)) CHECK(s == 3);
    CHECK(h.red.edges() == 9);
    for (int u = 0; u < 3; ++u)
        for (int v = 3; v < 6; ++v) CHECK(h.red.has(u, v));
    CHECK_THROWS_AS(burr_type1(2, 3), InputError);
    CHECK_THROWS_AS(burr_type2(1), InputError);

    for (int t1 = 2; t1 <= 8; ++t1)
        for (int t2 = 2; t2 <= t1; ++t2) {
            RBGraph b = burr_type1(t1, t2);
            for (int s : component_sizes(b.blue)) CHECK(s <= t1 + t2 - 1);
            // Red is bipartite with the small side of t2 - 1 vertices.
            for (int u = 0; u < b.n; ++u)
                for (int v = u + 1; v < b.n; ++v)
                    if (b.red.has(u, v)) CHECK(((u < t1 + t2 - 1) != (v < t1 + t2 - 1)));
        }
}

TEST_CASE("perturbation") {
    RBGraph g = burr_type2(50);
    CHECK(perturb(g, 0.0, 1).red.rows == g.red.rows);
    RBGraph f = perturb(g, 1.0, 1);
    CHECK(f.red.rows == g.blue.rows);
    RBGraph b = RBGraph::all(500, Color::Blue);
    RBGraph p = perturb(b, 0.01, 99);
    double pairs = 500.0 * 499 / 2, mean = 0.01 * pairs, sd = std::sqrt(pairs * 0.01 * 0.99);
    CHECK(std::abs(p.red.edges() - mean) <= 3 * sd);
    CHECK(perturb(b, 0.01, 99).red.rows == p.red.rows);
    CHECK(perturb(b, 0.01, 98).red.rows != p.red.rows);
}

TEST_CASE("graph6 round trip") {
    for (int n : {0, 1, 2, 5, 62, 63, 100}) {
        RBGraph g = perturb(RBGraph::all(n, Color::Blue), 0.3, n);
        std::string s = to_graph6(g.red);
        BitGraph back = from_graph6(s);
        CHECK(back.n == n);
        CHECK(back.rows == g.red.rows);
    }
    // K2 is "A_". The path 0-1-2 has pair bits 1,0,1 and encodes as "Bg".
    BitGraph k2(2);
    k2.add(0, 1);
    CHECK(to_graph6(k2) == "A_");
    BitGraph p3(3);
    p3.add(0, 1);
    p3.add(1, 2);
    CHECK(to_graph6(p3) == "Bg");
    CHECK_THROWS_AS(from_graph6("B"), InputError);
    CHECK(graph6_sidecar(burr_type2(3))["format"] == "graph6-red");
}

TEST_CASE("extremality detection") {
    RBGraph g = burr_type1(300, 200);
    auto w = detect_extremal(g, 0.01, 300, 200);
    REQUIRE(w);
    CHECK(w->kind == 1);
    CHECK(!w->swapped);
    CHECK(witness_problem(g, *w).empty());

    RBGraph h = perturb(burr_type2(300), 0.001, 5);
    auto w2 = detect_extremal(h, 0.05, 300, 150);
    REQUIRE(w2);
    CHECK(w2->kind == 2);
    CHECK(witness_problem(h, *w2).empty());

    RBGraph sw = burr_type2(200).swapped();
    auto w3 = detect_extremal(sw, 0.05, 200, 100);
    REQUIRE(w3);
    CHECK(w3->swapped);

    for (uint64_t seed = 0; seed < 5; ++seed) {
        RBGraph r = perturb(RBGraph::all(200, Color::Blue), 0.5, seed);
        auto wr = detect_extremal(r, 0.05, 100, 60);
        if (wr) CHECK(witness_problem(r, *wr).empty());
    }
    ExtremalWitness bad{1, {0, 1}, {2}, 0.01, 300, 200, false};
    CHECK(!witness_problem(g, bad).empty());
}

TEST_CASE("U+ partitions") {
    int t1 = 200, t2 = 100, n = t1 + t2;
    RBGraph g = burr_type1(t1, t2);
    std::vector<int> u1, u2;
    for (int v = 0; v < g.n; ++v) (v < t1 + t2 - 1 ? u1 : u2).push_back(v);
    auto p = partition_plus_type1(g, u1, u2, 0.1, n, 0.01);
    CHECK(p.u1p == u1);
    CHECK(p.u2p == u2);
    CHECK(p.d == 0);
    CHECK(p.x.empty());
    CHECK(p.k == -1);
    auto q = partition_plus_type1(g, u1, u2, 1.0 * g.n, n, 0.01);
    CHECK(q.u2p.empty());

    RBGraph noisy = perturb(g, 0.002, 3);
    auto w = detect_extremal(noisy, 0.02, t1, t2);
    REQUIRE(w);
    auto r = partition_plus_type1(noisy, w->u1, w->u2, 0.1, n, 0.02);
    CHECK(r.u1p.size() + r.u2p.size() == size_t(noisy.n));
    CHECK(r.x.size() <= 2 * 0.02 * n);

    RBGraph b2 = burr_type2(150);
    std::vector<int> a, b;
    for (int v = 0; v < b2.n; ++v) (v < 149 ? a : b).push_back(v);
    auto s = partition_plus_type2(b2, a, b, 0.1, 225);
    CHECK(s.leftover.empty());
    RBGraph planted = add_random_vertex(b2, 1);
    for (int v = 0; v < b2.n; ++v) planted.set(v, b2.n, Color::Blue);
    auto s2 = partition_plus_type2(planted, a, b, 0.1, 225);
    CHECK(s2.leftover == std::vector<int>{b2.n});

    RBGraph nb = perturb(add_random_vertex(b2, 2), 0.002, 4);
    auto s3 = partition_plus_type2(nb, a, b, 0.1, 225);
    for (int v : s3.leftover) {
        CHECK(nb.red.degree_in(v, Bitset::of(nb.n, a)) < 0.1 * 225);
        CHECK(nb.red.degree_in(v, Bitset::of(nb.n, b)) < 0.1 * 225);
    }
}
