#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "embed_hosts.hpp"
#include "rt/decomp.hpp"
#include "rt/embed.hpp"
#include "rt/errors.hpp"
#include "rt/gen.hpp"

using namespace rt;
using namespace hosts;

namespace {

// Blue cliques on u1 = 0..a-1 and u2 = a..a+b-1, then `hubs` vertices joined to everything.
BitGraph two_cliques(int a, int b, int hubs, std::vector<int>& u1, std::vector<int>& u2) {
    BitGraph g(a + b + hubs);
    u1.clear();
    u2.clear();
    for (int i = 0; i < a; ++i) u1.push_back(i);
    for (int j = 0; j < b; ++j) u2.push_back(a + j);
    for (auto* u : {&u1, &u2})
        for (size_t i = 0; i < u->size(); ++i)
            for (size_t j = i + 1; j < u->size(); ++j) g.add((*u)[i], (*u)[j]);
    for (int h = a + b; h < a + b + hubs; ++h)
        for (int x = 0; x < a + b + hubs; ++x)
            if (x != h) g.add(h, x);
    return g;
}

void drop_inside(BitGraph& g, const std::vector<int>& u, double eta, Rng& r) {
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = i + 1; j < u.size(); ++j)
            if (r.bernoulli(eta)) g.remove(u[i], u[j]);
}

// Spider: centre 0 with `legs` paths of `len` vertices.
Tree spider_of(int legs, int len) { return spider(std::vector<int>(legs, len)); }

// Spider with `hubs` arms of length three, each ending in a vertex with `per` pendant leaves.
Tree hub_spider(int hubs, int per, int legs, int len) {
    std::vector<Edge> e;
    int id = 1;
    for (int h = 0; h < hubs; ++h) {
        int prev = 0;
        for (int d = 0; d < 3; ++d) {
            e.push_back({prev, id});
            prev = id++;
        }
        for (int j = 0; j < per; ++j) e.push_back({prev, id++});
    }
    for (int k = 0; k < legs; ++k) {
        int prev = 0;
        for (int d = 0; d < len; ++d) {
            e.push_back({prev, id});
            prev = id++;
        }
    }
    return Tree::from_edges(id, e);
}

Tree leafy_caterpillar() {
    std::vector<int> per(2000, 0);
    for (int i = 0; i < 2000; i += 2) per[i] = 1;
    return caterpillar(2000, per);
}

RBGraph from_blue(const BitGraph& blue) {
    RBGraph g = RBGraph::all(blue.n, Color::Red);
    for (int a = 0; a < blue.n; ++a)
        for (int b = a + 1; b < blue.n; ++b)
            if (blue.has(a, b)) g.set(a, b, Color::Blue);
    return g;
}

}  // namespace

TEST_CASE("two-hub lemma") {
    Rng r(1);
    Tree t = random_tree_classes(400, 200, 6, r);
    std::vector<int> u1, u2;
    BitGraph g = two_cliques(400, 400, 2, u1, u2);
    auto res = embed_typeII_two_hubs(t, g, u1, u2, 800, 801, 0.01);
    CHECK(is_copy(g, t, res.map));

    int ok = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Rng rs(seed);
        Tree ts = random_tree_classes(400, 200, 6, rs);
        BitGraph gs = g;
        drop_inside(gs, u1, 0.002, rs);
        drop_inside(gs, u2, 0.002, rs);
        ok += is_copy(gs, ts, embed_typeII_two_hubs(ts, gs, u1, u2, 800, 801, 0.02).map);
    }
    CHECK(ok == 50);

    BitGraph missing = g;
    for (int i = 0; i < 200; ++i) missing.remove(801, u2[i]);
    try {
        embed_typeII_two_hubs(t, missing, u1, u2, 800, 801, 0.01);
        FAIL("expected a gate error");
    } catch (const GateError& e) {
        CHECK(e.gate == "hub degrees");
    }
}

TEST_CASE("rebalancing lemma") {
    Rng r(2);
    Tree t = random_tree_classes(400, 200, 6, r);
    std::vector<int> u1, u2;
    BitGraph g = complete_bipartite(400, 400, u1, u2, 1);
    int w = 800;
    for (int i = 0; i < 400; i += 2) {
        g.add(w, u1[i]);
        g.add(w, u2[i]);
    }
    auto res = embed_typeII_rebalance(t, g, u1, u2, w, 0.01);
    CHECK(is_copy(g, t, res.map));
    CHECK(std::count(res.map.begin(), res.map.end(), w) == 1);
    // Both side capacities hold and together cover every tree vertex but the shared one.
    CHECK(res.stats["cap1"].get<int>() <= res.stats["room1"].get<double>());
    CHECK(res.stats["cap2"].get<int>() <= res.stats["room2"].get<double>());
    CHECK(res.stats["cap1"].get<int>() + res.stats["cap2"].get<int>() == t.n - 1);
    int surplus = res.stats["surplus"].get<int>();
    CHECK(surplus >= 10 * 0.01 * t.n);
    CHECK(surplus <= 25 * 0.01 * t.n);

    Tree even = random_tree_classes(300, 300, 6, r);
    try {
        embed_typeII_rebalance(even, g, u1, u2, w, 0.01);
        FAIL("expected a gate error");
    } catch (const GateError& e) {
        CHECK(e.gate == "class ratio");
    }
}

TEST_CASE("split-blue lemma") {
    DeskConstants dc;
    dc.c = 0.02;
    dc.mu = 0.02;
    Rng r(3);
    std::vector<int> u1, u2;
    BitGraph clean = two_cliques(400, 400, 1, u1, u2);
    Tree t = random_tree(600, 6, r);
    auto res = embed_typeII_split_blue(t, clean, u1, u2, 800, dc, Rng(1));
    CHECK(is_copy(clean, t, res.map));

    BitGraph noisy = clean;
    drop_inside(noisy, u1, 0.002, r);
    drop_inside(noisy, u2, 0.002, r);
    auto rn = embed_typeII_split_blue(t, noisy, u1, u2, 800, dc, Rng(2));
    CHECK(is_copy(noisy, t, rn.map));

    DeskConstants tight = dc;
    tight.edge_constant = 0.001;
    try {
        embed_typeII_split_blue(t, noisy, u1, u2, 800, tight, Rng(3));
        FAIL("expected a gate error");
    } catch (const GateError& e) {
        CHECK(e.gate == "non-edges");
    }
}

TEST_CASE("sparse-cut blue lemma") {
    DeskConstants dc;
    Tree t = spider_of(60, 49);
    SparseCut cut = sparse_cut(t, 1.0 / 12, 0.03);
    REQUIRE(cut.boundary.size() >= 2);
    std::set<int> inb(cut.b.begin(), cut.b.end());
    std::vector<int> u1, u2;
    BitGraph all = two_cliques(2000, 2000, 0, u1, u2);
    // Crossing images: boundary vertices onto the front of U1, their B neighbours onto the front of U2.
    std::vector<int> crossing(t.n, -1);
    int i1 = 0, i2 = 0;
    for (int a : cut.boundary) {
        crossing[a] = u1[i1++];
        for (int y : t.adj[a])
            if (inb.count(y)) crossing[y] = u2[i2++];
    }
    BitGraph full = all;
    for (int x : u1)
        for (int y : u2) full.add(x, y);
    auto res = embed_typeII_sparse_cut_blue(t, full, u1, u2, cut, crossing, dc, Rng(1));
    CHECK(is_copy(full, t, res.map));
    CHECK(res.stats["mismatch_mass"].get<long long>() == 0);

    int accepted = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Rng r(seed);
        BitGraph g = all;
        drop_inside(g, u1, 0.002, r);
        drop_inside(g, u2, 0.002, r);
        for (int x : u1)
            for (int y : u2)
                if (r.bernoulli(0.5)) g.add(x, y);
        for (int a : cut.boundary)
            for (int y : t.adj[a])
                if (inb.count(y)) g.add(crossing[a], crossing[y]);
        try {
            auto rs = embed_typeII_sparse_cut_blue(t, g, u1, u2, cut, crossing, dc, Rng(seed));
            CHECK(is_copy(g, t, rs.map));
            CHECK(rs.stats["mismatch_mass"].get<long long>() <= std::sqrt(dc.mu) * t.n);
            ++accepted;
        } catch (const GateError& e) {
            CHECK(e.gate == "retry budget");
        }
    }
    CHECK(accepted > 0);

    Tree p = path_tree(600);
    SparseCut bad;
    bad.eps = 1.0 / 12;
    bad.d = 25;
    for (int x = 0; x < 600; ++x) (x < 100 ? bad.a : bad.b).push_back(x);
    bad.boundary = {99};
    std::vector<int> cp(600, -1);
    cp[99] = u1[0];
    cp[100] = u2[0];
    try {
        embed_typeII_sparse_cut_blue(p, full, u1, u2, bad, cp, dc, Rng(1));
        FAIL("expected a gate error");
    } catch (const GateError& e) {
        CHECK(e.gate == "invalid cut");
    }
}

TEST_CASE("red leaf-cover lemma, mode 1") {
    DeskConstants dc;
    dc.c = 0.001;
    dc.mu = 0.001;
    dc.alpha = 0.02;
    dc.eps = 1.0 / 12;
    Tree t = leafy_caterpillar();
    Bipartition b = bipartition(t);
    auto scl = sparse_cut_with_leaves(t, b, dc.eps, dc.mu, dc.alpha, dc.c, dc.beta);
    REQUIRE(scl.mode == 1);
    std::vector<int> u1, u2;
    BitGraph g = complete_bipartite(b.t1, b.t1, u1, u2);
    Rng r(5);
    for (int e = 0; e < 3000; ++e) {
        int x = u1[r.below(u1.size())], y = u1[r.below(u1.size())];
        if (x != y) g.add(x, y);
    }
    auto res = embed_typeII_red_leaf_cover(t, g, u1, u2, {}, {}, scl, dc, Rng(1));
    CHECK(is_copy(g, t, res.map));
    CHECK(res.stats["claim_min"].get<long long>() >= 10 * dc.mu * t.n);

    int ell = int(scl.cut.boundary.size());
    std::vector<int> ua(u1.begin(), u1.begin() + ell);
    try {
        embed_typeII_red_leaf_cover(t, g, u1, u2, ua, {}, scl, dc, Rng(1));
        FAIL("expected a gate error");
    } catch (const GateError& e) {
        CHECK(e.gate == "UA size");
    }
}

TEST_CASE("red leaf-cover lemma, mode 2 covers UA") {
    // Mode 2 needs parents with more than sqrt(n) leaves, so c sits above mu here.
    DeskConstants dc;
    dc.c = 0.04;
    dc.mu = 0.005;
    dc.alpha = 1.0 / 12;
    dc.eps = 1.0 / 12;
    Tree t = hub_spider(11, 650, 230, 49);
    Bipartition b = bipartition(t);
    auto scl = sparse_cut_with_leaves(t, b, dc.eps, dc.mu, dc.alpha, dc.c, dc.beta);
    REQUIRE(scl.mode == 2);
    int ell = int(scl.cut.boundary.size());
    REQUIRE(ell >= 2);
    std::vector<int> u1, u2;
    BitGraph g = complete_bipartite(b.t1, b.t1, u1, u2);
    std::vector<int> ua;
    for (int i = 0; i + 1 < ell; ++i) ua.push_back(u1[7 * i + 3]);
    auto res = embed_typeII_red_leaf_cover(t, g, u1, u2, ua, {}, scl, dc, Rng(1));
    CHECK(is_copy(g, t, res.map));
    std::set<int> v1p(scl.v1prime.begin(), scl.v1prime.end());
    for (int u : ua) {
        int x = int(std::find(res.map.begin(), res.map.end(), u) - res.map.begin());
        REQUIRE(x < t.n);
        CHECK(v1p.count(x) == 1);
    }
}

TEST_CASE("Type II driver: two blue hubs") {
    DeskConstants dc;
    Rng r(6);
    Tree t = random_tree_classes(400, 200, 6, r);
    std::vector<int> u1, u2;
    BitGraph blue = two_cliques(399, 398, 2, u1, u2);
    RBGraph g = from_blue(blue);
    REQUIRE(g.n == formula_value(400, 200));
    ExtremalWitness w{2, u1, u2, dc.mu, 400, 200, false};
    REQUIRE(witness_problem(g, w).empty());
    DriveResult res = drive_type2(g, t, w, dc);
    REQUIRE(res.embedding);
    CHECK(res.case_used == "IIY");
    CHECK(is_copy(g.of(res.embedding->color), t, res.embedding->map));
    auto j = drive_to_json(res);
    CHECK(j["case"] == "IIY");
    CHECK(j["case_trace"].size() == res.trace.size());
}

TEST_CASE("Type II driver: red straddler") {
    DeskConstants dc;
    Rng r(7);
    Tree t = random_tree_classes(400, 200, 6, r);
    RBGraph g = add_random_vertex(burr_type2(400), 11);
    auto w = detect_extremal(g, dc.mu, 400, 200);
    REQUIRE(w);
    REQUIRE(w->kind == 2);
    DriveResult res = drive_type2(g, t, *w, dc);
    REQUIRE(res.embedding);
    CHECK(res.case_used == "IIA");
    CHECK(is_copy(g.of(res.embedding->color), t, res.embedding->map));
}

TEST_CASE("Type II driver: perturbed host, leaf-rich tree") {
    DeskConstants dc;
    int ok = 0;
    for (uint64_t seed = 0; seed < 5; ++seed) {
        Rng r(seed);
        Tree t = leaf_rich_tree(400, 200, 6, r);
        RBGraph g = add_random_vertex(perturb(burr_type2(400), 0.002, seed), seed + 50);
        auto w = detect_extremal(g, dc.mu, 400, 200);
        REQUIRE(w);
        DriveResult res = drive_type2(g, t, *w, dc);
        CHECK(!res.trace.empty());
        if (res.embedding) ok += is_copy(g.of(res.embedding->color), t, res.embedding->map);
    }
    CHECK(ok == 5);
}

TEST_CASE("Type II driver: single blue leftover") {
    DeskConstants dc;
    dc.c = 0.02;
    dc.mu = 0.02;
    Rng r(8);
    Tree t = leaf_rich_tree(400, 200, 6, r);
    Bipartition b = bipartition(t);
    std::vector<int> u1, u2;
    int half = b.t1 - 1;
    BitGraph blue = two_cliques(half, half, 1, u1, u2);
    RBGraph g = from_blue(blue);
    REQUIRE(g.n == formula_value(b.t1, b.t2));
    ExtremalWitness w{2, u1, u2, dc.mu, b.t1, b.t2, false};
    DriveResult res = drive_type2(g, t, w, dc);
    REQUIRE(res.embedding);
    CHECK(res.case_used == "IIZ");
    CHECK(is_copy(g.of(res.embedding->color), t, res.embedding->map));
}

TEST_CASE("Type II driver: sparse-cut cases") {
    DeskConstants dc;
    dc.c = 0.001;
    dc.mu = 0.001;
    dc.alpha = 0.02;
    Tree t = leafy_caterpillar();
    Bipartition b = bipartition(t);
    // Extra vertex red to U2 and blue to U1: it joins U1+ and leaves nothing outside.
    std::vector<int> u1, u2;
    BitGraph blue = two_cliques(b.t1 - 1, b.t1 - 1, 0, u1, u2);
    BitGraph big(blue.n + 1);
    for (int a = 0; a < blue.n; ++a) big.rows[a] = blue.rows[a];
    for (auto& row : big.rows) row = Bitset::of(big.n, row.to_vector());
    int x = blue.n;
    for (int v : u1) big.add(x, v);
    RBGraph g = from_blue(big);
    ExtremalWitness w{2, u1, u2, dc.mu, b.t1, b.t2, false};
    DriveResult red = drive_type2(g, t, w, dc);
    REQUIRE(red.embedding);
    CHECK(red.case_used == "IIC");
    CHECK(red.embedding->color == Color::Red);
    CHECK(is_copy(g.red, t, red.embedding->map));

    // A few blue cross edges let the crossing stars embed in blue.
    RBGraph gb = g;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 3; ++j) gb.set(u1[10 + i], u2[20 + 3 * i + j], Color::Blue);
    DriveResult bl = drive_type2(gb, t, w, dc);
    REQUIRE(bl.embedding);
    CHECK(bl.case_used == "IIB");
    CHECK(is_copy(gb.blue, t, bl.embedding->map));
}
