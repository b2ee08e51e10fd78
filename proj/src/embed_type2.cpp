#include <algorithm>
#include <cmath>

#include "embed_util.hpp"

namespace rt {

using namespace detail;

namespace {

std::vector<char> mark(int n, const std::vector<int>& vs) {
    std::vector<char> m(n, 0);
    for (int v : vs) m[v] = 1;
    return m;
}

void check_disjoint(const Bitset& a, const Bitset& b) {
    if ((a & b).any()) throw InputError("U1 and U2 overlap");
}

void require_min_degree(const BitGraph& g, const std::vector<int>& u, double slack, const std::string& name) {
    int md = min_degree_within(g, u);
    require(md >= int(u.size()) - slack, "min-degree",
            "delta(G[" + name + "])=" + std::to_string(md) + " < |" + name + "|-" + num(slack));
}

void require_hub(const BitGraph& g, int v, const Bitset& s, int size, double slack, const std::string& name) {
    int d = g.degree_in(v, s);
    require(d >= size - slack, "hub degrees",
            "vertex " + std::to_string(v) + " has " + std::to_string(d) + " neighbours in " + name + ", need " +
                num(size - slack));
}

LemmaResult finish(const BitGraph& g, const Tree& t, Placer& pl, std::string line) {
    std::string bad = embedding_problem(g, t, pl.map);
    audit(bad.empty(), "Type II embedding: " + bad);
    LemmaResult r;
    r.map = pl.map;
    r.trace.push_back(std::move(line));
    return r;
}

// Greedy images for the stars of T[A,B] centred at the cut's boundary: each centre gets a free vertex
// of sa with enough free neighbours in sb. A single pass leaves a maximal set of placed stars.
struct Cover {
    std::vector<int> images;  // tree vertex -> host, -1 when unplaced
    std::vector<int> ua, ub;
    int placed = 0;
};

Cover cover_crossing(const BitGraph& g, const Tree& t, const SparseCut& cut, const Bitset& sa, const Bitset& sb) {
    Cover c;
    c.images.assign(t.n, -1);
    std::vector<char> inb = mark(t.n, cut.b);
    Bitset used(g.n);
    for (int a : cut.boundary) {
        std::vector<int> kids;
        for (int y : t.adj[a])
            if (inb[y]) kids.push_back(y);
        Bitset free_a = sa - used;
        for (int w = free_a.first(); w >= 0; w = free_a.next(w)) {
            Bitset avail = (g.rows[w] & sb) - used;
            if (avail.count() < int(kids.size())) continue;
            c.images[a] = w;
            used.set(w);
            c.ua.push_back(w);
            int h = avail.first();
            for (int y : kids) {
                c.images[y] = h;
                used.set(h);
                c.ub.push_back(h);
                h = avail.next(h);
            }
            ++c.placed;
            break;
        }
    }
    std::sort(c.ua.begin(), c.ua.end());
    std::sort(c.ub.begin(), c.ub.end());
    return c;
}

}  // namespace

LemmaResult embed_typeII_two_hubs(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                  const std::vector<int>& u2, int v1, int v2, double mu) {
    int n = t.n;
    double mun = mu * n;
    Bitset s1 = set_of(g.n, u1), s2 = set_of(g.n, u2);
    check_disjoint(s1, s2);
    if (v1 == v2 || s1.test(v1) || s1.test(v2) || s2.test(v1) || s2.test(v2))
        throw InputError("hubs must be distinct and outside U1 and U2");
    for (auto [u, name] : {std::pair{&u1, "U1"}, std::pair{&u2, "U2"}})
        require(u->size() >= (2.0 / 3 - mu) * n, "U sizes",
                std::string("|") + name + "|=" + std::to_string(u->size()) + " < (2/3-mu)n=" +
                    num((2.0 / 3 - mu) * n));
    require_min_degree(g, u1, mun, "U1");
    require_min_degree(g, u2, mun, "U2");
    for (int h : {v1, v2}) {
        require_hub(g, h, s1, int(u1.size()), mun, "U1");
        require_hub(g, h, s2, int(u2.size()), mun, "U2");
    }
    TwoVertexSplit sp = two_vertex_split(t, std::min(0.01, 10 * mu));
    Bitset c1 = s1 & g.rows[v1] & g.rows[v2];
    Bitset c2 = s2 & g.rows[v1] & g.rows[v2];
    Placer pl(g, n);
    pl.put(sp.boundary[0], v1);
    if (sp.boundary.size() > 1) pl.put(sp.boundary[1], v2);
    std::vector<char> ina = mark(n, sp.a);
    if (int bad = grow(pl, t, ina, [&](int) -> const Bitset& { return c1; }, nullptr); bad >= 0)
        throw GateError("greedy", "no image in U1 for tree vertex " + std::to_string(bad));
    std::vector<char> inb = mark(n, sp.b);
    for (int x : sp.boundary) inb[x] = 1;
    if (int bad = grow(pl, t, inb, [&](int) -> const Bitset& { return c2; }, nullptr); bad >= 0)
        throw GateError("greedy", "no image in U2 for tree vertex " + std::to_string(bad));
    LemmaResult r = finish(g, t, pl,
                           "two-vertex split branch " + std::to_string(sp.branch) + ", |A|=" +
                               std::to_string(sp.a.size()) + " |B|=" + std::to_string(sp.b.size()));
    r.stats["a"] = sp.a.size();
    r.stats["b"] = sp.b.size();
    r.stats["boundary"] = sp.boundary;
    return r;
}

LemmaResult embed_typeII_rebalance(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                   const std::vector<int>& u2, int w, double mu) {
    int n = t.n;
    double mun = mu * n;
    Bipartition b = bipartition(t);
    Bitset s1 = set_of(g.n, u1), s2 = set_of(g.n, u2);
    check_disjoint(s1, s2);
    if (s1.test(w) || s2.test(w)) throw InputError("w must lie outside U1 and U2");
    require(b.t1 >= 1.1 * b.t2, "class ratio",
            "t1=" + std::to_string(b.t1) + " < 1.1 t2=" + num(1.1 * b.t2));
    require(u1.size() >= b.t1 - mun && u2.size() >= b.t1 - mun, "U sizes",
            "|U1|=" + std::to_string(u1.size()) + " |U2|=" + std::to_string(u2.size()) + ", need t1-mu n=" +
                num(b.t1 - mun));
    for (int u : u1) require_hub(g, u, s2, int(u2.size()), mun, "U2");
    for (int u : u2) require_hub(g, u, s1, int(u1.size()), mun, "U1");
    int d1 = g.degree_in(w, s1), d2 = g.degree_in(w, s2);
    require(d1 >= mun && d2 >= mun, "w degrees",
            "w has " + std::to_string(d1) + " and " + std::to_string(d2) + " neighbours, need mu n=" + num(mun));
    SurplusSplit ss = bipartite_surplus_split(t, b, mu);
    int v = ss.split.v;
    std::vector<char> in1 = mark(n, ss.split.t1);
    // T1 goes in with its classes swapped.
    auto to_u1 = [&](int x) { return in1[x] ? b.side[x] == 1 : b.side[x] == 0; };
    int cap1 = 0, cap2 = 0;
    for (int x = 0; x < n; ++x)
        if (x != v) (to_u1(x) ? cap1 : cap2) += 1;
    require(cap1 <= u1.size() - mun && cap2 <= u2.size() - mun, "capacity",
            "needs " + std::to_string(cap1) + " in U1 and " + std::to_string(cap2) + " in U2, room " +
                num(u1.size() - mun) + " and " + num(u2.size() - mun));
    Placer pl(g, n);
    pl.put(v, w);
    std::vector<char> all(n, 1);
    if (int bad = grow(pl, t, all, [&](int x) -> const Bitset& { return to_u1(x) ? s1 : s2; }, nullptr);
        bad >= 0)
        throw GateError("greedy", "no image for tree vertex " + std::to_string(bad));
    LemmaResult r = finish(g, t, pl, "surplus " + std::to_string(ss.surplus) + ", shared vertex " + std::to_string(v));
    r.stats["surplus"] = ss.surplus;
    r.stats["cap1"] = cap1;
    r.stats["cap2"] = cap2;
    r.stats["room1"] = u1.size() - mun;
    r.stats["room2"] = u2.size() - mun;
    return r;
}

LemmaResult embed_typeII_split_blue(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                    const std::vector<int>& u2, int v, const DeskConstants& dc, Rng rng) {
    int n = t.n;
    double mun = dc.mu * n;
    Bitset s1 = set_of(g.n, u1), s2 = set_of(g.n, u2);
    check_disjoint(s1, s2);
    if (s1.test(v) || s2.test(v)) throw InputError("v must lie outside U1 and U2");
    int need1 = (2 * n + 2) / 3 - 1;
    require(int(u1.size()) >= need1, "U sizes",
            "|U1|=" + std::to_string(u1.size()) + " < ceil(2n/3)-1=" + std::to_string(need1));
    require(u2.size() >= (2.0 / 3 - dc.mu) * n, "U sizes",
            "|U2|=" + std::to_string(u2.size()) + " < (2/3-mu)n=" + num((2.0 / 3 - dc.mu) * n));
    require_min_degree(g, u1, mun, "U1");
    require_min_degree(g, u2, mun, "U2");
    long long ne = non_edges_within(g, u1);
    require(ne <= dc.edge_constant * n, "non-edges",
            std::to_string(ne) + " non-edges in U1 > C n=" + num(dc.edge_constant * n));
    require_hub(g, v, s1, int(u1.size()), mun, "U1");
    require_hub(g, v, s2, int(u2.size()), mun, "U2");

    TreeSplit sp = balanced_split(t);
    const std::vector<int>& big = sp.t1.size() >= sp.t2.size() ? sp.t1 : sp.t2;
    const std::vector<int>& small = sp.t1.size() >= sp.t2.size() ? sp.t2 : sp.t1;
    Induced in = induced_tree(t, big);
    int local_v = int(std::find(big.begin(), big.end(), sp.v) - big.begin());
    int m = in.tree.n;
    // Host for the larger part: v plus the best-connected vertices of U1, keeping k within mu m.
    int k = int(u1.size()) + 1 - m;
    int kk = std::min(k, int(std::floor(dc.mu * m)));
    std::vector<int> key(g.n, 0);
    for (int u : u1) key[u] = -g.degree_in(u, s1);
    std::vector<int> host = sorted_by_key(u1, key);
    host.resize(m - 1 + kk);
    host.push_back(v);
    std::sort(host.begin(), host.end());
    LemmaResult inner;
    try {
        inner = embed_leaves_IB1(in.tree, g, host, {}, CaseParams{kk, 0, {}}, dc, Anchor{local_v, v}, rng.split(1));
    } catch (const GateError& e) {
        throw GateError("IB1 " + e.gate, e.what());
    }
    Placer pl(g, n);
    for (int i = 0; i < m; ++i) pl.put(in.ids[i], inner.map[i]);
    std::vector<char> ins = mark(n, small);
    if (int bad = grow(pl, t, ins, [&](int) -> const Bitset& { return s2; }, nullptr); bad >= 0)
        throw GateError("greedy", "no image in U2 for tree vertex " + std::to_string(bad));
    LemmaResult r = finish(g, t, pl,
                           "balanced split " + std::to_string(big.size()) + "/" + std::to_string(small.size()) +
                               ", larger part via IB1");
    r.attempts = inner.attempts;
    r.stats["inner"] = inner.stats;
    r.stats["k"] = kk;
    r.stats["non_edges"] = ne;
    return r;
}

LemmaResult embed_typeII_sparse_cut_blue(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                         const std::vector<int>& u2, const SparseCut& cut,
                                         const std::vector<int>& crossing, const DeskConstants& dc, Rng rng) {
    int n = t.n;
    double mun = dc.mu * n;
    double eps = cut.eps;
    Bitset s1 = set_of(g.n, u1), s2 = set_of(g.n, u2);
    check_disjoint(s1, s2);
    if (int(crossing.size()) != n) throw InputError("crossing must have one entry per tree vertex");
    for (auto [u, name] : {std::pair{&u1, "U1"}, std::pair{&u2, "U2"}})
        require(u->size() >= (2.0 / 3 - eps / 3) * n, "U sizes",
                std::string("|") + name + "|=" + std::to_string(u->size()) + " < (2/3-eps/3)n=" +
                    num((2.0 / 3 - eps / 3) * n));
    require_min_degree(g, u1, mun, "U1");
    require_min_degree(g, u2, mun, "U2");
    try {
        check_sparse_cut(t, cut);
    } catch (const AuditError& e) {
        throw GateError("invalid cut", e.what());
    }
    std::vector<char> ina = mark(n, cut.a), inb = mark(n, cut.b), bd = mark(n, cut.boundary);
    Bitset reserved(g.n), images(g.n);
    for (int a : cut.boundary) {
        int h = crossing[a];
        require(h >= 0 && s1.test(h) && !images.test(h), "crossing",
                "boundary vertex " + std::to_string(a) + " needs a fresh image in U1");
        images.set(h);
        reserved.set(h);
        for (int y : t.adj[a]) {
            if (!inb[y]) continue;
            int hy = crossing[y];
            require(hy >= 0 && s2.test(hy) && !images.test(hy) && g.has(h, hy), "crossing",
                    "edge " + std::to_string(a) + "-" + std::to_string(y) + " is not mapped onto an edge of G[U1,U2]");
            images.set(hy);
        }
    }
    // Components of T[A' + B] and their sizes.
    std::vector<int> comp(n, -1), csize;
    for (int r = 0; r < n; ++r) {
        if (comp[r] >= 0 || !(bd[r] || inb[r])) continue;
        int id = int(csize.size());
        csize.push_back(0);
        std::vector<int> st{r};
        comp[r] = id;
        while (!st.empty()) {
            int x = st.back();
            st.pop_back();
            ++csize[id];
            for (int y : t.adj[x])
                if (comp[y] < 0 && (bd[y] || inb[y])) {
                    comp[y] = id;
                    st.push_back(y);
                }
        }
    }
    int start = -1;
    for (int x : cut.a)
        if (!bd[x]) {
            start = x;
            break;
        }
    if (start < 0) start = cut.a.front();
    std::vector<int> order{start}, parent(n, -1);
    std::vector<char> seen(n, 0);
    seen[start] = 1;
    for (size_t i = 0; i < order.size(); ++i)
        for (int y : t.adj[order[i]])
            if (ina[y] && !seen[y]) {
                seen[y] = 1;
                parent[y] = order[i];
                order.push_back(y);
            }
    double bound = std::sqrt(dc.mu) * n;
    Bitset pool_a = s1 - reserved;
    std::string last;
    for (int attempt = 0; attempt < dc.retry_budget; ++attempt) {
        Rng ra = rng.split(uint64_t(attempt));
        Placer pl(g, n);
        int stuck = -1;
        for (int x : order) {
            int h = crossing[x];
            if (bd[x] && x != start && !pl.used.test(h) && g.has(pl.map[parent[x]], h)) {
                pl.put(x, h);
                continue;
            }
            h = pl.choose(t, x, pool_a, &ra);
            if (h < 0) {
                stuck = x;
                break;
            }
            pl.put(x, h);
        }
        if (stuck >= 0) {
            last = "no image in U1 for tree vertex " + std::to_string(stuck);
            continue;
        }
        std::vector<char> cmatched(csize.size(), 1);
        long long mass = 0;
        for (int a : cut.boundary)
            if (pl.map[a] != crossing[a]) {
                cmatched[comp[a]] = 0;
                mass += csize[comp[a]] - 1;
            }
        if (mass > bound) {
            last = "mismatch mass " + std::to_string(mass) + " > sqrt(mu) n=" + num(bound);
            continue;
        }
        std::vector<char> inm(n, 0), inx(n, 0);
        for (int y : cut.b) {
            if (cmatched[comp[y]]) {
                inm[y] = 1;
                if (crossing[y] >= 0) pl.put(y, crossing[y]);
            } else {
                inx[y] = 1;
            }
        }
        int bad = grow(pl, t, inm, [&](int) -> const Bitset& { return s2; }, nullptr);
        if (bad < 0) bad = grow(pl, t, inx, [&](int) -> const Bitset& { return s1; }, nullptr);
        if (bad >= 0) {
            last = "no image for B vertex " + std::to_string(bad);
            continue;
        }
        LemmaResult r = finish(g, t, pl, "mismatch mass " + std::to_string(mass) + " <= " + num(bound));
        r.attempts = attempt + 1;
        r.stats["mismatch_mass"] = mass;
        r.stats["bound"] = bound;
        return r;
    }
    throw GateError("retry budget", last);
}

LemmaResult embed_typeII_red_leaf_cover(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                        const std::vector<int>& u2, const std::vector<int>& ua,
                                        const std::vector<int>& ub, const SparseCutLeaves& payload,
                                        const DeskConstants& dc, Rng rng) {
    int n = t.n;
    Bipartition b = bipartition(t);
    int t1 = b.t1, t2 = b.t2;
    double mun = dc.mu * n, sqn = std::sqrt(double(n));
    Bitset s1 = set_of(g.n, u1), s2 = set_of(g.n, u2), sa = set_of(g.n, ua), sb = set_of(g.n, ub);
    check_disjoint(s1, s2);
    if ((sa - s1).any() || (sb - s2).any()) throw InputError("UA must lie in U1 and UB in U2");
    int ell = int(payload.cut.boundary.size());
    bool tight = int(u1.size()) == t1 - 1;

    require(g.n <= 2 * n, "host order", std::to_string(g.n) + " vertices > 2n");
    require(int(u1.size()) >= t1 - 1, "U1 size", "|U1|=" + std::to_string(u1.size()) + " < t1-1");
    require(u2.size() >= (1 - dc.mu) * t1, "U2 size",
            "|U2|=" + std::to_string(u2.size()) + " < (1-mu)t1=" + num((1 - dc.mu) * t1));
    if (tight) {
        long long e = g.edges_in(s2);
        require(e >= dc.edge_constant * n, "U2 edges",
                std::to_string(e) + " edges in G[U2] < C n=" + num(dc.edge_constant * n));
    }
    Bitset m1(g.n), m2(g.n);
    for (auto [u, so, m, name] : {std::tuple{&u1, &s2, &m1, "U1"}, std::tuple{&u2, &s1, &m2, "U2"}}) {
        int size_other = int(so->count());
        for (int x : *u) {
            int d = g.degree_in(x, *so);
            require(d >= dc.beta * n, "cross degree",
                    std::string("vertex ") + std::to_string(x) + " in " + name + " has " + std::to_string(d) +
                        " cross neighbours < beta n=" + num(dc.beta * n));
            if (d >= size_other - mun) m->set(x);
        }
        int low = int(u->size()) - (m == &m1 ? m1 : m2).count();
        require(low <= mun, "low-degree count",
                std::to_string(low) + " vertices of " + name + " miss more than mu n across");
    }
    require(ell <= 2 * dc.c * n, "boundary size", "l=" + std::to_string(ell) + " > 2cn=" + num(2 * dc.c * n));
    require(int(ua.size()) < ell, "UA size", "|UA|=" + std::to_string(ua.size()) + " >= l=" + std::to_string(ell));
    double eps = payload.cut.eps;
    require(ub.size() <= (2.0 / 3 - eps) * n, "UB size",
            "|UB|=" + std::to_string(ub.size()) + " > (2/3-eps)n=" + num((2.0 / 3 - eps) * n));
    {
        Bitset rest = s2 - sb;
        int rc = rest.count();
        for (int x : members(s1 - sa)) {
            int d = g.degree_in(x, rest);
            require(d >= rc - sqn, "sqrt-n degrees",
                    "vertex " + std::to_string(x) + " has " + std::to_string(d) + " neighbours in U2\\UB, need " +
                        num(rc - sqn));
        }
    }
    require(t.max_degree() <= dc.c * n, "max-degree",
            "Delta=" + std::to_string(t.max_degree()) + " > cn=" + num(dc.c * n));
    require(t1 >= (2 - dc.mu) * t2, "class ratio", "t1 < (2-mu)t2");

    // Payload.
    int want = int(std::ceil(dc.alpha * n));
    std::vector<int> L = payload.leaves;
    if (payload.mode == 1 && int(L.size()) > want) L.resize(want);
    std::vector<char> inL = mark(n, L), inV1p = mark(n, payload.v1prime);
    for (int x : L)
        require(t.is_leaf(x) && b.side[x] == 0 && !inV1p[x], "payload", "L holds a non-leaf or a V2 vertex");
    require(int(L.size()) >= want, "payload", "|L|=" + std::to_string(L.size()) + " < alpha n");
    std::vector<int> lcount(n, 0);
    for (int x : L) ++lcount[t.adj[x][0]];
    if (payload.mode == 1) {
        for (int q = 0; q < n; ++q)
            require(lcount[q] <= sqn, "payload", "vertex " + std::to_string(q) + " parents more than sqrt n leaves of L");
    } else {
        require(int(payload.v1prime.size()) == ell, "payload", "|V1'| != l");
        std::vector<char> nb(n, 0);
        for (int x : payload.v1prime)
            for (int y : t.adj[x]) {
                require(!nb[y], "payload", "V1' vertices share neighbour " + std::to_string(y));
                nb[y] = 1;
                require(lcount[y] == 0, "payload", "N(V1') meets N(L) at " + std::to_string(y));
            }
    }

    // s1: a leaf in V1 outside V1' whose neighbour parents the fewest leaves of L; ties prefer s1 outside L.
    int s1v = -1;
    for (int x : t.leaves()) {
        if (b.side[x] != 0 || inV1p[x]) continue;
        auto score = [&](int y) { return 2 * lcount[t.adj[y][0]] + inL[y]; };
        if (s1v < 0 || score(x) < score(s1v)) s1v = x;
    }
    require(s1v >= 0, "leaf s1", "no leaf in V1 outside V1'");
    int s2v = t.adj[s1v][0];
    Rooted rt = root_at(t, s1v);

    std::vector<char> inLp(n, 0);
    std::vector<int> cnt(n, 0), parents;
    for (int x : L)
        if (t.adj[x][0] != s2v && x != s1v) {
            inLp[x] = 1;
            int q = t.adj[x][0];
            if (cnt[q]++ == 0) parents.push_back(q);
        }
    std::vector<int> lp;
    for (int x = 0; x < n; ++x)
        if (inLp[x]) lp.push_back(x);
    // P1 / P2 by descending leaf count, each parent to the lighter side.
    std::stable_sort(parents.begin(), parents.end(), [&](int a, int c) { return cnt[a] > cnt[c]; });
    std::vector<char> part(n, 0);  // 1: P1, 2: P2
    int sum1 = 0, sum2 = 0;
    for (int q : parents) {
        if (sum1 <= sum2) {
            part[q] = 1;
            sum1 += cnt[q];
        } else {
            part[q] = 2;
            sum2 += cnt[q];
        }
    }
    require(std::min(sum1, sum2) >= dc.alpha * n / 10, "leaf split",
            "L1=" + std::to_string(sum1) + " L2=" + std::to_string(sum2) + ", need alpha n/10=" + num(dc.alpha * n / 10));

    // phi: UA -> V1' avoiding s2's neighbours.
    std::vector<int> phi_host(n, -1), phip(n, -1);
    if (payload.mode == 2) {
        std::vector<int> cand;
        for (int x : payload.v1prime)
            if (!t.is_leaf(x) || t.adj[x][0] != s2v) {
                bool adj = false;
                for (int y : t.adj[x]) adj |= y == s2v;
                if (!adj) cand.push_back(x);
            }
        require(cand.size() >= ua.size(), "phi", "too few V1' vertices away from s2");
        for (size_t i = 0; i < ua.size(); ++i) {
            int x = cand[i];
            phi_host[x] = ua[i];
            int q = rt.parent[x];
            require(cnt[q] == 0, "payload", "parent of V1' vertex " + std::to_string(x) + " lies in P");
            phip[q] = ua[i];
        }
    }

    std::vector<int> order;
    for (int x : rt.order)
        if (!inLp[x]) order.push_back(x);
    audit(order[0] == s1v && order[1] == s2v, "leaf cover ordering starts at s1, s2");

    double zmax = 2 * dc.beta * n, zdeg = dc.beta * dc.beta * n / 2;
    int free_target = int(std::ceil(2 * dc.alpha * n));
    std::string last;
    for (int attempt = 0; attempt < dc.retry_budget; ++attempt) {
        Rng ra = rng.split(uint64_t(attempt));
        Bitset z(g.n);
        for (int x : members(m2))
            if (ra.bernoulli(dc.beta)) z.set(x);
        int zc = z.count();
        if (zc > zmax) {
            last = "|Z|=" + std::to_string(zc) + " > 2 beta n";
            continue;
        }
        int low = -1;
        for (int x : u1)
            if (g.degree_in(x, z) < zdeg) {
                low = x;
                break;
            }
        if (low >= 0) {
            last = "vertex " + std::to_string(low) + " has fewer than beta^2 n/2 neighbours in Z";
            continue;
        }
        if (tight && g.edges_in(s2 - z) == 0) {
            last = "G[U2]-Z has no edge";
            continue;
        }
        Bitset free2 = m2 - (sb | z);
        if (free2.count() < free_target) {
            last = "|U2- \\ (UB+Z)|=" + std::to_string(free2.count()) + " < 2 alpha n";
            continue;
        }
        {
            int keep = 0;
            for (int x = free2.first(); x >= 0; x = free2.next(x))
                if (++keep > free_target) free2.reset(x);
        }
        Bitset ubig = (m2 - z) - free2;  // U2- inside the enlarged UB
        Bitset pool1 = m1 - sa;

        Placer pl(g, n);
        int h1 = -1, h2 = -1;
        if (tight) {
            Bitset side = s2 - z;
            for (int pass = 0; pass < 2 && h1 < 0; ++pass)
                for (int x = side.first(); x >= 0; x = side.next(x)) {
                    Bitset nb = g.rows[x] & side;
                    if (pass == 0) nb &= m2;
                    if (nb.any()) {
                        h1 = x;
                        h2 = nb.first();
                        break;
                    }
                }
        } else {
            for (int pass = 0; pass < 2 && h1 < 0; ++pass) {
                Bitset from = pass == 0 ? pool1 : s1 - sa;
                Bitset to = pass == 0 ? ubig : s2 - z;
                for (int x = from.first(); x >= 0; x = from.next(x)) {
                    Bitset nb = g.rows[x] & to;
                    if (nb.any()) {
                        h1 = x;
                        h2 = nb.first();
                        break;
                    }
                }
            }
        }
        if (h1 < 0) {
            last = "no edge for s1 s2";
            continue;
        }
        pl.put(s1v, h1);
        pl.put(s2v, h2);
        int stuck = -1;
        for (size_t i = 2; i < order.size() && stuck < 0; ++i) {
            int x = order[i];
            int hp = pl.map[rt.parent[x]];
            if (b.side[x] == 0 && phi_host[x] >= 0) {
                int u = phi_host[x];
                audit(!pl.used.test(u) && g.has(hp, u), "phi image adjacent to its parent's image");
                pl.put(x, u);
                continue;
            }
            Bitset pool(g.n);
            if (b.side[x] == 0)
                pool = pool1;
            else if (part[x] == 1)
                pool = free2;
            else if (part[x] == 2)
                pool = z;
            else if (phip[x] >= 0)
                pool = g.rows[phip[x]] & z;
            else if (sa.test(hp))
                pool = z;
            else
                pool = ubig;
            int h = pl.choose(t, x, pool, &ra);
            if (h < 0) {
                stuck = x;
                break;
            }
            pl.put(x, h);
        }
        if (stuck >= 0) {
            last = "no image for tree vertex " + std::to_string(stuck);
            continue;
        }
        // Claim: every uncovered vertex of U1 sees at least 10 mu n leaf demand.
        std::vector<int> weight(g.n, 0);
        Bitset carriers(g.n);
        for (int q : parents) {
            weight[pl.map[q]] = cnt[q];
            carriers.set(pl.map[q]);
        }
        long long claim_min = -1;
        int claim_at = -1;
        for (int v : members(s1 - pl.used)) {
            Bitset nb = g.rows[v] & carriers;
            long long s = 0;
            for (int h = nb.first(); h >= 0; h = nb.next(h)) s += weight[h];
            if (claim_min < 0 || s < claim_min) {
                claim_min = s;
                claim_at = v;
            }
        }
        if (claim_min >= 0 && claim_min < 10 * mun) {
            last = "claim fails at vertex " + std::to_string(claim_at) + ": demand " + std::to_string(claim_min) +
                   " < 10 mu n=" + num(10 * mun);
            continue;
        }
        std::vector<int> viol;
        if (!place_leaves(pl, t, lp, s1, &viol)) {
            last = "leaf star packing failed, " + std::to_string(viol.size()) + " parents in a Hall violator";
            continue;
        }
        if (payload.mode == 2)
            for (int u : ua) audit(pl.used.test(u), "UA vertex " + std::to_string(u) + " covered by phi");
        LemmaResult r = finish(g, t, pl,
                               "mode " + std::to_string(payload.mode) + ", |L'|=" + std::to_string(lp.size()) +
                                   ", claim min " + std::to_string(claim_min));
        r.attempts = attempt + 1;
        r.stats["mode"] = payload.mode;
        r.stats["claim_min"] = claim_min;
        r.stats["z"] = zc;
        r.stats["L1"] = sum1;
        r.stats["L2"] = sum2;
        r.stats["ua"] = ua.size();
        return r;
    }
    throw GateError("retry budget", last);
}

DriveResult drive_type2(const RBGraph& g0, const Tree& t, const ExtremalWitness& w, const DeskConstants& dc) {
    dc.check();
    if (w.kind != 2) throw InputError("drive_type2 needs a Type II witness");
    Bipartition b = bipartition(t);
    if (g0.n != formula_value(b.t1, b.t2))
        throw InputError("host has " + std::to_string(g0.n) + " vertices, expected " +
                         std::to_string(formula_value(b.t1, b.t2)));
    if (b.t1 < (2 - dc.mu) * b.t2) throw InputError("Type II needs t1 >= (2-mu)t2");
    DriveResult out;
    out.constants = dc;
    RBGraph g = w.swapped ? g0.swapped() : g0;
    Color blue = w.swapped ? Color::Red : Color::Blue;
    Rng rng(dc.seed);
    int n = t.n;

    PartitionII part = partition_plus_type2(g, w.u1, w.u2, dc.beta, n);
    std::vector<int> up1 = part.u1p, up2 = part.u2p;
    if (up1.size() < up2.size()) std::swap(up1, up2);
    Bitset s1 = set_of(g.n, up1), s2 = set_of(g.n, up2);
    const std::vector<int>& lo = part.leftover;
    record(out, "partition", "U+", true,
           "|U1+|=" + std::to_string(up1.size()) + " |U2+|=" + std::to_string(up2.size()) +
               " leftover=" + std::to_string(lo.size()));

    auto finish_drive = [&](const std::vector<int>& map, Color c, const std::string& name) {
        Embedding e{map, c == Color::Blue ? blue : other(blue)};
        validate(g0, t, e);
        out.embedding = e;
        out.case_used = name;
        return out;
    };

    record(out, "IIY", "two leftovers", lo.size() >= 2, std::to_string(lo.size()) + " vertices outside U1+ and U2+");
    if (lo.size() >= 2) {
        auto m = attempt(out, "IIY", [&] { return embed_typeII_two_hubs(t, g.blue, up1, up2, lo[0], lo[1], dc.mu); });
        if (m) return finish_drive(*m, Color::Blue, "IIY");
    }

    int straddler = -1;
    for (int v = 0; v < g.n && straddler < 0; ++v)
        if (g.red.degree_in(v, s1) >= dc.beta * n && g.red.degree_in(v, s2) >= dc.beta * n) straddler = v;
    record(out, "IIA", "straddler", straddler >= 0,
           straddler >= 0 ? "vertex " + std::to_string(straddler) + " has beta n red neighbours on both sides"
                          : "no vertex with beta n red neighbours on both sides");
    if (straddler >= 0) {
        auto m = attempt(out, "IIA", [&] {
            std::vector<int> a, c;
            for (int x : up1)
                if (x != straddler) a.push_back(x);
            for (int x : up2)
                if (x != straddler) c.push_back(x);
            return embed_typeII_rebalance(t, g.red, a, c, straddler, dc.mu);
        });
        if (m) return finish_drive(*m, Color::Red, "IIA");
    }

    if (lo.size() == 1) {
        long long red_in = g.red.edges_in(s1);
        bool z = red_in <= dc.edge_constant * n;
        record(out, "IIZ", "edge threshold", z,
               std::to_string(red_in) + " red edges in U1+ vs C n=" + num(dc.edge_constant * n));
        if (z) {
            auto m = attempt(out, "IIZ",
                             [&] { return embed_typeII_split_blue(t, g.blue, up1, up2, lo[0], dc, rng.split(3)); });
            if (m) return finish_drive(*m, Color::Blue, "IIZ");
        }
    } else {
        record(out, "IIZ", "one leftover", false, std::to_string(lo.size()) + " vertices outside U1+ and U2+");
    }

    SparseCutLeaves scl;
    try {
        scl = sparse_cut_with_leaves(t, b, std::min(dc.eps, 1.0 / 12), dc.mu, dc.alpha, dc.c, dc.beta);
        record(out, "sparse cut", "cut", true,
               "|A|=" + std::to_string(scl.cut.a.size()) + " |B|=" + std::to_string(scl.cut.b.size()) +
                   " l=" + std::to_string(scl.cut.boundary.size()) + " mode " + std::to_string(scl.mode));
    } catch (const GateError& e) {
        record(out, "sparse cut", e.gate, false, e.what());
        return out;
    }
    int ell = int(scl.cut.boundary.size());

    Cover covers[2];
    for (int o = 0; o < 2; ++o) {
        const Bitset& sa = o == 0 ? s1 : s2;
        const Bitset& sb = o == 0 ? s2 : s1;
        covers[o] = cover_crossing(g.blue, t, scl.cut, sa, sb);
        bool full = covers[o].placed == ell;
        record(out, "IIB", o == 0 ? "crossing A->U1+" : "crossing A->U2+", full,
               std::to_string(covers[o].placed) + " of " + std::to_string(ell) + " boundary stars placed");
        if (full) {
            auto m = attempt(out, "IIB", [&] {
                return embed_typeII_sparse_cut_blue(t, g.blue, o == 0 ? up1 : up2, o == 0 ? up2 : up1, scl.cut,
                                                    covers[o].images, dc, rng.split(10 + o));
            });
            if (m) return finish_drive(*m, Color::Blue, "IIB");
        }
    }

    bool tight = int(up1.size()) == b.t1 - 1;
    record(out, "IIC", "|U1+| = t1-1", tight, tight ? "roles of U1+ and U2+ swapped" : "U1+ hosts V1");
    const Cover& cv = covers[tight ? 1 : 0];
    auto m = attempt(out, "IIC", [&] {
        return embed_typeII_red_leaf_cover(t, g.red, tight ? up2 : up1, tight ? up1 : up2, cv.ua, cv.ub, scl, dc,
                                           rng.split(20));
    });
    if (m) return finish_drive(*m, Color::Red, "IIC");
    return out;
}

nlohmann::json drive_to_json(const DriveResult& r) {
    nlohmann::json j;
    if (r.embedding) {
        j["color"] = color_name(r.embedding->color);
        j["map"] = r.embedding->map;
    } else {
        j["color"] = nullptr;
        j["map"] = nullptr;
    }
    j["case"] = r.case_used.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.case_used);
    j["case_trace"] = nlohmann::json::array();
    for (const GateRecord& g : r.trace)
        j["case_trace"].push_back({{"step", g.step}, {"gate", g.gate}, {"passed", g.passed}, {"detail", g.detail}});
    j["constants_used"] = r.constants.to_json();
    return j;
}

}  // namespace rt
