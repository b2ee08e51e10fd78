#include <algorithm>
#include <cmath>
#include <numeric>

#include "embed_util.hpp"

namespace rt {

using namespace detail;

namespace {

// Parents chosen in ascending order of leaf count until the count reaches target.
std::vector<int> take_parents(const std::vector<int>& order, const std::vector<int>& cnt, std::vector<char>& taken,
                              int target, int& sum) {
    std::vector<int> out;
    sum = 0;
    for (int q : order) {
        if (sum >= target) break;
        if (taken[q]) continue;
        taken[q] = 1;
        out.push_back(q);
        sum += cnt[q];
    }
    return out;
}

}  // namespace

LemmaResult embed_leaves_IB1(const Tree& t, const BitGraph& g, const std::vector<int>& u1, const std::vector<int>& u2,
                             const CaseParams& p, const DeskConstants& dc, std::optional<Anchor> anchor, Rng rng) {
    int n = t.n;
    double mun = dc.mu * n;
    int k = p.k, D = p.d;
    Bitset s1 = set_of(g.n, u1), s2 = set_of(g.n, u2), sx = set_of(g.n, p.x);
    if ((s1 & s2).any()) throw InputError("U1 and U2 overlap");
    require(k + D >= 0, "k+D", "k+D=" + std::to_string(k + D) + " < 0");
    require(std::abs(k) <= mun, "k bound", "|k|=" + std::to_string(std::abs(k)) + " > mu n=" + num(mun));
    require(D >= 0 && D <= mun, "D bound", "D=" + std::to_string(D) + " outside [0, mu n]");
    require(int(u1.size()) == n + k, "U1 size", "|U1|=" + std::to_string(u1.size()) + " != n+k=" + std::to_string(n + k));
    require((sx - s1).count() == 0, "X", "X not inside U1");
    require(p.x.size() <= 2 * mun, "X size", "|X|=" + std::to_string(p.x.size()) + " > 2 mu n=" + num(2 * mun));
    for (int x : p.x)
        require(g.degree_in(x, s2) >= n / 10.0, "X degrees",
                "vertex " + std::to_string(x) + " has " + std::to_string(g.degree_in(x, s2)) + " < n/10 neighbours in U2");
    int delta = min_degree_within(g, u1);
    require(delta >= int(u1.size()) - dc.beta * n, "min-degree",
            "delta(G[U1])=" + std::to_string(delta) + " < |U1|-beta n=" + num(u1.size() - dc.beta * n));
    long long miss = non_edges_within(g, members(s1 - sx));
    double cap = dc.edge_constant * (k + D + 1) * n;
    require(miss <= cap, "non-edges", std::to_string(miss) + " non-edges in U1\\X > " + num(cap));
    int rich = 0;
    for (int u : u1) rich += g.degree_in(u, s2) >= D;
    require(rich >= 10 * mun, "rich vertices",
            std::to_string(rich) + " vertices with D neighbours in U2, need 10 mu n=" + num(10 * mun));
    require(t.max_degree() <= dc.c * n, "max-degree",
            "Delta(T)=" + std::to_string(t.max_degree()) + " > cn=" + num(dc.c * n));
    std::vector<int> leaves = t.leaves();
    bool leafy = leaves.size() >= n / 20.0;
    if (D > 0) require(leafy, "leaves", std::to_string(leaves.size()) + " leaves < n/20");
    if (anchor) {
        require(D == 0 && p.x.empty(), "anchor", "anchoring needs D=0 and X empty");
        if (anchor->first < 0 || anchor->first >= n || !s1.test(anchor->second))
            throw InputError("anchor must map a tree vertex into U1");
    }

    LemmaResult res;
    if (D == 0 && !leafy) {
        // Trim U1 to n vertices, keeping the anchor.
        std::vector<int> deg(g.n, 0);
        for (int u : u1) deg[u] = g.degree_in(u, s1);
        std::vector<int> h = u1;
        std::stable_sort(h.begin(), h.end(), [&](int a, int b) { return deg[a] > deg[b]; });
        if (anchor) {
            auto it = std::find(h.begin(), h.end(), anchor->second);
            std::rotate(h.begin(), it, it + 1);
        }
        h.resize(n);
        res = embed_bare_paths_dense(t, g, h, anchor, dc.mu, dc.retry_budget, rng);
        res.trace.insert(res.trace.begin(), "IB1: D=0 and few leaves, bare-path route");
        res.stats["route"] = "bare paths";
        return res;
    }

    Bipartition b = bipartition(t);
    int root = anchor ? anchor->first : 0;
    if (!anchor)
        while (root < n && t.is_leaf(root)) ++root;
    if (root >= n) root = 0;
    std::vector<char> banned(n, 0);
    banned[root] = 1;
    for (int w : t.adj[root]) banned[w] = 1;
    std::vector<int> cls[2];
    for (int l : leaves)
        if (!banned[l]) cls[b.side[l]].push_back(l);
    int want = int(std::ceil(n / 49.0));
    int side = cls[0].size() >= cls[1].size() ? 0 : 1;
    require(int(cls[side].size()) >= want, "leaf supply",
            std::to_string(cls[side].size()) + " leaves in one class, need n/49=" + std::to_string(want));
    std::vector<int> lprime(cls[side].begin(), cls[side].begin() + want);

    std::vector<int> cnt(n, 0), parent_of(n, -1), parents;
    for (int l : lprime) {
        int q = t.adj[l][0];
        parent_of[l] = q;
        if (cnt[q]++ == 0) parents.push_back(q);
    }
    std::sort(parents.begin(), parents.end());
    std::vector<int> order_p = sorted_by_key(parents, cnt);
    std::vector<char> taken(n, 0);
    int sum1 = 0, sum2 = 0;
    std::vector<int> p1 = D > 0 ? take_parents(order_p, cnt, taken, D, sum1) : std::vector<int>{};
    require(sum1 >= D && sum1 <= n / 150.0, "P1", "P1 leaf count " + std::to_string(sum1) + " outside [D, n/150]");
    int half = int(p.x.size() + 1) / 2;
    std::vector<int> p2 = half > 0 ? take_parents(order_p, cnt, taken, half, sum2) : std::vector<int>{};
    require(sum2 >= half && sum2 <= n / 150.0, "P2", "P2 leaf count " + std::to_string(sum2) + " outside [|X|/2, n/150]");
    std::vector<char> in_p3(n, 0);
    for (int q : parents)
        if (!taken[q]) in_p3[q] = 1;
    // P3 leaves join P2 lowest id first.
    std::vector<char> in_l(n, 0);
    for (int l : lprime) in_l[l] = 1;
    int extra = half - int(p2.size());
    for (int l : lprime) {
        if (extra <= 0) break;
        if (in_p3[parent_of[l]]) {
            in_l[l] = 0;
            p2.push_back(l);
            --extra;
        }
    }
    require(extra <= 0, "P2", "too few leaves at P3 to complete P2");
    std::vector<int> lset;
    for (int l : lprime)
        if (in_l[l]) lset.push_back(l);
    std::vector<int> d_of(n, 0);
    int l3 = 0;
    for (int l : lset) {
        ++d_of[parent_of[l]];
        if (in_p3[parent_of[l]]) ++l3;
    }

    std::vector<char> inside(n, 1);
    for (int l : lset) inside[l] = 0;
    Rooted ord = root_within(t, root, inside);
    audit(int(ord.order.size()) == n - int(lset.size()), "IB1: T-L is connected");

    std::vector<int> cand;
    for (int u : u1)
        if (!sx.test(u)) cand.push_back(u);
    std::vector<int> u2deg(g.n, 0);
    for (int u : cand) u2deg[u] = -g.degree_in(u, s2);
    cand = sorted_by_key(cand, u2deg);
    require(int(cand.size()) >= 2 * D, "Y", "U1\\X too small for Y");
    std::vector<int> y(cand.begin(), cand.begin() + 2 * D);
    for (int v : y) require(g.degree_in(v, s2) >= D, "Y", "fewer than 2D vertices with D neighbours in U2");
    Bitset sy = set_of(g.n, y);
    Bitset u1m(g.n);
    for (int u : u1)
        if (g.degree_in(u, sy) >= D && 2 * g.degree_in(u, sx) >= int(p.x.size())) u1m.set(u);
    Bitset rest = u1m - sx - sy;
    int s = anchor ? anchor->second : rest.first();
    require(s >= 0, "start vertex", "U1- minus X and Y is empty");

    std::vector<char> in_p1(n, 0), in_p2(n, 0);
    for (int q : p1) in_p1[q] = 1;
    for (int q : p2) in_p2[q] = 1;

    int jstar = 0;
    while (std::ldexp(1.0, jstar) <= dc.c * n) ++jstar;
    std::vector<std::vector<int>> ij(jstar + 1);
    for (int v = 0; v < n; ++v) {
        if (!in_p3[v] || d_of[v] == 0) continue;
        int j = 1;
        while (j <= jstar && !(d_of[v] >= (1 << (j - 1)) && d_of[v] < (1 << j))) ++j;
        if (j <= jstar) ij[j].push_back(v);
    }
    int allowed = (k + D + 1) / 2;
    Bitset leaf_pool = s1 | s2;
    std::string last;
    for (int attempt = 0; attempt < dc.retry_budget; ++attempt) {
        Rng r = rng.split(attempt);
        Placer pl(g, n);
        pl.put(root, s);
        bool ok = true;
        for (size_t i = 1; i < ord.order.size(); ++i) {
            int v = ord.order[i];
            const Bitset& pool = in_p1[v] ? sy : in_p2[v] ? sx : rest;
            int h = pl.choose(t, v, pool, &r);
            if (h < 0) {
                last = "random process stuck at tree vertex " + std::to_string(v);
                ok = false;
                break;
            }
            pl.put(v, h);
        }
        if (!ok) continue;
        int bad = 0;
        std::vector<Bitset> img;
        std::vector<double> thr;
        for (int j = 1; j <= jstar; ++j) {
            std::vector<int> hs;
            for (int v : ij[j]) hs.push_back(pl.map[v]);
            img.push_back(set_of(g.n, hs));
            thr.push_back(2.0 / 3 * ij[j].size() - 20.0 * (jstar - j + 1));
        }
        for (int u : u1) {
            if (sx.test(u)) continue;
            for (int j = 0; j < jstar; ++j)
                if (thr[j] >= 0 && g.rows[u].count_and(img[j]) <= thr[j]) {
                    ++bad;
                    break;
                }
        }
        if (bad > allowed) {
            last = std::to_string(bad) + " bad vertices > " + std::to_string(allowed);
            continue;
        }
        std::vector<int> viol;
        if (!place_leaves(pl, t, lset, leaf_pool, &viol)) {
            last = "Hall violation at " + std::to_string(viol.size()) + " parents";
            continue;
        }
        audit(embedding_problem(g, t, pl.map).empty(), "IB1: invalid copy");
        res.map = pl.map;
        res.attempts = attempt + 1;
        res.trace.push_back("IB1: |L|=" + std::to_string(lset.size()) + " bad=" + std::to_string(bad) + "/" +
                            std::to_string(allowed));
        res.stats = {{"route", "leaves"}, {"bad", bad},          {"allowed_bad", allowed},
                     {"L", lset.size()},  {"P1", p1.size()},     {"P2", p2.size()},
                     {"P3_leaves", l3},   {"Y", y.size()},       {"j_star", jstar}};
        return res;
    }
    throw GateError("retry budget", "IB1: " + last);
}

LemmaResult embed_red_IB2(const Tree& t, const BitGraph& g, const std::vector<int>& u1, const std::vector<int>& u2_in,
                          const CaseParams& p, const DeskConstants& dc, Rng rng) {
    int n = t.n;
    double mun = dc.mu * n, bn = dc.beta * n;
    Bipartition b = bipartition(t);
    int k = p.k, D = p.d;
    Bitset s1 = set_of(g.n, u1), sx = set_of(g.n, p.x);
    if ((s1 & set_of(g.n, u2_in)).any()) throw InputError("U1 and U2 overlap");
    require(b.t2 <= b.t1 && b.t1 <= 2 * b.t2 + 1, "class sizes",
            "t1=" + std::to_string(b.t1) + " t2=" + std::to_string(b.t2));
    require(1.1 * b.t1 <= u1.size() && u1.size() <= 2.0 * n, "U1 size",
            "|U1|=" + std::to_string(u1.size()) + " outside [1.1 t1, 2n]");
    require(std::abs(k) <= 2 * mun, "k bound", "|k| > 2 mu n");
    require(D >= 0 && D <= 3 * mun, "D bound", "D outside [0, 3 mu n]");
    require(t.max_degree() <= dc.c * n, "max-degree", "Delta(T) > cn");

    LemmaResult res;
    std::vector<int> u2 = u2_in;
    if (k + D < -1) {
        int drop = -k - D - 1;
        std::vector<int> key(g.n, 0);
        for (int u : u2) key[u] = g.degree_in(u, s1);
        u2 = sorted_by_key(u2, key);
        require(int(u2.size()) >= drop, "U2 size", "cannot drop enough U2 vertices");
        u2.erase(u2.begin(), u2.begin() + drop);
        std::sort(u2.begin(), u2.end());
        k = -D - 1;
        res.trace.push_back("IB2: dropped " + std::to_string(drop) + " U2 vertices");
    }
    Bitset s2 = set_of(g.n, u2);
    require(int(u2.size()) == b.t2 - k - 1, "U2 size",
            "|U2|=" + std::to_string(u2.size()) + " != t2-k-1=" + std::to_string(b.t2 - k - 1));
    int n1 = int(u1.size()), n2 = int(u2.size());
    Bitset y2(g.n), y1(g.n);
    for (int u : u2) {
        int d = g.degree_in(u, s1);
        require(d >= bn, "U2 degrees", "vertex " + std::to_string(u) + " has " + std::to_string(d) + " < beta n");
        if (d < n1 - mun) y2.set(u);
    }
    require(y2.count() <= mun, "U2 low-degree count", std::to_string(y2.count()) + " > mu n");
    for (int u : u1)
        if (g.degree_in(u, s2) < n2 - D) y1.set(u);
    require(y1.count() <= 10 * mun, "U1 low-degree count", std::to_string(y1.count()) + " > 10 mu n");
    require((sx - s1).count() == 0 && p.x.size() <= 2 * mun, "X", "X must lie in U1 with |X| <= 2 mu n");
    for (int u : u1)
        if (!sx.test(u))
            require(g.degree_in(u, s2) >= n2 - mun, "U1 degrees",
                    "vertex " + std::to_string(u) + " outside X has " + std::to_string(g.degree_in(u, s2)) +
                        " < |U2|-mu n");
    int q = k + D + 1;
    double cq = dc.edge_constant * q;
    long long inner = g.edges_in(s1 - sx);
    require(inner >= cq * n, "edge threshold",
            std::to_string(inner) + " edges in U1\\X < " + num(cq * n));
    Bitset u1m = s1 - y1, u2m = s2 - y2;
    int ell = int(std::ceil(10 * mun - 1e-9));
    std::vector<int> leaves = t.leaves();

    int m = std::max(1, 10 * q);
    std::vector<char> in_tp(n, 0);
    int tb = -1;
    if (q > 0) {
        V2RichSubtree rich = v2_rich_subtree(t, b, m);
        for (int v : rich.vertices) in_tp[v] = 1;
        for (int v : rich.vertices)
            if (!b.in_v1(v))
                for (int w : t.adj[v])
                    if (!in_tp[w]) tb = v;
    }
    std::vector<char> in_l1(n, 0);
    for (int l : leaves)
        if (b.in_v1(l) && !in_tp[l]) in_l1[l] = 1;
    std::vector<int> l1deg(n, 0);
    for (int v = 0; v < n; ++v)
        if (in_l1[v]) ++l1deg[t.adj[v][0]];
    auto deg_minus_l1 = [&](int v) { return t.degree(v) - l1deg[v]; };

    // Boundary of T': vertices with a neighbour outside T' and L1.
    std::vector<char> in_bd(n, 0);
    for (int v = 0; v < n; ++v)
        if (in_tp[v])
            for (int w : t.adj[v])
                if (!in_tp[w] && !in_l1[w]) in_bd[v] = 1;

    // Case I candidates.
    std::vector<std::vector<int>> fadj(n);
    std::vector<char> fskip(n, 0), factive(n, 0);
    for (int v = 0; v < n; ++v) {
        factive[v] = !in_l1[v] && (!in_tp[v] || in_bd[v]);
        fskip[v] = !factive[v] || in_bd[v];
    }
    for (int v = 0; v < n; ++v)
        if (factive[v])
            for (int w : t.adj[v])
                if (factive[w]) fadj[v].push_back(w);
    auto paths = bare_paths4(fadj, b.side, 1, fskip);
    std::stable_sort(paths.begin(), paths.end(),
                     [&](const auto& a, const auto& c) { return l1deg[a[2]] < l1deg[c[2]]; });
    // Leaves of F - L1 outside T'.
    std::vector<int> free_leaves, tp_leaves;
    for (int v = 0; v < n; ++v) {
        if (in_tp[v] || in_l1[v] || deg_minus_l1(v) != 1) continue;
        bool at_tp = false;
        for (int w : t.adj[v]) at_tp |= bool(in_tp[w]);
        (at_tp ? tp_leaves : free_leaves).push_back(v);
    }
    free_leaves = sorted_by_key(free_leaves, l1deg);
    tp_leaves = sorted_by_key(tp_leaves, l1deg);
    int which = int(paths.size()) >= ell ? 1 : int(free_leaves.size()) >= ell ? 2 : int(tp_leaves.size()) >= ell && q > 0 ? 3 : 0;
    require(which > 0, "tree structure",
            std::to_string(paths.size()) + " bare paths, " + std::to_string(free_leaves.size()) + "+" +
                std::to_string(tp_leaves.size()) + " leaves, need " + std::to_string(ell));
    res.stats["case"] = which;
    res.stats["T_prime"] = std::count(in_tp.begin(), in_tp.end(), 1);

    std::string last;
    for (int attempt = 0; attempt < dc.retry_budget; ++attempt) {
        Rng r = rng.split(attempt);
        Bitset z(g.n);
        for (int u = u1m.first(); u >= 0; u = u1m.next(u))
            if (r.bernoulli(dc.beta)) z.set(u);
        bool zok = z.count() <= 3 * bn && g.edges_in(s1 - sx - z) >= cq * n / 2;
        for (int u : u2) zok = zok && g.degree_in(u, z) >= dc.beta * dc.beta * n / 2;
        if (!zok) {
            last = "Z sample failed its checks";
            continue;
        }
        // H': peel to minimum degree cq/4 inside U1- minus X and Z.
        Bitset hp = u1m - sx - z;
        if (q > 0) {
            bool changed = true;
            while (changed) {
                changed = false;
                for (int u = hp.first(); u >= 0; u = hp.next(u))
                    if (g.degree_in(u, hp) < cq / 4) {
                        hp.reset(u);
                        changed = true;
                    }
            }
        }
        if (q > 0 && !hp.any()) {
            last = "dense core is empty";
            continue;
        }
        int v = -1, vbest = -1;
        for (int u = u2m.first(); u >= 0; u = u2m.next(u))
            if (int d = g.degree_in(u, hp); d > vbest) {
                vbest = d;
                v = u;
            }
        Placer pl(g, n);
        Bitset side1 = u1m - z;
        auto pools = [&](int x) -> const Bitset& { return b.in_v1(x) ? side1 : u2m; };
        std::vector<char> in_l2(n, 0);
        std::vector<int> centres;
        bool ok = true;

        auto place_tp_simple = [&](const std::vector<char>& part, int at_v) {
            if (at_v >= 0) pl.put(at_v, v);
            return grow(pl, t, part, [&](int) -> const Bitset& { return hp; }, nullptr) < 0;
        };

        if (which == 1 || which == 2) {
            if (q > 0 && !place_tp_simple(in_tp, tb)) {
                last = "T' does not fit the dense core";
                continue;
            }
        } else {
            std::vector<int> tpv;
            for (int x = 0; x < n; ++x)
                if (in_tp[x]) tpv.push_back(x);
            Induced sub = induced_tree(t, tpv);
            std::vector<int> qv;
            for (int i = 0; i < sub.tree.n; ++i)
                if (!b.in_v1(sub.ids[i])) qv.push_back(i);
            TreeSplit sp = weighted_split(sub.tree, qv);
            std::vector<char> in_a(n, 0), in_b(n, 0);
            for (int i : sp.t1) in_a[sub.ids[i]] = 1;
            for (int i : sp.t2) in_b[sub.ids[i]] = 1;
            int tprime = sub.ids[sp.v];
            auto v2count = [&](const std::vector<char>& part) {
                int c = 0;
                for (int x = 0; x < n; ++x) c += part[x] && !b.in_v1(x);
                return c;
            };
            if (v2count(in_a) < 3 * q || v2count(in_b) < 3 * q) {
                last = "split of T' is unbalanced";
                break;
            }
            auto leaves_at = [&](const std::vector<char>& part) {
                std::vector<int> out;
                for (int l : tp_leaves)
                    for (int w : t.adj[l])
                        if (part[w] && w != tprime) out.push_back(l);
                return out;
            };
            auto la = leaves_at(in_a), lb = leaves_at(in_b);
            bool swap_parts = la.size() > lb.size();
            const std::vector<char>& t1p = swap_parts ? in_b : in_a;
            auto l2c = swap_parts ? la : lb;
            if (int(l2c.size()) < ell) {
                last = "too few leaves at the second part of T'";
                break;
            }
            for (int i = 0; i < ell; ++i) in_l2[l2c[i]] = 1;
            bool tb_in = tb >= 0 && t1p[tb];
            bool tp_v2 = !b.in_v1(tprime);
            if (tb_in && tb != tprime && tp_v2) {
                Rooted ro = root_within(t, tb, t1p);
                int pp = ro.parent[tprime], ppp = ro.parent[pp];
                pl.put(tb, v);
                for (size_t i = 1; i < ro.order.size() && ok; ++i) {
                    int x = ro.order[i];
                    if (pl.placed(x)) continue;
                    if (x == pp) {
                        Bitset w = (hp & g.rows[pl.map[ppp]]) - pl.used;
                        int vp = -1, best = -1;
                        for (int u = u2m.first(); u >= 0; u = u2m.next(u))
                            if (!pl.used.test(u))
                                if (int d = g.rows[u].count_and(w); d > best) {
                                    best = d;
                                    vp = u;
                                }
                        int h = vp >= 0 ? (w & g.rows[vp]).first() : -1;
                        if (h < 0) {
                            ok = false;
                            break;
                        }
                        pl.put(pp, h);
                        pl.put(tprime, vp);
                        continue;
                    }
                    int h = pl.choose(t, x, hp, nullptr);
                    if (h < 0) ok = false;
                    else pl.put(x, h);
                }
            } else {
                int at = tb_in ? tb : tp_v2 ? tprime : -1;
                ok = place_tp_simple(t1p, at);
            }
            if (!ok) {
                last = "T1 does not fit the dense core";
                continue;
            }
        }

        if (which == 1) {
            ForestTask task;
            task.active = factive;
            task.partial.assign(n, -1);
            for (int x = 0; x < n; ++x)
                if (in_bd[x]) task.partial[x] = pl.map[x];
            for (int x = 0; x < n; ++x)
                if (in_tp[x] && !in_bd[x] && pl.placed(x)) task.blocked.push_back(pl.map[x]);
            task.paths.assign(paths.begin(), paths.begin() + ell);
            std::vector<int> side2 = members(s2), side1v = members(side1 - sx);
            LemmaResult inner_res;
            try {
                inner_res = embed_bare_paths_bipartite(t, g, side1v, side2, task, dc.mu, dc.beta, 1, r.split(1));
            } catch (const GateError& e) {
                last = std::string("bipartite bare paths: ") + e.what();
                if (e.gate != "retry budget") break;
                continue;
            }
            for (int x = 0; x < n; ++x)
                if (factive[x] && !in_bd[x]) pl.put(x, inner_res.map[x]);
            for (int i = 0; i < ell; ++i) centres.push_back(paths[i][2]);
        } else {
            if (which == 2)
                for (int i = 0; i < ell; ++i) in_l2[free_leaves[i]] = 1;
            std::vector<char> inside(n, 0);
            for (int x = 0; x < n; ++x) inside[x] = !in_l1[x] && !in_l2[x];
            if (grow(pl, t, inside, pools, nullptr) >= 0) {
                last = "greedy stage stuck";
                continue;
            }
            std::vector<int> l2;
            for (int x = 0; x < n; ++x)
                if (in_l2[x]) l2.push_back(x);
            if (!place_leaves(pl, t, l2, s2, nullptr)) {
                last = "L2 does not fit into U2";
                continue;
            }
            centres = l2;
        }
        std::vector<char> at_centre(n, 0);
        for (int c : centres) at_centre[c] = 1;
        std::vector<int> far, near;
        for (int x = 0; x < n; ++x)
            if (in_l1[x]) (at_centre[t.adj[x][0]] ? near : far).push_back(x);
        if (!place_leaves(pl, t, far, u1m - z, nullptr) || !place_leaves(pl, t, near, z, nullptr)) {
            last = "L1 leaves do not fit";
            continue;
        }
        audit(embedding_problem(g, t, pl.map).empty(), "IB2: invalid copy");
        res.map = pl.map;
        res.attempts = attempt + 1;
        res.trace.push_back("IB2: case " + std::string(which == 1 ? "I" : which == 2 ? "II" : "III"));
        res.stats["Z"] = z.count();
        res.stats["H_prime"] = hp.count();
        return res;
    }
    throw GateError("IB2", last.empty() ? "retry budget exhausted" : last);
}

DriveResult drive_type1(const RBGraph& g0, const Tree& t0, const ExtremalWitness& w, const DeskConstants& dc) {
    dc.check();
    if (w.kind != 1) throw InputError("drive_type1 needs a Type I witness");
    Bipartition b0 = bipartition(t0);
    if (g0.n != formula_value(b0.t1, b0.t2))
        throw InputError("host has " + std::to_string(g0.n) + " vertices, expected " +
                         std::to_string(formula_value(b0.t1, b0.t2)));
    DriveResult out;
    out.constants = dc;
    RBGraph g = w.swapped ? g0.swapped() : g0;
    Color blue = w.swapped ? Color::Red : Color::Blue;
    Rng rng(dc.seed);

    Tree t = t0;
    if (b0.t1 >= 2 * b0.t2 + 2) {
        try {
            Padded pd = pad_to_balanced(t0, dc.c);
            t = pd.tree;
            record(out, "pad", "t1 >= 2t2+2", true, "added " + std::to_string(pd.added) + " leaves");
        } catch (const GateError& e) {
            record(out, "pad", e.gate, false, e.what());
            return out;
        }
    } else {
        record(out, "pad", "t1 >= 2t2+2", false, "no padding needed");
    }
    int n = t.n;
    PartitionI part = partition_plus_type1(g, w.u1, w.u2, dc.beta, n, dc.mu);
    CaseParams cp{part.k, part.d, part.x};
    record(out, "partition", "U+", true,
           "|U1+|=" + std::to_string(part.u1p.size()) + " |U2+|=" + std::to_string(part.u2p.size()) +
               " k=" + std::to_string(part.k) + " D=" + std::to_string(part.d) + " |X|=" + std::to_string(part.x.size()));

    auto finish = [&](const std::vector<int>& map, Color c, const std::string& name) {
        Embedding e{std::vector<int>(map.begin(), map.begin() + t0.n), c == Color::Blue ? blue : other(blue)};
        validate(g0, t0, e);
        out.embedding = e;
        out.case_used = name;
        return out;
    };

    int paths5 = int(bare_paths(t, 5).size());
    bool ia = paths5 >= n / 100.0;
    record(out, "IA", "bare paths", ia, std::to_string(paths5) + " bare paths of length 5, need n/100");
    if (ia) {
        if (part.k >= 0) {
            auto m = attempt(out, "IA1", [&] {
                std::vector<int> key(g.n, 0);
                Bitset s = set_of(g.n, part.u1p);
                for (int u : part.u1p) key[u] = -g.blue.degree_in(u, s);
                std::vector<int> h = sorted_by_key(part.u1p, key);
                h.resize(n);
                return embed_bare_paths_dense(t, g.blue, h, std::nullopt, dc.mu, dc.retry_budget, rng.split(1));
            });
            if (m) return finish(*m, Color::Blue, "IA1");
        } else {
            auto m = attempt(out, "IA2", [&] {
                return embed_bare_paths_bipartite(t, g.red, part.u1p, part.u2p, ForestTask{}, dc.mu, dc.beta,
                                                  dc.retry_budget, rng.split(2));
            });
            if (m) return finish(*m, Color::Red, "IA2");
        }
    }
    int nl = int(t.leaves().size());
    record(out, "IB", "leaves", nl >= n / 20.0, std::to_string(nl) + " leaves, n/20=" + num(n / 20.0));
    long long red_in = g.red.edges_in(set_of(g.n, part.u1p) - set_of(g.n, part.x));
    double thr = dc.edge_constant * (part.k + part.d + 1) * n;
    bool ib1 = red_in < thr && part.k + part.d >= 0;
    record(out, "IB", "edge threshold", ib1, std::to_string(red_in) + " red edges in U1+\\X vs " + num(thr));
    auto run_ib1 = [&] {
        return attempt(out, "IB1", [&] {
            return embed_leaves_IB1(t, g.blue, part.u1p, part.u2p, cp, dc, std::nullopt, rng.split(3));
        });
    };
    auto run_ib2 = [&] {
        return attempt(out, "IB2", [&] {
            std::vector<int> u2 = part.u2p;
            Bipartition b = bipartition(t);
            if (int(u2.size()) == b.t2 - part.k) {
                Bitset s1 = set_of(g.n, part.u1p);
                std::vector<int> key(g.n, 0);
                for (int u : u2) key[u] = g.red.degree_in(u, s1);
                u2 = sorted_by_key(u2, key);
                u2.erase(u2.begin());
                std::sort(u2.begin(), u2.end());
            }
            return embed_red_IB2(t, g.red, part.u1p, u2, cp, dc, rng.split(4));
        });
    };
    if (ib1) {
        if (auto m = run_ib1()) return finish(*m, Color::Blue, "IB1");
        if (auto m = run_ib2()) return finish(*m, Color::Red, "IB2");
    } else {
        if (auto m = run_ib2()) return finish(*m, Color::Red, "IB2");
        if (auto m = run_ib1()) return finish(*m, Color::Blue, "IB1");
    }
    return out;
}

}  // namespace rt
