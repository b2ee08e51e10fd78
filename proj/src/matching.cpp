#include "rt/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

#include "rt/errors.hpp"

namespace rt {

Matching max_matching(const Bipartite& g) {
    Matching m;
    m.mate_a.assign(g.na, -1);
    m.mate_b.assign(g.nb, -1);
    const int inf = std::numeric_limits<int>::max();
    std::vector<int> dist(g.na);
    auto bfs = [&]() {
        std::queue<int> q;
        bool found = false;
        for (int a = 0; a < g.na; ++a) {
            dist[a] = m.mate_a[a] < 0 ? 0 : inf;
            if (!dist[a]) q.push(a);
        }
        while (!q.empty()) {
            int a = q.front();
            q.pop();
            for (int b : g.adj[a]) {
                int a2 = m.mate_b[b];
                if (a2 < 0) found = true;
                else if (dist[a2] == inf) {
                    dist[a2] = dist[a] + 1;
                    q.push(a2);
                }
            }
        }
        return found;
    };
    std::vector<size_t> it(g.na);
    auto dfs = [&](auto&& self, int a) -> bool {
        for (size_t& i = it[a]; i < g.adj[a].size(); ++i) {
            int b = g.adj[a][i];
            int a2 = m.mate_b[b];
            if (a2 < 0 || (dist[a2] == dist[a] + 1 && self(self, a2))) {
                m.mate_a[a] = b;
                m.mate_b[b] = a;
                return true;
            }
        }
        dist[a] = inf;
        return false;
    };
    while (bfs()) {
        std::fill(it.begin(), it.end(), 0);
        for (int a = 0; a < g.na; ++a)
            if (m.mate_a[a] < 0 && dfs(dfs, a)) ++m.size;
    }
    return m;
}

namespace {

// A and B vertices reachable from unmatched A vertices by alternating paths.
void alternating_reach(const Bipartite& g, const Matching& m, std::vector<char>& ra, std::vector<char>& rb) {
    ra.assign(g.na, 0);
    rb.assign(g.nb, 0);
    std::queue<int> q;
    for (int a = 0; a < g.na; ++a)
        if (m.mate_a[a] < 0) {
            ra[a] = 1;
            q.push(a);
        }
    while (!q.empty()) {
        int a = q.front();
        q.pop();
        for (int b : g.adj[a]) {
            if (rb[b]) continue;
            rb[b] = 1;
            int a2 = m.mate_b[b];
            if (a2 >= 0 && !ra[a2]) {
                ra[a2] = 1;
                q.push(a2);
            }
        }
    }
}

void check_matching(const Bipartite& g, const Matching& m) {
    if (int(m.mate_a.size()) != g.na || int(m.mate_b.size()) != g.nb) throw InputError("matching has wrong shape");
    int size = 0;
    for (int a = 0; a < g.na; ++a) {
        int b = m.mate_a[a];
        if (b < 0) continue;
        ++size;
        if (b >= g.nb || m.mate_b[b] != a) throw InputError("matching arrays disagree");
        if (std::find(g.adj[a].begin(), g.adj[a].end(), b) == g.adj[a].end()) throw InputError("matched pair is not an edge");
    }
    for (int b = 0; b < g.nb; ++b)
        if (m.mate_b[b] >= 0 && (m.mate_b[b] >= g.na || m.mate_a[m.mate_b[b]] != b))
            throw InputError("matching arrays disagree");
    if (size != m.size) throw InputError("matching size is wrong");
}

}  // namespace

bool has_augmenting_path(const Bipartite& g, const Matching& m) {
    std::vector<char> ra, rb;
    alternating_reach(g, m, ra, rb);
    for (int b = 0; b < g.nb; ++b)
        if (rb[b] && m.mate_b[b] < 0) return true;
    return false;
}

StarPacking star_packing(const Bipartite& g, const std::vector<int>& demand) {
    if (int(demand.size()) != g.na) throw InputError("one demand per vertex of A");
    Bipartite x;
    x.nb = g.nb;
    std::vector<int> owner;
    for (int a = 0; a < g.na; ++a) {
        if (demand[a] < 0) throw InputError("demands must be nonnegative");
        for (int j = 0; j < demand[a]; ++j) {
            x.adj.push_back(g.adj[a]);
            owner.push_back(a);
        }
    }
    x.na = int(owner.size());
    Matching m = max_matching(x);
    StarPacking out;
    if (m.size == x.na) {
        out.ok = true;
        out.stars.assign(g.na, {});
        for (int c = 0; c < x.na; ++c) out.stars[owner[c]].push_back(m.mate_a[c]);
        for (auto& s : out.stars) std::sort(s.begin(), s.end());
        return out;
    }
    std::vector<char> ra, rb;
    alternating_reach(x, m, ra, rb);
    std::vector<char> in(g.na, 0);
    for (int c = 0; c < x.na; ++c)
        if (ra[c]) in[owner[c]] = 1;
    long long need = 0;
    std::vector<char> nb(g.nb, 0);
    for (int a = 0; a < g.na; ++a)
        if (in[a]) {
            out.violator.push_back(a);
            need += demand[a];
            for (int b : g.adj[a]) nb[b] = 1;
        }
    long long have = std::count(nb.begin(), nb.end(), 1);
    audit(have < need, "Hall violator");
    return out;
}

Cascade cascade(const Bipartite& g, const Matching& m) {
    check_matching(g, m);
    if (has_augmenting_path(g, m)) throw InputError("matching is not maximum");
    // 0 = prime, 1 = plus, 2 = minus, 3 = bar
    std::vector<int> ca(g.na), cb(g.nb);
    for (int a = 0; a < g.na; ++a) ca[a] = m.mate_a[a] < 0 ? 0 : 3;
    for (int b = 0; b < g.nb; ++b) cb[b] = m.mate_b[b] < 0 ? 0 : 3;
    auto low_a = [&](int a) { return ca[a] == 0 || ca[a] == 2; };
    auto low_b = [&](int b) { return cb[b] == 0 || cb[b] == 2; };
    while (true) {
        bool moved = false;
        for (int a = 0; a < g.na && !moved; ++a) {
            if (ca[a] != 3) continue;
            for (int b : g.adj[a])
                if (low_b(b)) {
                    ca[a] = 1;
                    cb[m.mate_a[a]] = 2;
                    moved = true;
                    break;
                }
        }
        if (moved) continue;
        for (int a = 0; a < g.na && !moved; ++a)
            if (low_a(a))
                for (int b : g.adj[a])
                    if (cb[b] == 3) {
                        cb[b] = 1;
                        ca[m.mate_b[b]] = 2;
                        moved = true;
                        break;
                    }
        if (!moved) break;
    }
    Cascade c;
    for (int a = 0; a < g.na; ++a) {
        std::vector<int>* dst[] = {&c.a_prime, &c.a_plus, &c.a_minus, &c.a_bar};
        dst[ca[a]]->push_back(a);
    }
    for (int b = 0; b < g.nb; ++b) {
        std::vector<int>* dst[] = {&c.b_prime, &c.b_plus, &c.b_minus, &c.b_bar};
        dst[cb[b]]->push_back(b);
    }
    check_cascade(g, m, c);
    return c;
}

void check_cascade(const Bipartite& g, const Matching& m, const Cascade& c) {
    std::vector<int> ca(g.na, -1), cb(g.nb, -1);
    auto mark = [](std::vector<int>& cls, const std::vector<int>& s, int k) {
        for (int v : s) {
            audit(cls[v] < 0, "cascade classes overlap");
            cls[v] = k;
        }
    };
    mark(ca, c.a_prime, 0), mark(ca, c.a_plus, 1), mark(ca, c.a_minus, 2), mark(ca, c.a_bar, 3);
    mark(cb, c.b_prime, 0), mark(cb, c.b_plus, 1), mark(cb, c.b_minus, 2), mark(cb, c.b_bar, 3);
    for (int a = 0; a < g.na; ++a) {
        audit(ca[a] >= 0, "A vertex without a class");
        audit((ca[a] == 0) == (m.mate_a[a] < 0), "A' is exactly the unmatched part of A");
    }
    for (int b = 0; b < g.nb; ++b) {
        audit(cb[b] >= 0, "B vertex without a class");
        audit((cb[b] == 0) == (m.mate_b[b] < 0), "B' is exactly the unmatched part of B");
    }
    static const int pair_of[] = {0, 2, 1, 3};
    for (int a = 0; a < g.na; ++a)
        if (m.mate_a[a] >= 0) audit(cb[m.mate_a[a]] == pair_of[ca[a]], "M respects the class pairing");
    for (int a = 0; a < g.na; ++a)
        for (int b : g.adj[a]) {
            bool la = ca[a] == 0 || ca[a] == 2;
            bool lb = cb[b] == 0 || cb[b] == 2;
            audit(!(la && (lb || cb[b] == 3)), "G[A' u A-, B' u B- u Bbar] has an edge");
            audit(!((la || ca[a] == 3) && lb), "G[A' u A- u Abar, B' u B-] has an edge");
        }
}

nlohmann::json cascade_to_json(const Cascade& c) {
    return {{"A+", c.a_plus}, {"A-", c.a_minus}, {"Abar", c.a_bar}, {"A'", c.a_prime},
            {"B+", c.b_plus}, {"B-", c.b_minus}, {"Bbar", c.b_bar}, {"B'", c.b_prime}};
}

}  // namespace rt
