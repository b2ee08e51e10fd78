#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "embed_util.hpp"
#include "rt/matching.hpp"

namespace rt {

namespace detail {

std::string num(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

Bitset set_of(int n, const std::vector<int>& v) { return Bitset::of(n, v); }

std::vector<int> members(const Bitset& b) { return b.to_vector(); }

int min_degree_within(const BitGraph& g, const std::vector<int>& u) {
    Bitset s = set_of(g.n, u);
    int best = int(u.size());
    for (int v : u) best = std::min(best, g.degree_in(v, s));
    return best;
}

long long non_edges_within(const BitGraph& g, const std::vector<int>& u) {
    long long m = (long long)u.size();
    return m * (m - 1) / 2 - g.edges_in(set_of(g.n, u));
}

void require(bool ok, const std::string& gate, const std::string& detail) {
    if (!ok) throw GateError(gate, detail);
}

Induced induced_tree(const Tree& t, const std::vector<int>& verts) {
    std::vector<int> local(t.n, -1);
    for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = int(i);
    std::vector<Edge> e;
    for (int v : verts)
        for (int w : t.adj[v])
            if (local[w] >= 0 && v < w) e.push_back({local[v], local[w]});
    return {Tree::from_edges(int(verts.size()), e), verts};
}

std::vector<int> sorted_by_key(std::vector<int> xs, const std::vector<int>& key) {
    std::stable_sort(xs.begin(), xs.end(), [&](int a, int b) { return key[a] < key[b]; });
    return xs;
}

void Placer::put(int tv, int hv) {
    audit(map[tv] < 0 && !used.test(hv), "placer: vertex reused");
    map[tv] = hv;
    used.set(hv);
}

namespace {

Bitset candidates(const Placer& p, const Tree& t, int tv, const Bitset& pool) {
    Bitset c = pool - p.used;
    for (int w : t.adj[tv])
        if (p.placed(w)) c &= p.g.rows[p.map[w]];
    return c;
}

}  // namespace

int Placer::choose(const Tree& t, int tv, const Bitset& pool, Rng* rng) const {
    Bitset c = candidates(*this, t, tv, pool);
    if (!rng) return c.first();
    int k = c.count();
    if (k == 0) return -1;
    return c.nth_and(c, int(rng->below(uint64_t(k))));
}

int Placer::count_choices(const Tree& t, int tv, const Bitset& pool) const {
    return candidates(*this, t, tv, pool).count();
}

bool place_leaves(Placer& p, const Tree& t, const std::vector<int>& leaves, const Bitset& pool,
                  std::vector<int>* violator) {
    std::vector<int> parents, index(t.n, -1);
    std::vector<std::vector<int>> kids;
    for (int x : leaves) {
        int q = -1, seen = 0;
        for (int w : t.adj[x])
            if (p.placed(w)) {
                q = w;
                ++seen;
            }
        audit(seen == 1 && !p.placed(x), "place_leaves: leaf needs exactly one placed neighbour");
        if (index[q] < 0) {
            index[q] = int(parents.size());
            parents.push_back(q);
            kids.emplace_back();
        }
        kids[index[q]].push_back(x);
    }
    std::vector<int> free = members(pool - p.used);
    Bipartite b(int(parents.size()), int(free.size()));
    for (int i = 0; i < b.na; ++i) {
        const Bitset& row = p.g.rows[p.map[parents[i]]];
        for (int j = 0; j < b.nb; ++j)
            if (row.test(free[j])) b.add(i, j);
    }
    std::vector<int> demand(b.na);
    for (int i = 0; i < b.na; ++i) demand[i] = int(kids[i].size());
    StarPacking s = star_packing(b, demand);
    if (!s.ok) {
        if (violator) {
            violator->clear();
            for (int i : s.violator) violator->push_back(parents[i]);
        }
        return false;
    }
    for (int i = 0; i < b.na; ++i)
        for (size_t j = 0; j < kids[i].size(); ++j) p.put(kids[i][j], free[s.stars[i][j]]);
    return true;
}

bool path_triples(const BitGraph& g, const std::vector<int>& centres, const Bitset& ends,
                  std::vector<std::array<int, 3>>& out) {
    std::vector<int> pool = members(ends);
    Bipartite b(int(centres.size()), int(pool.size()));
    for (int i = 0; i < b.na; ++i)
        for (int j = 0; j < b.nb; ++j)
            if (g.has(centres[i], pool[j])) b.add(i, j);
    StarPacking s = star_packing(b, std::vector<int>(b.na, 2));
    if (!s.ok) return false;
    for (int i = 0; i < b.na; ++i) out.push_back({pool[s.stars[i][0]], centres[i], pool[s.stars[i][1]]});
    return true;
}

bool close_paths(Placer& p, const std::vector<std::vector<int>>& paths,
                 const std::vector<std::array<int, 3>>& triples) {
    int l = int(paths.size());
    audit(int(triples.size()) == l, "close_paths: triple count");
    Bipartite k(l, l);
    for (int i = 0; i < l; ++i) {
        int u = p.map[paths[i].front()], v = p.map[paths[i].back()];
        for (int j = 0; j < l; ++j) {
            auto [x, w, y] = triples[j];
            if ((p.g.has(u, x) && p.g.has(v, y)) || (p.g.has(u, y) && p.g.has(v, x))) k.add(i, j);
        }
    }
    Matching m = max_matching(k);
    if (m.size < l) return false;
    for (int i = 0; i < l; ++i) {
        auto [x, w, y] = triples[m.mate_a[i]];
        int u = p.map[paths[i].front()], v = p.map[paths[i].back()];
        if (!(p.g.has(u, x) && p.g.has(v, y))) std::swap(x, y);
        p.map[paths[i][1]] = x;
        p.map[paths[i][2]] = w;
        p.map[paths[i][3]] = y;
        p.used.set(x);
        p.used.set(w);
        p.used.set(y);
    }
    return true;
}

}  // namespace detail

using namespace detail;

void DeskConstants::check() const {
    if (!(0 < c && c <= mu && mu <= beta && beta <= eps && eps < 1))
        throw InputError("constants must satisfy 0 < c <= mu <= beta <= eps < 1");
    if (!(alpha > 0 && alpha < 1)) throw InputError("alpha must lie in (0, 1)");
    if (!(xi > 0 && xi <= 1)) throw InputError("xi must lie in (0, 1]");
    if (!(eta >= 0 && eta <= 1)) throw InputError("eta must lie in [0, 1]");
    if (!(edge_constant > 0)) throw InputError("edge_constant must be positive");
    if (retry_budget < 1) throw InputError("retry_budget must be at least 1");
}

nlohmann::json DeskConstants::to_json() const {
    return {{"c", c},         {"mu", mu},   {"beta", beta},
            {"alpha", alpha}, {"eps", eps}, {"xi", xi},
            {"eta", eta},     {"edge_constant", edge_constant},
            {"retry_budget", retry_budget}, {"seed", seed}};
}

DeskConstants DeskConstants::from_json(const nlohmann::json& j) {
    DeskConstants d;
    try {
        for (auto& [key, val] : j.items()) {
            if (key == "c") d.c = val.get<double>();
            else if (key == "mu") d.mu = val.get<double>();
            else if (key == "beta") d.beta = val.get<double>();
            else if (key == "alpha") d.alpha = val.get<double>();
            else if (key == "eps") d.eps = val.get<double>();
            else if (key == "xi") d.xi = val.get<double>();
            else if (key == "eta") d.eta = val.get<double>();
            else if (key == "edge_constant") d.edge_constant = val.get<double>();
            else if (key == "retry_budget") d.retry_budget = val.get<int>();
            else if (key == "seed") d.seed = val.get<uint64_t>();
            else throw InputError("unknown constant '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad constants: ") + e.what());
    }
    d.check();
    return d;
}

std::string embedding_problem(const BitGraph& h, const Tree& t, const std::vector<int>& map) {
    if (int(map.size()) != t.n) return "map has " + std::to_string(map.size()) + " entries for " + std::to_string(t.n) + " vertices";
    std::vector<char> hit(h.n, 0);
    for (int v = 0; v < t.n; ++v) {
        int x = map[v];
        if (x < 0 || x >= h.n) return "vertex " + std::to_string(v) + " unmapped";
        if (hit[x]) return "host vertex " + std::to_string(x) + " used twice";
        hit[x] = 1;
    }
    for (auto [u, v] : t.edges())
        if (!h.has(map[u], map[v]))
            return "edge " + std::to_string(u) + "-" + std::to_string(v) + " not present";
    return "";
}

void validate(const RBGraph& g, const Tree& t, const Embedding& e) {
    std::string p = embedding_problem(g.of(e.color), t, e.map);
    if (!p.empty()) throw AuditError(std::string("invalid ") + color_name(e.color) + " embedding: " + p);
}

std::vector<int> greedy_embed(const Tree& t, const BitGraph& g, Anchor anchor) {
    auto [tv, hv] = anchor;
    if (tv < 0 || tv >= t.n || hv < 0 || hv >= g.n) throw InputError("anchor out of range");
    for (int v = 0; v < g.n; ++v)
        require(g.degree(v) >= t.n - 1, "min-degree",
                "host vertex " + std::to_string(v) + " has degree " + std::to_string(g.degree(v)) + " < " +
                    std::to_string(t.n - 1));
    Placer p(g, t.n);
    p.put(tv, hv);
    Bitset all(g.n);
    all.fill();
    int bad = grow(p, t, std::vector<char>(t.n, 1), [&](int) -> const Bitset& { return all; }, nullptr);
    audit(bad < 0, "greedy_embed stuck despite degree condition");
    audit(embedding_problem(g, t, p.map).empty(), "greedy_embed produced an invalid copy");
    return p.map;
}

std::vector<int> greedy_embed_bipartite(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                        const std::vector<int>& u2, Anchor anchor) {
    auto [tv, hv] = anchor;
    if (tv < 0 || tv >= t.n || hv < 0 || hv >= g.n) throw InputError("anchor out of range");
    Bitset s1 = set_of(g.n, u1), s2 = set_of(g.n, u2);
    if ((s1 & s2).any()) throw InputError("U1 and U2 overlap");
    if (!s1.test(hv) && !s2.test(hv)) throw InputError("anchor host vertex outside U1 and U2");
    Bipartition b = bipartition(t);
    int anchor_side = s1.test(hv) ? 0 : 1;
    // to_side[class] in {0, 1}
    int to_side[2];
    to_side[b.side[tv]] = anchor_side;
    to_side[1 - b.side[tv]] = 1 - anchor_side;
    int need[2] = {0, 0};
    for (int v = 0; v < t.n; ++v) ++need[to_side[b.side[v]]];
    for (int u : u1)
        require(g.degree_in(u, s2) >= need[1], "bipartite-degree",
                "U1 vertex " + std::to_string(u) + " has " + std::to_string(g.degree_in(u, s2)) + " < " +
                    std::to_string(need[1]) + " neighbours in U2");
    for (int u : u2)
        require(g.degree_in(u, s1) >= need[0], "bipartite-degree",
                "U2 vertex " + std::to_string(u) + " has " + std::to_string(g.degree_in(u, s1)) + " < " +
                    std::to_string(need[0]) + " neighbours in U1");
    Placer p(g, t.n);
    p.put(tv, hv);
    int bad = grow(
        p, t, std::vector<char>(t.n, 1),
        [&](int v) -> const Bitset& { return to_side[b.side[v]] == 0 ? s1 : s2; }, nullptr);
    audit(bad < 0, "bipartite greedy stuck despite degree condition");
    audit(embedding_problem(g, t, p.map).empty(), "bipartite greedy produced an invalid copy");
    return p.map;
}

std::optional<std::vector<int>> find_copy(const BitGraph& g, const Tree& t) {
    int n = t.n;
    if (n == 0) return std::vector<int>{};
    if (n > g.n) return std::nullopt;
    int root = 0;
    for (int v = 1; v < n; ++v)
        if (t.degree(v) > t.degree(root)) root = v;
    Rooted r = root_at(t, root);
    std::vector<int> hdeg(g.n);
    for (int v = 0; v < g.n; ++v) hdeg[v] = g.degree(v);
    std::vector<int> map(n, -1);
    Bitset used(g.n), all(g.n);
    all.fill();
    std::function<bool(int)> dfs = [&](int i) -> bool {
        if (i == n) return true;
        int v = r.order[i];
        Bitset cand = i == 0 ? all : g.rows[map[r.parent[v]]] - used;
        int need = t.degree(v);
        int kids = int(r.children[v].size());
        for (int h = cand.first(); h >= 0; h = cand.next(h)) {
            if (hdeg[h] < need) continue;
            map[v] = h;
            used.set(h);
            if (g.rows[h].count() - g.rows[h].count_and(used) >= kids && dfs(i + 1)) return true;
            used.reset(h);
            map[v] = -1;
        }
        return false;
    };
    if (!dfs(0)) return std::nullopt;
    audit(embedding_problem(g, t, map).empty(), "find_copy produced an invalid copy");
    return map;
}

std::optional<Embedding> find_mono_copy(const RBGraph& g, const Tree& t, Color c) {
    auto m = find_copy(g.of(c), t);
    if (!m) return std::nullopt;
    Embedding e{*m, c};
    validate(g, t, e);
    return e;
}

std::vector<std::vector<int>> bare_paths4(const std::vector<std::vector<int>>& adj, const std::vector<int>& side,
                                          int end_side, const std::vector<char>& skip) {
    int n = int(adj.size());
    auto inner = [&](int v) { return !skip[v] && adj[v].size() == 2; };
    std::vector<char> visited(n, 0), taken(n, 0);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (!inner(s) || visited[s]) continue;
        // Walk to one end of the chain of degree-2 vertices through s.
        int prev = s, cur = adj[s][0];
        while (inner(cur) && cur != s) {
            int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
            prev = cur;
            cur = nxt;
        }
        std::vector<int> seq{cur};
        int from = cur, at = prev;
        while (true) {
            seq.push_back(at);
            visited[at] = 1;
            int nxt = adj[at][0] == from ? adj[at][1] : adj[at][0];
            from = at;
            at = nxt;
            if (!inner(at)) {
                seq.push_back(at);
                break;
            }
        }
        int m = int(seq.size()) - 2;  // interior count
        for (int i = 0; i + 3 <= m;) {
            int a = seq[i], z = seq[i + 4];
            bool ok = !skip[a] && !skip[z] && !taken[a] && !taken[z] && (end_side < 0 || side[a] == end_side);
            if (ok) {
                std::vector<int> p(seq.begin() + i, seq.begin() + i + 5);
                for (int x : p) taken[x] = 1;
                out.push_back(std::move(p));
                i += 5;
            } else {
                ++i;
            }
        }
    }
    return out;
}

LemmaResult embed_bare_paths_dense(const Tree& t, const BitGraph& h, const std::vector<int>& u,
                                   std::optional<Anchor> anchor, double mu, int budget, Rng rng) {
    int n = t.n;
    require(int(u.size()) == n, "host order", "|H|=" + std::to_string(u.size()) + " but n=" + std::to_string(n));
    int delta = min_degree_within(h, u);
    require(delta >= (1 - mu) * n, "min-degree",
            "delta(H)=" + std::to_string(delta) + " < (1-mu)n=" + num((1 - mu) * n));
    int ell = int(std::ceil(10 * mu * n - 1e-9));
    std::vector<char> skip(n, 0);
    if (anchor) {
        skip[anchor->first] = 1;
        require(set_of(h.n, u).test(anchor->second), "anchor", "anchor host vertex outside H");
    }
    auto paths = bare_paths4(t.adj, std::vector<int>(n, 0), -1, skip);
    require(int(paths.size()) >= ell && ell > 0, "bare paths",
            std::to_string(paths.size()) + " disjoint bare paths of length 4, need " + std::to_string(ell));
    paths.resize(ell);
    std::vector<char> inside(n, 1);
    for (auto& p : paths)
        for (int i = 1; i <= 3; ++i) inside[p[i]] = 0;
    Bitset pool = set_of(h.n, u);
    LemmaResult res;
    std::string last = "";
    for (int attempt = 0; attempt < budget; ++attempt) {
        Placer pl(h, n);
        if (anchor) pl.put(anchor->first, anchor->second);
        Rng r = rng.split(attempt);
        int bad = grow(pl, t, inside, [&](int) -> const Bitset& { return pool; }, attempt ? &r : nullptr);
        if (bad >= 0) {
            last = "greedy stage stuck at tree vertex " + std::to_string(bad);
            continue;
        }
        std::vector<int> free = members(pool - pl.used);
        audit(int(free.size()) == 3 * ell, "dense bare paths: leftover count");
        r.shuffle(free);
        std::vector<int> centres(free.begin(), free.begin() + ell);
        Bitset ends = set_of(h.n, std::vector<int>(free.begin() + ell, free.end()));
        std::vector<std::array<int, 3>> triples;
        if (!path_triples(h, centres, ends, triples)) {
            last = "path cover stage failed";
            continue;
        }
        if (!close_paths(pl, paths, triples)) {
            last = "endpoint matching stage failed";
            continue;
        }
        audit(embedding_problem(h, t, pl.map).empty(), "dense bare paths: invalid copy");
        res.map = pl.map;
        res.attempts = attempt + 1;
        res.trace.push_back("dense bare paths: " + std::to_string(ell) + " paths");
        return res;
    }
    throw GateError("retry budget", "dense bare paths: " + last);
}

LemmaResult embed_bare_paths_bipartite(const Tree& t, const BitGraph& h, const std::vector<int>& u1,
                                       const std::vector<int>& u2, const ForestTask& task, double mu, double beta,
                                       int budget, Rng rng) {
    int n = t.n;
    Bipartition b = bipartition(t);
    std::vector<char> active = task.active.empty() ? std::vector<char>(n, 1) : task.active;
    std::vector<int> partial = task.partial.empty() ? std::vector<int>(n, -1) : task.partial;
    Bitset s1 = set_of(h.n, u1), s2 = set_of(h.n, u2), blocked = set_of(h.n, task.blocked);
    if ((s1 & s2).any()) throw InputError("U1 and U2 overlap");
    int n1 = int(u1.size()), n2 = int(u2.size());
    for (int u : u1) {
        int d = h.degree_in(u, s2);
        require(d >= n2 - mu * n, "U1 degrees",
                "vertex " + std::to_string(u) + " has " + std::to_string(d) + " < |U2|-mu n=" + num(n2 - mu * n));
    }
    std::vector<int> w;
    for (int u : u2) {
        int d = h.degree_in(u, s1);
        require(d >= beta * n, "U2 degrees",
                "vertex " + std::to_string(u) + " has " + std::to_string(d) + " < beta n=" + num(beta * n));
        if (d < n1 - mu * n) w.push_back(u);
    }
    require(w.size() <= mu * n, "low-degree set",
            "|W|=" + std::to_string(w.size()) + " > mu n=" + num(mu * n));
    Bitset wset = set_of(h.n, w);
    int rcount = 0;
    std::vector<char> used_host(h.n, 0);
    int need[2] = {0, 0};
    for (int v = 0; v < n; ++v) {
        if (!active[v]) continue;
        if (partial[v] < 0) {
            ++need[b.side[v]];
            continue;
        }
        ++rcount;
        int x = partial[v];
        require(!wset.test(x), "partial copy", "R vertex " + std::to_string(v) + " sits on W");
        require((b.side[v] == 0 ? s1 : s2).test(x), "partial copy",
                "R vertex " + std::to_string(v) + " on the wrong side");
        require(!used_host[x], "partial copy", "R images collide");
        used_host[x] = 1;
    }
    require(rcount <= beta * n / 2, "subforest size",
            "|R|=" + std::to_string(rcount) + " > beta n/2=" + num(beta * n / 2));
    Bitset taken = blocked;
    for (int x = 0; x < h.n; ++x)
        if (used_host[x]) taken.set(x);
    int avail1 = (s1 - taken).count(), avail2 = (s2 - taken).count();
    require(need[0] <= avail1 && need[1] <= avail2, "class sizes",
            "need " + std::to_string(need[0]) + "/" + std::to_string(need[1]) + " free " + std::to_string(avail1) +
                "/" + std::to_string(avail2));

    int ell = int(std::ceil(10 * mu * n - 1e-9));
    std::vector<std::vector<int>> paths = task.paths;
    if (paths.empty()) {
        std::vector<std::vector<int>> adj(n);
        std::vector<char> skip(n, 0);
        for (int v = 0; v < n; ++v) {
            if (!active[v]) {
                skip[v] = 1;
                continue;
            }
            if (partial[v] >= 0) skip[v] = 1;
            for (int x : t.adj[v])
                if (active[x]) adj[v].push_back(x);
        }
        paths = bare_paths4(adj, b.side, 1, skip);
    }
    require(int(paths.size()) >= ell && ell > 0, "bare paths",
            std::to_string(paths.size()) + " paths with both ends in V2, need " + std::to_string(ell));
    paths.resize(ell);
    std::vector<char> inner(n, 0);
    for (auto& p : paths) {
        audit(p.size() == 5 && b.side[p[0]] == 1 && b.side[p[4]] == 1, "bipartite bare paths: malformed path");
        for (int x : p) audit(active[x] && partial[x] < 0, "bipartite bare paths: path leaves the forest");
        for (int i = 1; i <= 3; ++i) inner[p[i]] = 1;
    }
    require(int(w.size()) <= ell, "low-degree set", "|W| exceeds the number of paths");

    std::vector<char> inside(n, 0);
    for (int v = 0; v < n; ++v) inside[v] = active[v] && !inner[v];
    std::string last;
    for (int attempt = 0; attempt < budget; ++attempt) {
        Rng r = rng.split(attempt);
        Placer pl(h, n);
        for (int v = 0; v < n; ++v)
            if (active[v] && partial[v] >= 0) pl.put(v, partial[v]);
        for (int x : task.blocked) pl.used.set(x);
        std::vector<std::array<int, 3>> triples;
        bool ok = true;
        std::vector<int> order = w;
        for (int c : order) {
            if (pl.used.test(c)) continue;
            pl.used.set(c);
            Bitset cand = (h.rows[c] & s1) - pl.used;
            if (cand.count() < 2) {
                ok = false;
                break;
            }
            int k = cand.count();
            int x = attempt ? cand.nth_and(cand, int(r.below(k))) : cand.first();
            cand.reset(x);
            int y = attempt ? cand.nth_and(cand, int(r.below(k - 1))) : cand.first();
            pl.used.set(x);
            pl.used.set(y);
            triples.push_back({x, c, y});
        }
        if (!ok) {
            last = "no room around a low-degree vertex";
            continue;
        }
        int bad = grow(pl, t, inside, [&](int v) -> const Bitset& { return b.side[v] == 0 ? s1 : s2; },
                       attempt ? &r : nullptr);
        if (bad >= 0) {
            last = "greedy stage stuck at tree vertex " + std::to_string(bad);
            continue;
        }
        std::vector<int> free2 = members(s2 - pl.used);
        int want = ell - int(triples.size());
        if (int(free2.size()) < want) {
            last = "too few free U2 vertices for centres";
            continue;
        }
        r.shuffle(free2);
        std::vector<int> centres(free2.begin(), free2.begin() + want);
        if (!path_triples(h, centres, s1 - pl.used, triples)) {
            last = "path cover stage failed";
            continue;
        }
        if (!close_paths(pl, paths, triples)) {
            last = "endpoint matching stage failed";
            continue;
        }
        Bitset centre_images(h.n);
        for (auto& p : paths) centre_images.set(pl.map[p[2]]);
        for (int c : w)
            audit(blocked.test(c) || centre_images.test(c), "bipartite bare paths: W vertex not covered by a centre");
        LemmaResult res;
        res.map = pl.map;
        res.attempts = attempt + 1;
        res.trace.push_back("bipartite bare paths: " + std::to_string(ell) + " paths, |W|=" + std::to_string(w.size()));
        res.stats["w"] = w;
        return res;
    }
    throw GateError("retry budget", "bipartite bare paths: " + last);
}

}  // namespace rt
