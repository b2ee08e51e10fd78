#include "rt/ramsey.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <thread>

#include "rt/embed.hpp"
#include "rt/errors.hpp"

namespace rt {

LowerBound lower_bound_witness(const Tree& t) {
    LowerBound lb;
    Bipartition b = bipartition(t);
    int target = int(formula_value(b.t1, b.t2)) - 1;
    if (t.n == 1)
        lb.graph = RBGraph::all(0, Color::Blue);
    else if (b.t2 >= 2 && b.t1 < 2 * b.t2)
        lb.graph = burr_type1(b.t1, b.t2);
    else if (b.t1 >= 2)
        lb.graph = burr_type2(b.t1);
    else
        lb.graph = RBGraph::all(target, Color::Blue);
    audit(lb.graph.n == target, "lower-bound witness has the wrong order");
    lb.red_free = !find_mono_copy(lb.graph, t, Color::Red);
    lb.blue_free = !find_mono_copy(lb.graph, t, Color::Blue);
    return lb;
}

namespace {

using Mask = uint32_t;
using Clock = std::chrono::steady_clock;

// One embedding plan per directed tree edge (a, b): a, b first, then a BFS order from them.
struct Plan {
    int a, b;
    std::vector<int> order, parent;
};

struct TreeIndex {
    int n = 0;
    std::vector<int> deg;
    std::vector<Plan> plans;

    explicit TreeIndex(const Tree& t) : n(t.n), deg(t.n) {
        for (int v = 0; v < n; ++v) deg[v] = t.degree(v);
        for (auto [x, y] : t.edges())
            for (auto [a, b] : {Edge{x, y}, Edge{y, x}}) {
                Plan p{a, b, {a, b}, std::vector<int>(n, -1)};
                std::vector<char> seen(n, 0);
                seen[a] = seen[b] = 1;
                for (size_t i = 0; i < p.order.size(); ++i)
                    for (int z : t.adj[p.order[i]])
                        if (!seen[z]) {
                            seen[z] = 1;
                            p.parent[z] = p.order[i];
                            p.order.push_back(z);
                        }
                plans.push_back(std::move(p));
            }
    }

    bool extend(const Plan& p, const Mask* adj, size_t i, int* map, Mask used) const {
        if (i == p.order.size()) return true;
        int x = p.order[i];
        Mask cand = adj[map[p.parent[x]]] & ~used;
        while (cand) {
            int h = __builtin_ctz(cand);
            cand &= cand - 1;
            if (__builtin_popcount(adj[h]) < deg[x]) continue;
            map[x] = h;
            if (extend(p, adj, i + 1, map, used | (Mask(1) << h))) return true;
        }
        return false;
    }

    // Whether the graph holds a copy of the tree that uses the edge uv.
    bool through(const Mask* adj, int u, int v) const {
        int du = __builtin_popcount(adj[u]), dv = __builtin_popcount(adj[v]);
        int map[32];
        for (const Plan& p : plans) {
            if (du < deg[p.a] || dv < deg[p.b]) continue;
            map[p.a] = u;
            map[p.b] = v;
            if (extend(p, adj, 2, map, (Mask(1) << u) | (Mask(1) << v))) return true;
        }
        return false;
    }
};

struct Prefix {
    int r = 0;
    std::vector<int8_t> colors;  // colours of the first free edges
};

class Search {
public:
    Search(const Tree& t, int N, const SearchOptions& opt, Clock::time_point deadline)
        : idx_(t), N_(N), opt_(opt), deadline_(deadline) {
        for (int i = 2; i < N; ++i)
            for (int j = 1; j < i; ++j) edges_.push_back({j, i});
    }

    SearchResult run() {
        SearchResult res;
        if (idx_.n == 1 && N_ >= 1) return res;
        if (N_ < idx_.n) {
            res.outcome = SearchOutcome::Found;
            res.coloring = RBGraph::all(N_, Color::Blue);
            return res;
        }
        std::vector<Prefix> tasks;
        int depth = std::min<int>(int(edges_.size()), 8);
        for (int r = N_ / 2; r <= N_ - 1; ++r) {
            State s = start(r);
            if (s.dead) continue;
            collect(s, 0, depth, {r, {}}, tasks);
        }
        std::atomic<size_t> next{0};
        std::atomic<bool> timeout{false};
        std::mutex mu;
        size_t best = tasks.size();
        std::optional<RBGraph> found;
        auto worker = [&] {
            for (;;) {
                size_t k = next.fetch_add(1);
                if (k >= tasks.size() || timeout) return;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (k > best) return;
                }
                State s = start(tasks[k].r);
                for (size_t e = 0; e < tasks[k].colors.size(); ++e) apply(s, int(e), tasks[k].colors[e]);
                Ctx ctx{&timeout, &mu, &best, k, 0};
                std::optional<RBGraph> got;
                if (dfs(s, int(tasks[k].colors.size()), ctx, got)) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (k < best) {
                        best = k;
                        found = got;
                    }
                }
            }
        };
        int jobs = std::max(1, opt_.jobs);
        std::vector<std::thread> pool;
        for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
        if (found) {
            res.outcome = SearchOutcome::Found;
            res.coloring = found;
        } else {
            res.outcome = timeout ? SearchOutcome::Timeout : SearchOutcome::None;
        }
        return res;
    }

private:
    struct State {
        Mask adj[2][32] = {};
        int8_t col[32][32];
        int r = 0;
        bool dead = false;
    };
    struct Ctx {
        std::atomic<bool>* timeout;
        std::mutex* mu;
        size_t* best;
        size_t index;
        uint64_t nodes;
    };

    TreeIndex idx_;
    int N_;
    SearchOptions opt_;
    Clock::time_point deadline_;
    std::vector<Edge> edges_;

    bool put(State& s, int u, int v, int c) const {
        s.adj[c][u] |= Mask(1) << v;
        s.adj[c][v] |= Mask(1) << u;
        s.col[u][v] = s.col[v][u] = int8_t(c);
        return !idx_.through(s.adj[c], u, v);
    }
    void unput(State& s, int u, int v, int c) const {
        s.adj[c][u] &= ~(Mask(1) << v);
        s.adj[c][v] &= ~(Mask(1) << u);
        s.col[u][v] = s.col[v][u] = -1;
    }

    State start(int r) const {
        State s;
        s.r = r;
        for (auto& row : s.col) std::fill(std::begin(row), std::end(row), int8_t(-1));
        for (int j = 1; j < N_; ++j)
            if (!put(s, 0, j, j <= r ? 0 : 1)) s.dead = true;
        return s;
    }

    void apply(State& s, int e, int c) const { put(s, edges_[e].first, edges_[e].second, c); }

    // Transposition lex-leader test once vertex i has all its edges to 0..i-1.
    bool leader(const State& s, int i) const {
        for (int j = 1; j < i; ++j) {
            if ((j <= s.r) != (i <= s.r)) continue;
            auto sw = [&](int x) { return x == i ? j : x == j ? i : x; };
            for (int b = 1; b <= i; ++b) {
                int diff = 0;
                for (int a = 0; a < b; ++a) {
                    int mine = s.col[a][b], theirs = s.col[sw(a)][sw(b)];
                    if (mine != theirs) {
                        diff = theirs < mine ? -1 : 1;
                        break;
                    }
                }
                if (diff < 0) return false;
                if (diff > 0) break;
            }
        }
        return true;
    }

    int first_color() const { return opt_.blue_first ? 1 : 0; }

    void collect(State& s, int e, int depth, Prefix p, std::vector<Prefix>& out) const {
        if (e == depth) {
            out.push_back(p);
            return;
        }
        auto [u, v] = edges_[e];
        for (int k = 0; k < 2; ++k) {
            int c = k ^ first_color();
            bool ok = put(s, u, v, c);
            if (ok && (u != v - 1 || leader(s, v))) {
                Prefix q = p;
                q.colors.push_back(int8_t(c));
                collect(s, e + 1, depth, q, out);
            }
            unput(s, u, v, c);
        }
    }

    bool dfs(State& s, int e, Ctx& ctx, std::optional<RBGraph>& got) const {
        if ((ctx.nodes++ & 4095) == 0) {
            if (Clock::now() > deadline_) *ctx.timeout = true;
            std::lock_guard<std::mutex> lock(*ctx.mu);
            if (*ctx.best < ctx.index) return false;
        }
        if (*ctx.timeout) return false;
        if (e == int(edges_.size())) {
            RBGraph g = RBGraph::all(N_, Color::Blue);
            for (int u = 0; u < N_; ++u)
                for (int v = u + 1; v < N_; ++v)
                    if (s.col[u][v] == 0) g.set(u, v, Color::Red);
            got = g;
            return true;
        }
        auto [u, v] = edges_[e];
        for (int k = 0; k < 2; ++k) {
            int c = k ^ first_color();
            bool ok = put(s, u, v, c);
            if (ok && (u != v - 1 || leader(s, v)) && dfs(s, e + 1, ctx, got)) return true;
            unput(s, u, v, c);
        }
        return false;
    }
};

}  // namespace

SearchResult mono_free_search(const Tree& t, int N, const SearchOptions& opt) {
    if (N > 32) throw InputError("mono_free_search supports at most 32 host vertices");
    if (N < 0) throw InputError("negative host order");
    auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(opt.budget_secs));
    return Search(t, N, opt, deadline).run();
}

RamseyResult ramsey_exact(const Tree& t, const SearchOptions& opt) {
    auto t0 = Clock::now();
    RamseyResult r;
    Bipartition b = bipartition(t);
    r.tree_code = canonical_code(t);
    r.n = t.n;
    r.t1 = b.t1;
    r.t2 = b.t2;
    r.formula = formula_value(b.t1, b.t2);
    LowerBound lb = lower_bound_witness(t);
    audit(lb.ok(), "lower-bound witness contains a monochromatic copy");
    std::optional<RBGraph> witness = lb.graph;
    r.lower_witness_n = lb.graph.n;
    for (int N = int(r.formula);; ++N) {
        double left = opt.budget_secs - std::chrono::duration<double>(Clock::now() - t0).count();
        SearchOptions o = opt;
        o.budget_secs = std::max(0.0, left);
        SearchResult s = mono_free_search(t, N, o);
        if (s.outcome == SearchOutcome::Timeout) {
            r.status = "budget_exceeded";
            r.smallest_unrefuted = N;
            break;
        }
        if (s.outcome == SearchOutcome::None) {
            r.exact = N;
            r.witness = witness;
            long long d = N - r.formula;
            r.status = d == 0 ? "tight" : "off_by(" + std::to_string(d) + ")";
            break;
        }
        witness = s.coloring;
        r.lower_witness_n = N;
    }
    audit(!r.exact || *r.exact >= r.formula, "exact value below the formula");
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

nlohmann::json ramsey_to_json(const RamseyResult& r) {
    nlohmann::json j{{"tree_code", r.tree_code}, {"n", r.n},         {"t1", r.t1},
                     {"t2", r.t2},               {"formula", r.formula}, {"status", r.status}};
    j["exact"] = r.exact ? nlohmann::json(*r.exact) : nlohmann::json(nullptr);
    if (r.witness) {
        j["witness"] = {{"n", r.witness->n}, {"format", "graph6-red"}, {"graph6", to_graph6(r.witness->red)}};
    }
    if (!r.exact) j["bounds"] = {r.lower_witness_n + 1, r.smallest_unrefuted};
    return j;
}

std::string csv_header() { return "tree_code,n,t1,t2,formula,exact,status,seconds"; }

std::string csv_row(const RamseyResult& r) {
    std::ostringstream os;
    os << r.tree_code << ',' << r.n << ',' << r.t1 << ',' << r.t2 << ',' << r.formula << ','
       << (r.exact ? std::to_string(*r.exact) : "") << ',' << r.status << ',';
    os.setf(std::ios::fixed);
    os.precision(3);
    os << r.seconds;
    return os.str();
}

bool is_path(const Tree& t) { return t.max_degree() <= 2; }

bool is_star(const Tree& t) { return t.n >= 3 && t.max_degree() == t.n - 1; }

bool is_double_star(const Tree& t) {
    std::vector<int> inner;
    for (int v = 0; v < t.n; ++v)
        if (t.degree(v) > 1) inner.push_back(v);
    return inner.size() == 2;
}

FormulaReport verify_formula(int nmax, const SearchOptions& opt) {
    FormulaReport rep;
    for (int n = 2; n <= nmax; ++n)
        for (const Tree& t : enumerate_trees(n)) {
            RamseyResult r = ramsey_exact(t, opt);
            rep.rows.push_back(r);
            if (!r.exact) {
                ++rep.budget_exceeded;
                continue;
            }
            auto expect = [&](bool cond, const std::string& what) {
                if (!cond) rep.failures.push_back(r.tree_code + ": " + what + ", got " + r.status);
            };
            if (is_path(t)) expect(r.status == "tight", "path should be tight");
            if (is_star(t)) {
                if (n % 2)
                    expect(r.status == "tight", "odd star should be tight");
                else
                    expect(r.status == "off_by(1)", "even star should be off by one");
            }
            if (is_double_star(t) && r.t2 >= 2 && r.t1 >= 3 * r.t2 - 2)
                expect(r.status == "off_by(1)", "double star with t1 >= 3t2-2 should be off by one");
        }
    return rep;
}

LowerBoundReport verify_lower_bound_all(int nmax) {
    LowerBoundReport rep;
    for (int n = 1; n <= nmax; ++n)
        for (const Tree& t : enumerate_trees(n)) {
            ++rep.trees;
            LowerBound lb = lower_bound_witness(t);
            if (!lb.ok()) rep.failures.push_back(canonical_code(t));
        }
    return rep;
}

}  // namespace rt
