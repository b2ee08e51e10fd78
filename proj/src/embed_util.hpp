#pragma once

#include <array>
#include <string>
#include <vector>

#include "rt/bitset.hpp"
#include "rt/embed.hpp"
#include "rt/errors.hpp"
#include "rt/graph.hpp"
#include "rt/rng.hpp"
#include "rt/tree.hpp"

namespace rt::detail {

std::string num(double x);
Bitset set_of(int n, const std::vector<int>& v);
std::vector<int> members(const Bitset& b);
int min_degree_within(const BitGraph& g, const std::vector<int>& u);
long long non_edges_within(const BitGraph& g, const std::vector<int>& u);

struct Placer {
    const BitGraph& g;
    std::vector<int> map;
    Bitset used;

    Placer(const BitGraph& host, int tree_n) : g(host), map(tree_n, -1), used(host.n) {}

    void put(int tv, int hv);
    bool placed(int tv) const { return map[tv] >= 0; }
    // Free vertex of pool adjacent to every placed tree neighbour of tv: lowest id, or uniform with rng.
    int choose(const Tree& t, int tv, const Bitset& pool, Rng* rng) const;
    int count_choices(const Tree& t, int tv, const Bitset& pool) const;
};

// Places every unplaced vertex with inside[v] set, growing from placed vertices first and then
// rooting each untouched component at a free vertex of its pool. pool_of(v) gives the allowed
// host set. Returns the first vertex that could not be placed, or -1.
template <class PoolOf>
int grow(Placer& p, const Tree& t, const std::vector<char>& inside, PoolOf pool_of, Rng* rng);

// Demand-weighted leaf placement by star packing. Each leaf has exactly one placed neighbour, its
// parent. Leaves of a placed parent go to distinct free
// vertices of pool adjacent to the parent's image. On failure returns false and fills violator
// with the tree parents of a Hall violator.
bool place_leaves(Placer& p, const Tree& t, const std::vector<int>& leaves, const Bitset& pool,
                  std::vector<int>* violator);

// Cover of `free` by paths x w y with w in centres: star packing with demand 2.
bool path_triples(const BitGraph& g, const std::vector<int>& centres, const Bitset& ends,
                  std::vector<std::array<int, 3>>& out);

// Matches each tree path (u .. v) to a triple and writes the interior images.
bool close_paths(Placer& p, const std::vector<std::vector<int>>& paths, const std::vector<std::array<int, 3>>& triples);

void require(bool ok, const std::string& gate, const std::string& detail);

struct Induced {
    Tree tree;
    std::vector<int> ids;  // local -> global
};
Induced induced_tree(const Tree& t, const std::vector<int>& verts);

// Stable sort of xs by key[x], ascending.
std::vector<int> sorted_by_key(std::vector<int> xs, const std::vector<int>& key);

inline void record(DriveResult& r, const std::string& step, const std::string& gate, bool passed,
                   const std::string& detail) {
    r.trace.push_back({step, gate, passed, detail});
}

// Runs a lemma and records its outcome under step.
template <class F>
std::optional<std::vector<int>> attempt(DriveResult& r, const std::string& step, F run) {
    try {
        LemmaResult lr = run();
        std::string d = lr.trace.empty() ? "" : lr.trace.back();
        record(r, step, "lemma", true, d + " (attempts " + std::to_string(lr.attempts) + ")");
        return lr.map;
    } catch (const GateError& e) {
        record(r, step, e.gate, false, e.what());
    }
    return std::nullopt;
}

template <class PoolOf>
int grow(Placer& p, const Tree& t, const std::vector<char>& inside, PoolOf pool_of, Rng* rng) {
    int n = t.n;
    std::vector<char> seen(n, 0);
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (inside[v] && p.placed(v)) {
            seen[v] = 1;
            queue.push_back(v);
        }
    auto flood = [&](size_t head) {
        for (; head < queue.size(); ++head) {
            int v = queue[head];
            for (int w : t.adj[v]) {
                if (!inside[w] || seen[w]) continue;
                seen[w] = 1;
                if (!p.placed(w)) {
                    int h = p.choose(t, w, pool_of(w), rng);
                    if (h < 0) return w;
                    p.put(w, h);
                }
                queue.push_back(w);
            }
        }
        return -1;
    };
    if (int bad = flood(0); bad >= 0) return bad;
    for (int r = 0; r < n; ++r) {
        if (!inside[r] || seen[r]) continue;
        int h = p.choose(t, r, pool_of(r), rng);
        if (h < 0) return r;
        p.put(r, h);
        seen[r] = 1;
        size_t head = queue.size();
        queue.push_back(r);
        if (int bad = flood(head); bad >= 0) return bad;
    }
    return -1;
}

}  // namespace rt::detail
