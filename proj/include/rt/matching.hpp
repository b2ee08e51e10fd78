#pragma once

#include <vector>

#include "json.hpp"

namespace rt {

// Bipartite graph with sides A = {0..na-1} and B = {0..nb-1}; adj lists B-neighbours of each a.
struct Bipartite {
    int na = 0, nb = 0;
    std::vector<std::vector<int>> adj;

    Bipartite() = default;
    Bipartite(int a, int b) : na(a), nb(b), adj(a) {}
    void add(int a, int b) { adj[a].push_back(b); }
};

struct Matching {
    std::vector<int> mate_a, mate_b;  // -1 when unmatched
    int size = 0;
};

// Hopcroft-Karp.
Matching max_matching(const Bipartite& g);
bool has_augmenting_path(const Bipartite& g, const Matching& m);

struct StarPacking {
    bool ok = false;
    std::vector<std::vector<int>> stars;  // stars[a] = leaves of a's star when ok
    std::vector<int> violator;            // S with |N(S)| < sum of demands, when not ok
};
StarPacking star_packing(const Bipartite& g, const std::vector<int>& demand);

struct Cascade {
    std::vector<int> a_plus, a_minus, a_bar, b_plus, b_minus, b_bar, a_prime, b_prime;
};
// Throws InputError if m is not a maximum matching of g.
Cascade cascade(const Bipartite& g, const Matching& m);
// Throws AuditError unless both cross graphs are empty and the classes are consistent with m.
void check_cascade(const Bipartite& g, const Matching& m, const Cascade& c);

nlohmann::json cascade_to_json(const Cascade& c);

}  // namespace rt
