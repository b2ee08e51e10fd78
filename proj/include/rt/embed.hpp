#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rt/decomp.hpp"
#include "rt/graph.hpp"
#include "rt/rng.hpp"
#include "rt/tree.hpp"

namespace rt {

struct DeskConstants {
    double c = 0.01, mu = 0.01, beta = 0.1, alpha = 0.02, eps = 0.2, xi = 0.3, eta = 0.002;
    double edge_constant = 1e7;
    int retry_budget = 50;
    uint64_t seed = 0;

    // Throws InputError unless 0 < c <= mu <= beta <= eps < 1 and the rest are in range.
    void check() const;
    nlohmann::json to_json() const;
    static DeskConstants from_json(const nlohmann::json& j);
};

struct CaseParams {
    int k = 0;
    int d = 0;
    std::vector<int> x;
};

struct Embedding {
    std::vector<int> map;  // tree vertex -> host vertex
    Color color = Color::Blue;
};

// Empty when map is an injective homomorphism of t into h.
std::string embedding_problem(const BitGraph& h, const Tree& t, const std::vector<int>& map);
// Throws AuditError unless e is a monochromatic copy of t in g.
void validate(const RBGraph& g, const Tree& t, const Embedding& e);

using Anchor = std::pair<int, int>;  // (tree vertex, host vertex)

std::vector<int> greedy_embed(const Tree& t, const BitGraph& g, Anchor anchor);
// The anchor's class goes to the anchor's side.
std::vector<int> greedy_embed_bipartite(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                        const std::vector<int>& u2, Anchor anchor);

// Complete backtracking search.
std::optional<std::vector<int>> find_copy(const BitGraph& g, const Tree& t);
std::optional<Embedding> find_mono_copy(const RBGraph& g, const Tree& t, Color c);

// Vertex-disjoint bare paths with four edges. end_side restricts both ends to one class
// (0 or 1, -1 for any); vertices with skip[v] set are never used.
std::vector<std::vector<int>> bare_paths4(const std::vector<std::vector<int>>& adj, const std::vector<int>& side,
                                          int end_side, const std::vector<char>& skip);

struct LemmaResult {
    std::vector<int> map;
    std::vector<std::string> trace;
    int attempts = 1;
    nlohmann::json stats = nlohmann::json::object();
};

// h is the host colour class; u lists the n host vertices to use.
LemmaResult embed_bare_paths_dense(const Tree& t, const BitGraph& h, const std::vector<int>& u,
                                   std::optional<Anchor> anchor, double mu, int budget, Rng rng);

// Extends a partial copy of a forest into h[U1, U2].
struct ForestTask {
    std::vector<char> active;                 // tree vertices to place (empty: all)
    std::vector<int> partial;                 // pre-placed images, -1 elsewhere (empty: none)
    std::vector<int> blocked;                 // host vertices already spoken for
    std::vector<std::vector<int>> paths;      // bare paths to use (empty: choose)
};
LemmaResult embed_bare_paths_bipartite(const Tree& t, const BitGraph& h, const std::vector<int>& u1,
                                       const std::vector<int>& u2, const ForestTask& task, double mu, double beta,
                                       int budget, Rng rng);

LemmaResult embed_leaves_IB1(const Tree& t, const BitGraph& g, const std::vector<int>& u1, const std::vector<int>& u2,
                             const CaseParams& p, const DeskConstants& dc, std::optional<Anchor> anchor, Rng rng);
LemmaResult embed_red_IB2(const Tree& t, const BitGraph& g, const std::vector<int>& u1, const std::vector<int>& u2,
                          const CaseParams& p, const DeskConstants& dc, Rng rng);

LemmaResult embed_typeII_two_hubs(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                  const std::vector<int>& u2, int v1, int v2, double mu);
LemmaResult embed_typeII_rebalance(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                   const std::vector<int>& u2, int w, double mu);
LemmaResult embed_typeII_split_blue(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                    const std::vector<int>& u2, int v, const DeskConstants& dc, Rng rng);
// crossing holds images of the cut's boundary vertices and their neighbours in B, -1 elsewhere.
LemmaResult embed_typeII_sparse_cut_blue(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                         const std::vector<int>& u2, const SparseCut& cut,
                                         const std::vector<int>& crossing, const DeskConstants& dc, Rng rng);
LemmaResult embed_typeII_red_leaf_cover(const Tree& t, const BitGraph& g, const std::vector<int>& u1,
                                        const std::vector<int>& u2, const std::vector<int>& ua,
                                        const std::vector<int>& ub, const SparseCutLeaves& payload,
                                        const DeskConstants& dc, Rng rng);

struct GateRecord {
    std::string step;
    std::string gate;
    bool passed = false;
    std::string detail;
};

struct DriveResult {
    std::optional<Embedding> embedding;
    std::string case_used;
    std::vector<GateRecord> trace;
    DeskConstants constants;
};

DriveResult drive_type1(const RBGraph& g, const Tree& t, const ExtremalWitness& w, const DeskConstants& dc);
DriveResult drive_type2(const RBGraph& g, const Tree& t, const ExtremalWitness& w, const DeskConstants& dc);
// Detects which extremal type g is near and runs that driver. GateError when it is neither.
DriveResult drive(const RBGraph& g, const Tree& t, const DeskConstants& dc);
nlohmann::json drive_to_json(const DriveResult& r);

}  // namespace rt
