#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rt/bitset.hpp"
#include "rt/rng.hpp"

namespace rt {

enum class Color { Red = 0, Blue = 1 };
inline Color other(Color c) { return c == Color::Red ? Color::Blue : Color::Red; }
const char* color_name(Color c);

struct BitGraph {
    int n = 0;
    std::vector<Bitset> rows;

    BitGraph() = default;
    explicit BitGraph(int n_) : n(n_), rows(n_, Bitset(n_)) {}

    bool has(int u, int v) const { return rows[u].test(v); }
    void add(int u, int v) {
        rows[u].set(v);
        rows[v].set(u);
    }
    void remove(int u, int v) {
        rows[u].reset(v);
        rows[v].reset(u);
    }
    int degree(int v) const { return rows[v].count(); }
    int degree_in(int v, const Bitset& s) const { return rows[v].count_and(s); }
    long long edges() const;
    long long edges_in(const Bitset& s) const;
};

// Two-coloured complete graph. red and blue partition the off-diagonal pairs.
struct RBGraph {
    int n = 0;
    BitGraph red, blue;

    static RBGraph all(int n, Color c);
    static RBGraph from_red(const BitGraph& red);

    Color color(int u, int v) const { return red.has(u, v) ? Color::Red : Color::Blue; }
    void set(int u, int v, Color c);
    const BitGraph& of(Color c) const { return c == Color::Red ? red : blue; }
    RBGraph swapped() const;
    // Throws AuditError unless the colour classes partition all pairs.
    void check() const;
};

RBGraph burr_type1(int t1, int t2);
RBGraph burr_type2(int t1);
RBGraph perturb(const RBGraph& g, double eta, uint64_t seed);

// Adds one vertex (id n) whose edges are coloured uniformly at random.
RBGraph add_random_vertex(const RBGraph& g, uint64_t seed);

std::string to_graph6(const BitGraph& g);
BitGraph from_graph6(const std::string& s);
nlohmann::json graph6_sidecar(const RBGraph& g);

struct ExtremalWitness {
    int kind = 1;  // 1 or 2
    std::vector<int> u1, u2;
    double mu = 0;
    int t1 = 0, t2 = 0;
    bool swapped = false;  // red and blue exchanged
};

// Empty when the witness satisfies every extremality inequality exactly.
std::string witness_problem(const RBGraph& g, const ExtremalWitness& w);
std::optional<ExtremalWitness> detect_extremal(const RBGraph& g, double mu, int t1, int t2);
nlohmann::json witness_to_json(const ExtremalWitness& w);

// Vertex partition around a Type I witness. n is the tree order t1 + t2.
struct PartitionI {
    std::vector<int> u1p, u2p, x;
    int k = 0;
    int d = 0;
};
PartitionI partition_plus_type1(const RBGraph& g, const std::vector<int>& u1, const std::vector<int>& u2, double beta,
                                int n, double mu);

struct PartitionII {
    std::vector<int> u1p, u2p, leftover;
};
PartitionII partition_plus_type2(const RBGraph& g, const std::vector<int>& u1, const std::vector<int>& u2, double beta,
                                 int n);

}  // namespace rt
