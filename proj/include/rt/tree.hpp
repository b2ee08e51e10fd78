#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rt {

using Edge = std::pair<int, int>;

struct Tree {
    int n = 0;
    std::vector<std::vector<int>> adj;

    // Throws InputError unless the edges form a tree on {0..n-1}.
    static Tree from_edges(int n, const std::vector<Edge>& edges);
    // parent[i] is the parent of vertex i+1 (vertex 0 is the root).
    static Tree from_parent_array(const std::vector<int>& parent);

    int degree(int v) const { return int(adj[v].size()); }
    int max_degree() const;
    std::vector<Edge> edges() const;  // u < v, sorted
    std::vector<int> leaves() const;
    bool is_leaf(int v) const { return n > 1 && adj[v].size() == 1; }
};

// Tree rooted at r: BFS order, parents and children.
struct Rooted {
    int root = 0;
    std::vector<int> parent;  // -1 at root
    std::vector<int> order;   // BFS order starting at root
    std::vector<int> depth;
    std::vector<std::vector<int>> children;
    std::vector<int> subtree_size;
};
Rooted root_at(const Tree& t, int r);

// Restricts BFS to vertices with inside[v] true (the induced subgraph must be connected).
Rooted root_within(const Tree& t, int r, const std::vector<char>& inside);

struct Bipartition {
    std::vector<int> side;  // 0 for V1, 1 for V2
    std::vector<int> v1, v2;
    int t1 = 0, t2 = 0;
    bool in_v1(int v) const { return side[v] == 0; }
};
Bipartition bipartition(const Tree& t);

long long formula_value(int t1, int t2);  // max{t1+2t2, 2t1} - 1

// Free trees on n vertices, one per isomorphism class, in level-sequence order.
void enumerate_trees(int n, const std::function<void(const Tree&)>& emit);
std::vector<Tree> enumerate_trees(int n);

std::string canonical_code(const Tree& t);

struct Padded {
    Tree tree;          // input vertices keep their ids; new leaves are n, n+1, ...
    int added = 0;
    std::vector<int> hosts;  // hosts[i] is the V1 leaf that received new vertex n+i
};
Padded pad_to_balanced(const Tree& t, double c);

nlohmann::json tree_to_json(const Tree& t);
Tree tree_from_json(const nlohmann::json& j);
std::vector<int> parent_array(const Tree& t, int root = 0);
std::string tree_to_dot(const Tree& t);

// Named families used by tests and tools.
Tree path_tree(int n);
Tree star_tree(int leaves);
Tree double_star(int t1, int t2);  // centres with t1-1 and t2-1 pendant leaves
Tree spider(const std::vector<int>& legs);
Tree caterpillar(int spine, const std::vector<int>& leaves_per_spine);
Tree complete_binary_tree(int n);
Tree relabel(const Tree& t, const std::vector<int>& perm);

}  // namespace rt
