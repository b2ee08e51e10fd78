#pragma once

#include <string>
#include <vector>

#include "rt/tree.hpp"

namespace rt {

std::vector<int> leaves_in_v1(const Tree& t, const Bipartition& b);

// Vertex-disjoint bare paths with k edges each, as vertex sequences.
std::vector<std::vector<int>> bare_paths(const Tree& t, int k);

std::vector<int> small_component_cutset(const Tree& t, double xi);

int half_component_vertex(const Tree& t);

// Two subtrees covering every edge once and sharing exactly vertex v.
struct TreeSplit {
    std::vector<int> t1, t2;  // sorted vertex sets, both contain v
    int v = -1;
};

TreeSplit weighted_split(const Tree& t, const std::vector<int>& q);
TreeSplit balanced_split(const Tree& t);

// Throws AuditError unless s is a decomposition of t into two subtrees.
void check_split(const Tree& t, const TreeSplit& s);

// Labels along the path Y3-X2-Y1-X0-Y0-X1-Y2-X3.
enum class SLabel { Y3 = 0, X2, Y1, X0, Y0, X1, Y2, X3 };
const char* slabel_name(SLabel l);
int slabel_pos(SLabel l);

struct SHomomorphism {
    std::vector<SLabel> phi;
    double xi = 0;
    std::vector<int> z, a, b, c;
};
SHomomorphism s_homomorphism(const Tree& t, double xi, double c);

struct TwoVertexSplit {
    std::vector<int> a, b, boundary;
    int branch = 0;  // 1: one boundary vertex, 2: two
};
TwoVertexSplit two_vertex_split(const Tree& t, double eps);

struct SurplusSplit {
    TreeSplit split;
    int surplus = 0;  // |T1 ∩ V1| - |T1 ∩ V2|
};
SurplusSplit bipartite_surplus_split(const Tree& t, const Bipartition& b, double mu);

struct V2RichSubtree {
    std::vector<int> vertices;             // sorted
    std::vector<std::vector<int>> pieces;  // T_1..T_l in attachment order
    int index = -1;                        // chosen piece
    int attach = -1;                       // vertex shared with earlier pieces, -1 for the first
};
V2RichSubtree v2_rich_subtree(const Tree& t, const Bipartition& b, int m);

struct SparseCut {
    std::vector<int> a, b, boundary;
    double eps = 0;
    int d = 0;
    std::vector<std::string> trace;
};
SparseCut sparse_cut(const Tree& t, double eps, double c);

// Throws AuditError unless the cut meets every clause of an (eps, d)-sparse cut.
void check_sparse_cut(const Tree& t, const SparseCut& s);

// Boundary vertices adjacent to leaves of t that lie in A.
int boundary_leaf_neighbours(const Tree& t, const SparseCut& s);

struct SparseCutLeaves {
    SparseCut cut;
    int mode = 0;               // 1 or 2
    std::vector<int> leaves;    // L (mode 1) or L' (mode 2)
    std::vector<int> v1prime;   // mode 2 only
};
SparseCutLeaves sparse_cut_with_leaves(const Tree& t, const Bipartition& b, double eps, double mu,
                                       double alpha, double c, double gamma);

}  // namespace rt
