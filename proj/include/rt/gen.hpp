#pragma once

#include "rt/rng.hpp"
#include "rt/tree.hpp"

namespace rt {

// Uniform labelled tree via a random Pruefer sequence.
Tree random_prufer_tree(int n, Rng& rng);

// Random recursive tree: vertex i joins a uniform earlier vertex of degree < maxdeg.
Tree random_tree(int n, int maxdeg, Rng& rng);

// Random tree with bipartition classes of exactly t1 and t2 vertices (t1 >= t2 >= 1,
// t1 <= t2 * (maxdeg - 1) + 1), built by attaching each new vertex to the opposite class.
Tree random_tree_classes(int t1, int t2, int maxdeg, Rng& rng);

// Inserts `pairs` pairs of vertices on uniformly chosen edges. Class sizes each grow by `pairs`.
Tree subdivide_pairs(const Tree& t, int pairs, Rng& rng);

// Shapes for the embedding corpus. Both return trees with classes exactly (t1, t2).
Tree path_rich_tree(int t1, int t2, int maxdeg, Rng& rng);
Tree leaf_rich_tree(int t1, int t2, int maxdeg, Rng& rng);

// Uniform random relabelling.
Tree shuffle_labels(const Tree& t, Rng& rng);

}  // namespace rt
