#include "rt/gen.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "rt/errors.hpp"

namespace rt {

Tree random_prufer_tree(int n, Rng& rng) {
    if (n <= 2) return path_tree(n);
    std::vector<int> seq(n - 2), deg(n, 1);
    for (int& x : seq) {
        x = int(rng.below(n));
        ++deg[x];
    }
    std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
    for (int v = 0; v < n; ++v)
        if (deg[v] == 1) leaves.push(v);
    std::vector<Edge> e;
    for (int x : seq) {
        int l = leaves.top();
        leaves.pop();
        e.push_back({l, x});
        if (--deg[x] == 1) leaves.push(x);
    }
    int a = leaves.top();
    leaves.pop();
    e.push_back({a, leaves.top()});
    return Tree::from_edges(n, e);
}

Tree random_tree(int n, int maxdeg, Rng& rng) {
    if (maxdeg < 2 && n > 2) throw InputError("random_tree: maxdeg must be at least 2");
    std::vector<int> deg(n, 0), open{0};
    std::vector<Edge> e;
    for (int i = 1; i < n; ++i) {
        size_t k = rng.below(open.size());
        int p = open[k];
        e.push_back({p, i});
        if (++deg[p] >= maxdeg) {
            open[k] = open.back();
            open.pop_back();
        }
        ++deg[i];
        if (deg[i] < maxdeg) open.push_back(i);
    }
    return Tree::from_edges(n, e);
}

Tree random_tree_classes(int t1, int t2, int maxdeg, Rng& rng) {
    if (t2 < 1 || t1 < t2) throw InputError("random_tree_classes: need t1 >= t2 >= 1");
    if (t1 > 1LL * t2 * (maxdeg - 1) + 1) throw InputError("random_tree_classes: degree bound too small");
    // Class 0 vertices attach to class 1 and vice versa; keep the order feasible by
    // holding back enough class-1 vertices to absorb the remaining class-0 ones.
    std::vector<int> deg;
    std::vector<int> open[2];
    std::vector<Edge> e;
    auto add = [&](int cls) {
        int v = int(deg.size());
        deg.push_back(0);
        if (v > 0) {
            auto& o = open[1 - cls];
            size_t k = rng.below(o.size());
            int p = o[k];
            e.push_back({p, v});
            ++deg[p];
            ++deg[v];
            if (deg[p] >= maxdeg) {
                o[k] = o.back();
                o.pop_back();
            }
        }
        open[cls].push_back(v);
    };
    add(0);
    add(1);
    int left[2] = {t1 - 1, t2 - 1};
    while (left[0] + left[1] > 0) {
        long long cap1 = 0;
        for (int v : open[1]) cap1 += maxdeg - deg[v];
        int cls;
        if (left[0] == 0) cls = 1;
        else if (left[1] == 0) cls = 0;
        else if (cap1 <= 1) cls = 1;
        else if (open[0].empty()) cls = 0;
        else cls = rng.below(left[0] + left[1]) < (uint64_t)left[0] ? 0 : 1;
        if (open[1 - cls].empty()) cls = 1 - cls;
        add(cls);
        --left[cls];
    }
    return Tree::from_edges(int(deg.size()), e);
}

Tree subdivide_pairs(const Tree& t, int pairs, Rng& rng) {
    std::vector<Edge> e = t.edges();
    int next = t.n;
    for (int i = 0; i < pairs; ++i) {
        size_t k = rng.below(e.size());
        auto [u, v] = e[k];
        int a = next++, b = next++;
        e[k] = {u, a};
        e.push_back({a, b});
        e.push_back({b, v});
    }
    return Tree::from_edges(next, e);
}

Tree path_rich_tree(int t1, int t2, int maxdeg, Rng& rng) {
    int base2 = std::max({2, t2 / 10, (t1 - t2 - 1) / std::max(1, maxdeg - 2) + 2});
    base2 = std::min(base2, t2);
    int pairs = t2 - base2;
    Tree base = random_tree_classes(t1 - pairs, base2, maxdeg, rng);
    return shuffle_labels(subdivide_pairs(base, pairs, rng), rng);
}

Tree leaf_rich_tree(int t1, int t2, int maxdeg, Rng& rng) {
    return shuffle_labels(random_tree_classes(t1, t2, maxdeg, rng), rng);
}

Tree shuffle_labels(const Tree& t, Rng& rng) {
    std::vector<int> p(t.n);
    std::iota(p.begin(), p.end(), 0);
    rng.shuffle(p);
    return relabel(t, p);
}

}  // namespace rt
