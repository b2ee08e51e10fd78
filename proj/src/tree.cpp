#include "rt/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "rt/errors.hpp"

namespace rt {

Tree Tree::from_edges(int n, const std::vector<Edge>& edges) {
    if (n < 1) throw InputError("tree needs at least one vertex");
    if ((int)edges.size() != n - 1)
        throw InputError("tree on " + std::to_string(n) + " vertices needs " + std::to_string(n - 1) +
                         " edges, got " + std::to_string(edges.size()));
    Tree t;
    t.n = n;
    t.adj.assign(n, {});
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) throw InputError("edge endpoint out of range");
        if (u == v) throw InputError("self-loop");
        t.adj[u].push_back(v);
        t.adj[v].push_back(u);
    }
    for (auto& a : t.adj) std::sort(a.begin(), a.end());
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : t.adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
    }
    if (reached != n) throw InputError("edges do not form a connected graph");
    return t;
}

Tree Tree::from_parent_array(const std::vector<int>& parent) {
    std::vector<Edge> e;
    for (size_t i = 0; i < parent.size(); ++i) e.push_back({parent[i], int(i) + 1});
    return from_edges(int(parent.size()) + 1, e);
}

int Tree::max_degree() const {
    int d = 0;
    for (auto& a : adj) d = std::max(d, int(a.size()));
    return d;
}

std::vector<Edge> Tree::edges() const {
    std::vector<Edge> e;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u])
            if (u < v) e.push_back({u, v});
    std::sort(e.begin(), e.end());
    return e;
}

std::vector<int> Tree::leaves() const {
    std::vector<int> l;
    for (int v = 0; v < n; ++v)
        if (is_leaf(v)) l.push_back(v);
    return l;
}

Rooted root_within(const Tree& t, int r, const std::vector<char>& inside) {
    Rooted R;
    R.root = r;
    R.parent.assign(t.n, -1);
    R.depth.assign(t.n, -1);
    R.children.assign(t.n, {});
    R.subtree_size.assign(t.n, 0);
    R.order.push_back(r);
    R.depth[r] = 0;
    for (size_t i = 0; i < R.order.size(); ++i) {
        int v = R.order[i];
        for (int w : t.adj[v]) {
            if (w == R.parent[v] || !inside[w]) continue;
            R.parent[w] = v;
            R.depth[w] = R.depth[v] + 1;
            R.children[v].push_back(w);
            R.order.push_back(w);
        }
    }
    for (size_t i = R.order.size(); i-- > 0;) {
        int v = R.order[i];
        R.subtree_size[v] += 1;
        if (R.parent[v] >= 0) R.subtree_size[R.parent[v]] += R.subtree_size[v];
    }
    return R;
}

Rooted root_at(const Tree& t, int r) { return root_within(t, r, std::vector<char>(t.n, 1)); }

Bipartition bipartition(const Tree& t) {
    Bipartition b;
    Rooted R = root_at(t, 0);
    b.side.assign(t.n, 0);
    int c0 = 0;
    for (int v = 0; v < t.n; ++v) {
        b.side[v] = R.depth[v] & 1;
        c0 += b.side[v] == 0;
    }
    // Vertex 0 has parity 0, so ties already favour the class holding the smallest id.
    if (t.n - c0 > c0)
        for (int& s : b.side) s ^= 1;
    for (int v = 0; v < t.n; ++v) (b.side[v] == 0 ? b.v1 : b.v2).push_back(v);
    b.t1 = int(b.v1.size());
    b.t2 = int(b.v2.size());
    return b;
}

long long formula_value(int t1, int t2) {
    return std::max<long long>(t1 + 2LL * t2, 2LL * t1) - 1;
}

namespace {

using Layout = std::vector<int>;

bool next_rooted(Layout& pred, int p = -1) {
    if (p < 0) {
        p = int(pred.size()) - 1;
        while (pred[p] == 1) --p;
    }
    if (p == 0) return false;
    int q = p - 1;
    while (pred[q] != pred[p] - 1) --q;
    for (size_t i = p; i < pred.size(); ++i) pred[i] = pred[i - p + q];
    return true;
}

void split_layout(const Layout& layout, Layout& left, Layout& rest) {
    bool one = false;
    size_t m = layout.size();
    for (size_t i = 0; i < layout.size(); ++i)
        if (layout[i] == 1) {
            if (one) {
                m = i;
                break;
            }
            one = true;
        }
    left.clear();
    rest.assign(1, 0);
    for (size_t i = 1; i < m; ++i) left.push_back(layout[i] - 1);
    for (size_t i = m; i < layout.size(); ++i) rest.push_back(layout[i]);
}

// Advances to the next level sequence that is the canonical form of a free tree.
void next_free(Layout& cand) {
    Layout left, rest;
    split_layout(cand, left, rest);
    int lh = *std::max_element(left.begin(), left.end());
    int rh = *std::max_element(rest.begin(), rest.end());
    bool valid = rh >= lh;
    if (valid && rh == lh) {
        if (left.size() > rest.size()) valid = false;
        else if (left.size() == rest.size() && left > rest) valid = false;
    }
    if (valid) return;
    int p = int(left.size());
    Layout nc = cand;
    next_rooted(nc, p);
    if (cand[p] > 2) {
        Layout nl, nr;
        split_layout(nc, nl, nr);
        int h = *std::max_element(nl.begin(), nl.end());
        for (int i = 0; i <= h; ++i) nc[nc.size() - (h + 1) + i] = i + 1;
    }
    cand = nc;
}

Tree layout_to_tree(const Layout& layout) {
    std::vector<Edge> e;
    std::vector<int> stack;
    for (int i = 0; i < (int)layout.size(); ++i) {
        if (!stack.empty()) {
            while (layout[stack.back()] >= layout[i]) stack.pop_back();
            e.push_back({stack.back(), i});
        }
        stack.push_back(i);
    }
    return Tree::from_edges(int(layout.size()), e);
}

}  // namespace

void enumerate_trees(int n, const std::function<void(const Tree&)>& emit) {
    if (n < 1 || n > 24) throw InputError("enumerate_trees supports 1 <= n <= 24");
    if (n == 1) {
        emit(Tree::from_edges(1, {}));
        return;
    }
    Layout layout;
    for (int i = 0; i <= n / 2; ++i) layout.push_back(i);
    for (int i = 1; i < (n + 1) / 2; ++i) layout.push_back(i);
    while (true) {
        next_free(layout);
        emit(layout_to_tree(layout));
        if (!next_rooted(layout)) break;
    }
}

std::vector<Tree> enumerate_trees(int n) {
    std::vector<Tree> out;
    enumerate_trees(n, [&](const Tree& t) { out.push_back(t); });
    return out;
}

namespace {

std::vector<int> centers(const Tree& t) {
    if (t.n <= 2) {
        std::vector<int> c(t.n);
        std::iota(c.begin(), c.end(), 0);
        return c;
    }
    std::vector<int> deg(t.n);
    std::vector<int> layer;
    for (int v = 0; v < t.n; ++v) {
        deg[v] = t.degree(v);
        if (deg[v] <= 1) layer.push_back(v);
    }
    int left = t.n;
    while (left > 2) {
        left -= int(layer.size());
        std::vector<int> nxt;
        for (int v : layer)
            for (int w : t.adj[v])
                if (--deg[w] == 1) nxt.push_back(w);
        layer = nxt;
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

std::string ahu(const Tree& t, int r) {
    Rooted R = root_at(t, r);
    std::vector<std::string> code(t.n);
    for (size_t i = R.order.size(); i-- > 0;) {
        int v = R.order[i];
        std::vector<std::string*> kids;
        for (int c : R.children[v]) kids.push_back(&code[c]);
        std::sort(kids.begin(), kids.end(), [](auto* a, auto* b) { return *a < *b; });
        std::string s = "(";
        for (auto* k : kids) {
            s += *k;
            k->clear();
            k->shrink_to_fit();
        }
        s += ")";
        code[v] = std::move(s);
    }
    return code[r];
}

}  // namespace

std::string canonical_code(const Tree& t) {
    std::string best;
    for (int c : centers(t)) {
        std::string s = ahu(t, c);
        if (best.empty() || s < best) best = s;
    }
    return best;
}

Padded pad_to_balanced(const Tree& t, double c) {
    Bipartition b = bipartition(t);
    if (b.t1 < 2 * b.t2 + 2)
        throw GateError("pad_to_balanced", "needs t1 >= 2 t2 + 2, got t1=" + std::to_string(b.t1) +
                                               " t2=" + std::to_string(b.t2));
    if (!(c > 0 && c < 1)) throw InputError("pad_to_balanced: c must lie in (0,1)");
    std::vector<int> v1_leaves;
    for (int v : b.v1)
        if (t.is_leaf(v)) v1_leaves.push_back(v);
    int need = (int)std::ceil(2.0 / c - 1e-12);
    if ((int)v1_leaves.size() < need)
        throw GateError("pad_to_balanced", "needs at least 2/c = " + std::to_string(need) +
                                               " leaves in V1, found " + std::to_string(v1_leaves.size()));
    int add = (b.t1 - 2 * b.t2) / 2;
    Padded out;
    out.added = add;
    std::vector<Edge> e = t.edges();
    for (int i = 0; i < add; ++i) {
        int host = v1_leaves[i % need];
        out.hosts.push_back(host);
        e.push_back({host, t.n + i});
    }
    out.tree = Tree::from_edges(t.n + add, e);
    int cap = (int)std::ceil(c * out.tree.n - 1e-12);
    for (int v = 0; v < t.n; ++v)
        audit(out.tree.degree(v) - t.degree(v) <= cap, "pad_to_balanced: fan-in cap exceeded");
    Bipartition nb = bipartition(out.tree);
    audit(nb.t1 == b.t1 && nb.t2 == b.t1 / 2, "pad_to_balanced: class sizes");
    return out;
}

nlohmann::json tree_to_json(const Tree& t) {
    nlohmann::json e = nlohmann::json::array();
    for (auto [u, v] : t.edges()) e.push_back({u, v});
    return {{"n", t.n}, {"edges", e}};
}

Tree tree_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw InputError("tree JSON needs fields n and edges");
    std::vector<Edge> e;
    for (auto& x : j.at("edges")) {
        if (!x.is_array() || x.size() != 2) throw InputError("edge must be a pair");
        e.push_back({x[0].get<int>(), x[1].get<int>()});
    }
    return Tree::from_edges(j.at("n").get<int>(), e);
}

std::vector<int> parent_array(const Tree& t, int root) {
    Rooted R = root_at(t, root);
    std::vector<int> p;
    for (int v = 0; v < t.n; ++v)
        if (v != root) p.push_back(R.parent[v]);
    return p;
}

std::string tree_to_dot(const Tree& t) {
    Bipartition b = bipartition(t);
    std::ostringstream os;
    os << "graph T {\n";
    for (int v = 0; v < t.n; ++v)
        os << "  " << v << " [shape=" << (b.in_v1(v) ? "circle" : "box") << "];\n";
    for (auto [u, v] : t.edges()) os << "  " << u << " -- " << v << ";\n";
    os << "}\n";
    return os.str();
}

Tree path_tree(int n) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Tree::from_edges(n, e);
}

Tree star_tree(int leaves) {
    std::vector<Edge> e;
    for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
    return Tree::from_edges(leaves + 1, e);
}

Tree double_star(int t1, int t2) {
    std::vector<Edge> e{{0, 1}};
    int next = 2;
    for (int i = 0; i < t1 - 1; ++i) e.push_back({0, next++});
    for (int i = 0; i < t2 - 1; ++i) e.push_back({1, next++});
    return Tree::from_edges(next, e);
}

Tree spider(const std::vector<int>& legs) {
    std::vector<Edge> e;
    int next = 1;
    for (int len : legs) {
        int prev = 0;
        for (int i = 0; i < len; ++i) {
            e.push_back({prev, next});
            prev = next++;
        }
    }
    return Tree::from_edges(next, e);
}

Tree caterpillar(int spine, const std::vector<int>& leaves_per_spine) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < spine; ++i) e.push_back({i, i + 1});
    int next = spine;
    for (int i = 0; i < spine && i < (int)leaves_per_spine.size(); ++i)
        for (int j = 0; j < leaves_per_spine[i]; ++j) e.push_back({i, next++});
    return Tree::from_edges(next, e);
}

Tree complete_binary_tree(int n) {
    std::vector<Edge> e;
    for (int i = 1; i < n; ++i) e.push_back({(i - 1) / 2, i});
    return Tree::from_edges(n, e);
}

Tree relabel(const Tree& t, const std::vector<int>& perm) {
    std::vector<Edge> e;
    for (auto [u, v] : t.edges()) e.push_back({perm[u], perm[v]});
    return Tree::from_edges(t.n, e);
}

}  // namespace rt
