#include "rt/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rt/errors.hpp"

namespace rt {

namespace {

std::string num(double x) {
    std::ostringstream s;
    s << x;
    return s.str();
}

std::vector<char> mask_of(int n, const std::vector<int>& vs) {
    std::vector<char> m(n, 0);
    for (int v : vs) m[v] = 1;
    return m;
}

std::vector<int> from_mask(const std::vector<char>& m) {
    std::vector<int> vs;
    for (int v = 0; v < int(m.size()); ++v)
        if (m[v]) vs.push_back(v);
    return vs;
}

// Flood fill from s inside `inside`, marking `seen`.
std::vector<int> flood(const Tree& t, int s, const std::vector<char>& inside, std::vector<char>& seen) {
    std::vector<int> out{s}, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : t.adj[x])
            if (inside[y] && !seen[y]) {
                seen[y] = 1;
                out.push_back(y);
                stack.push_back(y);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> reach(const Tree& t, int s, const std::vector<char>& inside, int block) {
    std::vector<char> seen(t.n, 0);
    if (block >= 0) seen[block] = 1;
    return flood(t, s, inside, seen);
}

// Components of T[inside].
std::vector<std::vector<int>> components(const Tree& t, const std::vector<char>& inside) {
    std::vector<char> seen(t.n, 0);
    std::vector<std::vector<int>> out;
    for (int v = 0; v < t.n; ++v)
        if (inside[v] && !seen[v]) out.push_back(flood(t, v, inside, seen));
    return out;
}

// Components of T[inside] - v.
std::vector<std::vector<int>> components_around(const Tree& t, int v, const std::vector<char>& inside) {
    std::vector<char> seen(t.n, 0);
    seen[v] = 1;
    std::vector<std::vector<int>> comps;
    for (int w : t.adj[v])
        if (inside[w]) comps.push_back(flood(t, w, inside, seen));
    return comps;
}

bool connected(const Tree& t, const std::vector<int>& vs) {
    if (vs.empty()) return true;
    auto m = mask_of(t.n, vs);
    return reach(t, vs[0], m, -1).size() == vs.size();
}

// Induced subtree on a connected vertex set, with ids mapped back to the host.
struct Induced {
    Tree tree;
    std::vector<int> global;
};

Induced induced(const Tree& t, const std::vector<int>& vs) {
    std::vector<int> local(t.n, -1);
    for (int i = 0; i < int(vs.size()); ++i) local[vs[i]] = i;
    std::vector<Edge> e;
    for (int v : vs)
        for (int w : t.adj[v])
            if (local[w] > local[v]) e.push_back({local[v], local[w]});
    return {Tree::from_edges(int(vs.size()), e), vs};
}

std::vector<int> to_global(const Induced& s, const std::vector<int>& vs) {
    std::vector<int> out;
    for (int v : vs) out.push_back(s.global[v]);
    std::sort(out.begin(), out.end());
    return out;
}

TreeSplit lift(const Induced& s, const TreeSplit& sp) {
    return {to_global(s, sp.t1), to_global(s, sp.t2), s.global[sp.v]};
}

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Vertex v whose removal leaves components of Q-weight at most |Q|/2.
int weighted_centroid(const Tree& t, const std::vector<char>& inq) {
    Rooted r = root_at(t, 0);
    std::vector<int> w(t.n, 0);
    for (int i = t.n - 1; i >= 0; --i) {
        int v = r.order[i];
        w[v] += inq[v];
        if (r.parent[v] >= 0) w[r.parent[v]] += w[v];
    }
    int total = w[0], v = 0;
    while (true) {
        int next = -1;
        for (int c : r.children[v])
            if (2 * w[c] > total) next = c;
        if (next < 0) return v;
        v = next;
    }
}

std::vector<int> boundary_of(const Tree& t, const std::vector<int>& a, const std::vector<char>& inb) {
    std::vector<int> out;
    for (int v : a)
        for (int w : t.adj[v])
            if (inb[w]) {
                out.push_back(v);
                break;
            }
    return out;
}

bool independent(const Tree& t, const std::vector<int>& vs) {
    auto m = mask_of(t.n, vs);
    for (int v : vs)
        for (int w : t.adj[v])
            if (m[w]) return false;
    return true;
}

}  // namespace

std::vector<int> leaves_in_v1(const Tree& t, const Bipartition& b) {
    std::vector<int> out;
    for (int v : t.leaves())
        if (b.in_v1(v)) out.push_back(v);
    return out;
}

std::vector<std::vector<int>> bare_paths(const Tree& t, int k) {
    if (k < 1) throw InputError("bare path length must be at least 1");
    std::vector<std::vector<int>> chains;
    for (int u = 0; u < t.n; ++u) {
        if (t.degree(u) == 2) continue;
        for (int w : t.adj[u]) {
            std::vector<int> chain{u};
            int prev = u, cur = w;
            while (t.degree(cur) == 2) {
                chain.push_back(cur);
                int nxt = t.adj[cur][0] == prev ? t.adj[cur][1] : t.adj[cur][0];
                prev = cur;
                cur = nxt;
            }
            chain.push_back(cur);
            if (u < cur) chains.push_back(chain);
        }
    }
    std::vector<char> used(t.n, 0);
    std::vector<std::vector<int>> paths;
    for (auto& ch : chains) {
        int len = int(ch.size());
        for (int i = 0; i + k < len;) {
            bool free = true;
            for (int j = i; j <= i + k && free; ++j) free = !used[ch[j]];
            if (!free) {
                ++i;
                continue;
            }
            paths.emplace_back(ch.begin() + i, ch.begin() + i + k + 1);
            for (int j = i; j <= i + k; ++j) used[ch[j]] = 1;
            i += k + 1;
        }
    }
    for (auto& p : paths)
        for (size_t j = 1; j + 1 < p.size(); ++j) audit(t.degree(p[j]) == 2, "bare path internal degree");
    return paths;
}

std::vector<int> small_component_cutset(const Tree& t, double xi) {
    if (!(xi > 0) || xi > 1) throw InputError("xi must lie in (0, 1]");
    if (xi >= 1) return {};
    if (t.n < 4.0 / (xi * xi))
        throw GateError("small_component_cutset", "n=" + std::to_string(t.n) + " < 4/xi^2=" + num(4 / (xi * xi)));
    double cap = xi * t.n;
    Rooted r = root_at(t, 0);
    std::vector<int> res(t.n, 1), x;
    for (int i = t.n - 1; i >= 0; --i) {
        int v = r.order[i];
        if (res[v] > cap) {
            x.push_back(v);
            res[v] = 0;
        }
        if (r.parent[v] >= 0) res[r.parent[v]] += res[v];
    }
    std::sort(x.begin(), x.end());
    audit(x.size() <= 2 / xi, "cutset size");
    std::vector<char> inside(t.n, 1);
    for (int v : x) inside[v] = 0;
    for (auto& comp : components(t, inside)) audit(comp.size() <= cap, "cutset component size");
    return x;
}

int half_component_vertex(const Tree& t) {
    int v = weighted_centroid(t, std::vector<char>(t.n, 1));
    for (auto& c : components_around(t, v, std::vector<char>(t.n, 1)))
        audit(2 * c.size() <= size_t(t.n), "half component bound");
    return v;
}

void check_split(const Tree& t, const TreeSplit& s) {
    std::vector<int> both;
    std::set_intersection(s.t1.begin(), s.t1.end(), s.t2.begin(), s.t2.end(), std::back_inserter(both));
    audit(both == std::vector<int>{s.v}, "split sides share exactly v");
    audit(int(s.t1.size() + s.t2.size()) == t.n + 1, "split covers every vertex");
    audit(connected(t, s.t1) && connected(t, s.t2), "split sides are subtrees");
    auto m1 = mask_of(t.n, s.t1), m2 = mask_of(t.n, s.t2);
    for (auto [u, w] : t.edges()) audit((m1[u] && m1[w]) || (m2[u] && m2[w]), "split loses an edge");
}

TreeSplit weighted_split(const Tree& t, const std::vector<int>& q) {
    std::vector<char> inq(t.n, 0);
    for (int v : q) {
        if (v < 0 || v >= t.n) throw InputError("Q contains a vertex outside the tree");
        inq[v] = 1;
    }
    int total = 0;
    for (char c : inq) total += c;
    int v = weighted_centroid(t, inq);
    auto comps = components_around(t, v, std::vector<char>(t.n, 1));
    auto weight = [&](const std::vector<int>& c) {
        int w = 0;
        for (int x : c) w += inq[x];
        return w;
    };
    std::stable_sort(comps.begin(), comps.end(), [&](auto& a, auto& b) { return weight(a) > weight(b); });
    std::vector<char> side1(t.n, 0);
    int w1 = inq[v];
    size_t i = 0;
    while (i < comps.size() && (i == 0 || 3 * w1 < total)) {
        for (int x : comps[i]) side1[x] = 1;
        w1 += weight(comps[i]);
        ++i;
    }
    TreeSplit s;
    s.v = v;
    for (int x = 0; x < t.n; ++x) {
        if (x == v || side1[x]) s.t1.push_back(x);
        if (x == v || !side1[x]) s.t2.push_back(x);
    }
    check_split(t, s);
    int a = 0, b = 0;
    for (int x : s.t1) a += inq[x];
    for (int x : s.t2) b += inq[x];
    audit(3 * a >= total && 3 * b >= total, "weighted split shares");
    return s;
}

TreeSplit balanced_split(const Tree& t) {
    std::vector<int> all(t.n);
    std::iota(all.begin(), all.end(), 0);
    TreeSplit s = weighted_split(t, all);
    if (s.t1.size() > s.t2.size()) std::swap(s.t1, s.t2);
    int n = t.n;
    if (n % 3 == 0 && int(s.t1.size()) == n / 3 && int(s.t2.size()) == 2 * n / 3 + 1) {
        auto in2 = mask_of(n, s.t2);
        in2[s.v] = 1;
        auto comps = components_around(t, s.v, in2);
        if (comps.size() == 1) {
            int vp = -1;
            for (int w : t.adj[s.v])
                if (in2[w]) vp = w;
            s.t1 = set_union(s.t1, {vp});
            s.t2 = set_minus(s.t2, {s.v});
            s.v = vp;
        } else {
            auto small = *std::min_element(comps.begin(), comps.end(),
                                           [](auto& a, auto& b) { return a.size() < b.size(); });
            s.t1 = set_union(s.t1, small);
            s.t2 = set_minus(s.t2, small);
        }
        if (s.t1.size() > s.t2.size()) std::swap(s.t1, s.t2);
    }
    check_split(t, s);
    int lo = (n + 2) / 3, hi = (2 * n + 2) / 3;
    audit(lo <= int(s.t1.size()) && s.t1.size() <= s.t2.size() && int(s.t2.size()) <= hi, "balanced split bounds");
    return s;
}

const char* slabel_name(SLabel l) {
    static const char* names[] = {"Y3", "X2", "Y1", "X0", "Y0", "X1", "Y2", "X3"};
    return names[int(l)];
}

int slabel_pos(SLabel l) { return int(l); }

SHomomorphism s_homomorphism(const Tree& t, double xi, double c) {
    if (!(xi > 0)) throw InputError("xi must be positive");
    Bipartition bp = bipartition(t);
    SHomomorphism h;
    h.xi = xi;
    h.phi.assign(t.n, SLabel::X0);
    int n = t.n, delta = t.max_degree();
    if (xi >= 1) {
        for (int v = 0; v < n; ++v) h.phi[v] = bp.in_v1(v) ? SLabel::X0 : SLabel::Y0;
        return h;
    }
    if (delta > c * n) throw GateError("s_homomorphism", "max degree " + std::to_string(delta) + " > c*n=" + num(c * n));
    if (2 * c * n / xi > xi * n / 10)
        throw GateError("s_homomorphism", "2cn/xi=" + num(2 * c * n / xi) + " > xi*n/10=" + num(xi * n / 10));
    if (xi * n / 10 + (4 + 2.0 * delta) / xi > xi * n)
        throw GateError("s_homomorphism", "xi*n/10+(4+2*Delta)/xi=" + num(xi * n / 10 + (4 + 2.0 * delta) / xi) +
                                              " > xi*n=" + num(xi * n));
    h.z = small_component_cutset(t, xi);
    audit(!h.z.empty(), "cutset is non-empty");
    Rooted r = root_at(t, h.z[0]);
    auto inz = mask_of(n, h.z);
    std::vector<char> ina(n, 0), inb(n, 0), inc(n, 0);
    for (int v = 0; v < n; ++v) {
        int p = r.parent[v];
        if (p < 0) continue;
        if (!inz[v] && inz[p]) ina[v] = 1;
        if (inz[v]) inb[p] = 1;
    }
    for (int v = 0; v < n; ++v)
        if (inb[v]) {
            if (r.parent[v] >= 0) inc[r.parent[v]] = 1;
            for (int w : r.children[v]) inc[w] = 1;
        }
    h.a = from_mask(ina);
    h.b = from_mask(inb);
    h.c = from_mask(inc);
    // Component top of each non-Z vertex, found along the BFS order.
    std::vector<int> top(n, -1);
    for (int v : r.order) {
        if (inz[v]) {
            h.phi[v] = bp.in_v1(v) ? SLabel::X0 : SLabel::Y0;
            continue;
        }
        top[v] = ina[v] ? v : top[r.parent[v]];
        bool core = ina[v] || inb[v] || inc[v];
        if (bp.in_v1(top[v])) {
            if (bp.in_v1(v)) h.phi[v] = core ? SLabel::X1 : SLabel::X3;
            else h.phi[v] = inb[v] ? SLabel::Y0 : SLabel::Y2;
        } else {
            if (!bp.in_v1(v)) h.phi[v] = core ? SLabel::Y1 : SLabel::Y3;
            else h.phi[v] = inb[v] ? SLabel::X0 : SLabel::X2;
        }
    }
    for (auto [u, w] : t.edges()) audit(std::abs(slabel_pos(h.phi[u]) - slabel_pos(h.phi[w])) == 1, "phi is a homomorphism");
    std::vector<char> inside(n, 1);
    int core = 0;
    for (int v = 0; v < n; ++v) {
        SLabel l = h.phi[v];
        if (l == SLabel::X0 || l == SLabel::Y0) inside[v] = 0;
        if (l == SLabel::X0 || l == SLabel::Y0 || l == SLabel::X1 || l == SLabel::Y1) ++core;
    }
    audit(core <= xi * n, "core preimage size");
    for (auto& comp : components(t, inside)) audit(comp.size() <= xi * n, "component outside X0/Y0 preimage");
    return h;
}

TwoVertexSplit two_vertex_split(const Tree& t, double eps) {
    int n = t.n;
    if (!(eps > 0) || eps > 0.01) throw GateError("two_vertex_split", "eps=" + num(eps) + " outside (0, 1/100]");
    if (n < 2 / eps) throw GateError("two_vertex_split", "n=" + std::to_string(n) + " < 2/eps=" + num(2 / eps));
    double cap = (2.0 / 3 - eps) * n;
    TreeSplit s = balanced_split(t);
    while (s.t2.size() > cap) {
        auto in2 = mask_of(n, s.t2);
        auto comps = components_around(t, s.v, in2);
        size_t best = s.t2.size();
        TreeSplit next = s;
        if (comps.size() == 1) {
            int vp = comps[0].front();
            for (int w : t.adj[s.v])
                if (in2[w]) vp = w;
            next.t1 = set_union(s.t1, {vp});
            next.t2 = set_minus(s.t2, {s.v});
            next.v = vp;
        } else {
            auto small = *std::min_element(comps.begin(), comps.end(),
                                           [](auto& a, auto& b) { return a.size() < b.size(); });
            if (small.size() > (1.0 / 3 - 2 * eps) * n) break;
            next.t1 = set_union(s.t1, small);
            next.t2 = set_minus(s.t2, small);
        }
        if (std::max(next.t1.size(), next.t2.size()) >= best) break;
        if (next.t1.size() > next.t2.size()) std::swap(next.t1, next.t2);
        s = next;
    }
    auto finish = [&](std::vector<int> a, int branch) {
        TwoVertexSplit out;
        std::vector<char> ina = mask_of(n, a), inb(n, 0);
        for (int v = 0; v < n; ++v) inb[v] = !ina[v];
        out.a = a;
        out.b = from_mask(inb);
        out.boundary = boundary_of(t, out.a, inb);
        out.branch = branch;
        return out;
    };
    auto valid = [&](const TwoVertexSplit& o) {
        return o.a.size() <= cap && o.b.size() <= cap && connected(t, o.a) && o.boundary.size() <= 2 &&
               independent(t, o.boundary);
    };
    if (s.t2.size() <= cap) {
        auto o = finish(s.t2, 1);
        audit(valid(o), "two vertex split, one boundary vertex");
        return o;
    }
    auto in2 = mask_of(n, s.t2);
    auto comps = components_around(t, s.v, in2);
    if (comps.size() != 2)
        throw GateError("two_vertex_split", "centre keeps " + std::to_string(comps.size()) + " components in the larger side");
    std::vector<int> nb;
    for (int w : t.adj[s.v])
        if (in2[w]) nb.push_back(w);
    for (int o = 0; o < 2; ++o) {
        const auto& s1 = comps[o];
        const auto& s2 = comps[1 - o];
        int n1 = std::binary_search(s1.begin(), s1.end(), nb[0]) ? nb[0] : nb[1];
        int n2 = n1 == nb[0] ? nb[1] : nb[0];
        if (!std::binary_search(s2.begin(), s2.end(), n2)) continue;
        std::vector<int> s1p;
        if (s1.size() == 1) {
            s1p = s1;
        } else {
            Induced sub = induced(t, s1);
            TreeSplit inner = lift(sub, balanced_split(sub.tree));
            s1p = std::binary_search(inner.t1.begin(), inner.t1.end(), n1) ? inner.t1 : inner.t2;
        }
        auto a = set_union(set_union(s.t1, s1p), {n2});
        auto out = finish(a, 2);
        if (valid(out)) return out;
    }
    throw GateError("two_vertex_split", "no orientation of the second split meets (2/3-eps)n=" + num(cap));
}

SurplusSplit bipartite_surplus_split(const Tree& t, const Bipartition& b, double mu) {
    int n = t.n;
    if (10LL * b.t1 < 11LL * b.t2)
        throw GateError("bipartite_surplus_split", "t1=" + std::to_string(b.t1) + " < 1.1*t2=" + num(1.1 * b.t2));
    if (n < 1 / mu) throw GateError("bipartite_surplus_split", "n < 1/mu");
    double floor12 = 12 * mu * n;
    if (b.t1 - b.t2 < floor12)
        throw GateError("bipartite_surplus_split", "t1-t2=" + std::to_string(b.t1 - b.t2) + " < 12*mu*n=" + num(floor12));
    Rooted r = root_at(t, 0);
    std::vector<int> sur(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        int v = r.order[i];
        sur[v] += b.in_v1(v) ? 1 : -1;
        if (r.parent[v] >= 0) sur[r.parent[v]] += sur[v];
    }
    int v = 0;
    std::vector<char> dropped(n, 0);  // child subtrees moved to T2
    int cur = sur[0];
    while (true) {
        std::vector<int> kids;
        for (int c : r.children[v])
            if (!dropped[c]) kids.push_back(c);
        if (kids.size() >= 2) {
            int neg = -1, low = -1;
            for (int c : kids) {
                if (sur[c] < 0 && neg < 0) neg = c;
                if (low < 0 || sur[c] < sur[low]) low = c;
            }
            if (neg >= 0) {
                dropped[neg] = 1;
                cur -= sur[neg];
                continue;
            }
            if (cur - sur[low] >= floor12) {
                dropped[low] = 1;
                cur -= sur[low];
                continue;
            }
            break;
        }
        if (kids.size() == 1) {
            int nxt = cur - (b.in_v1(v) ? 1 : -1);
            if (nxt >= floor12) {
                v = kids[0];
                cur = nxt;
                continue;
            }
        }
        break;
    }
    std::vector<char> in1(n, 0);
    std::vector<int> stack{v};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        in1[x] = 1;
        for (int c : r.children[x])
            if (!dropped[c]) stack.push_back(c);
    }
    SurplusSplit out;
    out.split.v = v;
    for (int x = 0; x < n; ++x) {
        if (in1[x]) out.split.t1.push_back(x);
        if (!in1[x] || x == v) out.split.t2.push_back(x);
    }
    out.surplus = cur;
    check_split(t, out.split);
    int check = 0;
    for (int x : out.split.t1) check += b.in_v1(x) ? 1 : -1;
    audit(check == cur, "surplus bookkeeping");
    audit(cur >= 10 * mu * n && cur <= 25 * mu * n, "surplus within [10mu n, 25mu n]");
    return out;
}

V2RichSubtree v2_rich_subtree(const Tree& t, const Bipartition& b, int m) {
    int n = t.n;
    if (m < 1 || 18LL * m > n)
        throw GateError("v2_rich_subtree", "m=" + std::to_string(m) + " outside [1, n/18]");
    if (3LL * b.t2 < b.t1) throw GateError("v2_rich_subtree", "t2 < t1/3");
    std::vector<int> rest(n);
    std::iota(rest.begin(), rest.end(), 0);
    std::vector<std::vector<int>> peeled;
    std::vector<int> peeled_attach;
    while (int(rest.size()) > 18 * m) {
        std::vector<int> x = rest;
        int forbidden = -1;
        while (true) {
            Induced sub = induced(t, x);
            TreeSplit sp = lift(sub, balanced_split(sub.tree));
            std::vector<int>* part = &sp.t1;
            if (forbidden >= 0 && forbidden != sp.v && std::binary_search(sp.t1.begin(), sp.t1.end(), forbidden))
                part = &sp.t2;
            if (int(part->size()) <= 18 * m) {
                peeled.push_back(*part);
                peeled_attach.push_back(sp.v);
                rest = set_minus(rest, set_minus(*part, {sp.v}));
                break;
            }
            x = *part;
            forbidden = sp.v;
        }
    }
    V2RichSubtree out;
    out.pieces.push_back(rest);
    std::vector<int> attach{-1};
    for (int i = int(peeled.size()) - 1; i >= 0; --i) {
        out.pieces.push_back(peeled[i]);
        attach.push_back(peeled_attach[i]);
    }
    int l = int(out.pieces.size());
    for (auto& p : out.pieces) audit(int(p.size()) >= std::min(n, 6 * m) && int(p.size()) <= std::max(18 * m, 6 * m), "piece size");
    std::vector<int> kdeg(l, 0);
    for (int j = 1; j < l; ++j) {
        int parent = -1;
        for (int i = 0; i < j && parent < 0; ++i)
            if (std::binary_search(out.pieces[i].begin(), out.pieces[i].end(), attach[j])) parent = i;
        audit(parent >= 0, "piece attaches to an earlier piece");
        ++kdeg[j];
        ++kdeg[parent];
    }
    int pick = -1;
    for (int i = 0; i < l; ++i) {
        int c2 = 0;
        for (int v : out.pieces[i]) c2 += !b.in_v1(v);
        if (c2 >= m && (pick < 0 || kdeg[i] < kdeg[pick])) pick = i;
    }
    if (pick < 0) throw GateError("v2_rich_subtree", "no piece holds m vertices of V2");
    out.index = pick;
    out.attach = attach[pick];
    const auto& piece = out.pieces[pick];
    auto inp = mask_of(n, piece);
    std::vector<char> keep = inp;
    for (int v : piece) {
        if (v == out.attach) continue;
        for (int w : t.adj[v])
            if (!inp[w] && b.in_v1(w)) keep[w] = 1;
    }
    out.vertices = from_mask(keep);
    int c2 = 0, open = 0;
    for (int v : out.vertices) {
        if (b.in_v1(v)) continue;
        ++c2;
        for (int w : t.adj[v])
            if (!keep[w]) {
                ++open;
                break;
            }
    }
    audit(connected(t, out.vertices), "v2-rich subtree is connected");
    audit(out.vertices.size() <= 10000ULL * m, "v2-rich subtree size");
    audit(c2 >= m, "v2-rich subtree holds m vertices of V2");
    audit(open <= 1, "at most one V2 vertex with outside neighbours");
    return out;
}

namespace {

std::string sparse_cut_problem(const Tree& t, const SparseCut& s) {
    int n = t.n;
    double cap = (2.0 / 3 - s.eps) * n;
    if (s.a.size() + s.b.size() != size_t(n)) return "A and B do not partition V";
    if (!std::includes(s.a.begin(), s.a.end(), s.boundary.begin(), s.boundary.end())) return "boundary outside A";
    if (!connected(t, s.a) || s.a.empty()) return "T[A] is not a tree";
    if (s.a.size() > cap) return "|A|=" + std::to_string(s.a.size()) + " > " + num(cap);
    if (s.b.size() > cap) return "|B|=" + std::to_string(s.b.size()) + " > " + num(cap);
    auto inb = mask_of(n, s.b);
    if (boundary_of(t, s.a, inb) != s.boundary) return "boundary mismatch";
    for (int v : s.boundary) {
        int d = 0;
        for (int w : t.adj[v]) d += inb[w];
        if (d > s.d) return "vertex " + std::to_string(v) + " has " + std::to_string(d) + " neighbours in B";
    }
    if (!independent(t, s.boundary)) return "boundary is not independent";
    if (int(s.boundary.size()) > 2 * t.max_degree()) return "boundary larger than 2*Delta";
    return "";
}

}  // namespace

void check_sparse_cut(const Tree& t, const SparseCut& s) {
    auto p = sparse_cut_problem(t, s);
    audit(p.empty(), "sparse cut: " + p);
}

int boundary_leaf_neighbours(const Tree& t, const SparseCut& s) {
    auto ina = mask_of(t.n, s.a);
    int count = 0;
    for (int v : s.boundary)
        for (int w : t.adj[v])
            if (ina[w] && t.is_leaf(w)) {
                ++count;
                break;
            }
    return count;
}

SparseCut sparse_cut(const Tree& t, double eps, double c) {
    int n = t.n, delta = t.max_degree();
    double sq = std::sqrt(double(n));
    auto gate = [](bool ok, const std::string& what) {
        if (!ok) throw GateError("sparse_cut", what);
    };
    gate(delta <= c * n, "max degree " + std::to_string(delta) + " > c*n=" + num(c * n));
    gate(eps > 0 && eps <= 1.0 / 12, "eps=" + num(eps) + " outside (0, 1/12]");
    SparseCut s;
    s.eps = eps;
    s.d = int(std::ceil(sq));
    std::vector<char> inb(n, 0);
    int v = half_component_vertex(t);
    auto comps = components_around(t, v, std::vector<char>(n, 1));
    std::stable_sort(comps.begin(), comps.end(), [](auto& a, auto& b) { return a.size() > b.size(); });
    int l = int(comps.size());
    std::vector<long long> pre(l + 1, 0);
    for (int i = 0; i < l; ++i) pre[i + 1] = pre[i] + comps[i].size();
    int r = 0;
    while (r < l && pre[r + 1] <= (2.0 / 3 - 2 * eps) * n) ++r;
    audit(r >= 1, "first component fits");
    s.trace.push_back("centre " + std::to_string(v) + ", r=" + std::to_string(r));
    if (comps[r - 1].size() <= sq) {
        s.trace.push_back("small-tail");
        gate(delta + 1 <= eps * n / 2, "small-tail needs Delta+1 <= eps*n/2=" + num(eps * n / 2));
        gate(eps * n >= 2, "small-tail needs eps*n >= 2");
        gate(sq <= (1.0 / 3 - 2.5 * eps) * n, "small-tail needs sqrt(n) <= (1/3-5eps/2)n");
        double target = (1.0 / 3 + 1.5 * eps) * n;
        int rp = -1;
        for (int i = l - 1; i >= r && rp < 0; --i)
            if (pre[l] - pre[i] >= target) rp = i;
        audit(rp >= 0, "small-tail suffix exists");
        for (int i = rp; i < l; ++i)
            for (int x : comps[i]) inb[x] = 1;
        for (int w : t.adj[v]) inb[w] = 0;
    } else if (pre[r] >= (1.0 / 3 + eps) * n) {
        s.trace.push_back("large-head");
        for (int i = 0; i < r; ++i)
            for (int x : comps[i]) inb[x] = 1;
    } else {
        s.trace.push_back("two-giants");
        gate(31 * eps <= 1.0 / 3 - 2.0 / n, "two-giants needs 31eps <= 1/3-2/n");
        gate(sq <= (1.0 / 3 - 7 * eps) * n, "two-giants needs sqrt(n) <= (1/3-7eps)n");
        gate(delta <= eps * n, "two-giants needs Delta <= eps*n");
        audit(r == 1 && l >= 2, "two giant components");
        double th = (1.0 / 3 - 10 * eps) * n;
        std::vector<int> vprime(2);
        std::vector<std::vector<std::vector<int>>> kids(2);
        for (int j = 0; j < 2; ++j) {
            int root = -1;
            for (int w : t.adj[v])
                if (std::binary_search(comps[j].begin(), comps[j].end(), w)) root = w;
            Rooted rr = root_within(t, root, mask_of(n, comps[j]));
            int best = root;
            for (int x : comps[j])
                if (rr.subtree_size[x] >= th &&
                    (rr.depth[x] > rr.depth[best] || (rr.depth[x] == rr.depth[best] && x < best)))
                    best = x;
            vprime[j] = best;
            for (int ch : rr.children[best]) {
                std::vector<int> sub, st{ch};
                while (!st.empty()) {
                    int y = st.back();
                    st.pop_back();
                    sub.push_back(y);
                    for (int z : rr.children[y]) st.push_back(z);
                }
                std::sort(sub.begin(), sub.end());
                kids[j].push_back(sub);
            }
        }
        int chosen = -1;
        for (int j = 0; j < 2 && chosen < 0; ++j) {
            long long small = 0;
            for (auto& k : kids[j])
                if (k.size() < sq) small += k.size();
            if (small >= 5 * eps * n) chosen = j;
        }
        if (chosen >= 0) {
            s.trace.push_back("small-children of giant " + std::to_string(chosen + 1));
            for (int x : comps[1 - chosen]) inb[x] = 1;
            long long got = 0;
            for (auto& k : kids[chosen]) {
                if (k.size() >= sq || got >= 5 * eps * n) continue;
                for (int x : k) inb[x] = 1;
                got += k.size();
            }
            for (int w : t.adj[vprime[chosen]]) inb[w] = 0;
        } else {
            s.trace.push_back("large-children");
            std::vector<std::vector<int>> large;
            for (int j = 0; j < 2; ++j)
                for (auto& k : kids[j])
                    if (k.size() >= sq) large.push_back(k);
            std::stable_sort(large.begin(), large.end(), [](auto& a, auto& b) { return a.size() > b.size(); });
            long long got = 0;
            for (auto& k : large) {
                if (got >= (1.0 / 3 + eps) * n) break;
                for (int x : k) inb[x] = 1;
                got += k.size();
            }
        }
    }
    for (int x = 0; x < n; ++x) (inb[x] ? s.b : s.a).push_back(x);
    s.boundary = boundary_of(t, s.a, inb);
    check_sparse_cut(t, s);
    audit(boundary_leaf_neighbours(t, s) <= 2, "at most two boundary vertices see leaves in A");
    return s;
}

SparseCutLeaves sparse_cut_with_leaves(const Tree& t, const Bipartition& b, double eps, double mu, double alpha,
                                       double c, double gamma) {
    int n = t.n;
    if (b.t1 < (2 - mu) * b.t2)
        throw GateError("sparse_cut_with_leaves", "t1=" + std::to_string(b.t1) + " < (2-mu)t2=" + num((2 - mu) * b.t2));
    if (!(alpha > 0) || alpha > eps) throw GateError("sparse_cut_with_leaves", "alpha must lie in (0, eps]");
    SparseCutLeaves out;
    out.cut = sparse_cut(t, eps, c);
    int cap = int(std::floor(std::sqrt(double(n))));
    int need = int(std::ceil(alpha * n));
    std::vector<std::vector<int>> by_parent(n);
    for (int x : leaves_in_v1(t, b)) by_parent[t.adj[x][0]].push_back(x);
    for (auto& g : by_parent)
        for (int i = 0; i < int(g.size()) && i < cap; ++i) out.leaves.push_back(g[i]);
    std::sort(out.leaves.begin(), out.leaves.end());
    if (int(out.leaves.size()) >= need) {
        out.mode = 1;
        return out;
    }
    out.mode = 2;
    out.leaves.clear();
    std::vector<int> parents(n);
    std::iota(parents.begin(), parents.end(), 0);
    std::stable_sort(parents.begin(), parents.end(), [&](int x, int y) { return by_parent[x].size() > by_parent[y].size(); });
    std::vector<char> nl(n, 0), inl(n, 0);
    for (int p : parents) {
        for (int x : by_parent[p]) {
            if (int(out.leaves.size()) >= need) break;
            out.leaves.push_back(x);
            inl[x] = 1;
            nl[p] = 1;
        }
        if (int(out.leaves.size()) >= need) break;
    }
    if (int(out.leaves.size()) < need) throw GateError("sparse_cut_with_leaves", "fewer than alpha*n leaves in V1");
    std::sort(out.leaves.begin(), out.leaves.end());
    std::vector<int> cand;
    for (int v : b.v1)
        if (!inl[v] && t.degree(v) <= 1 / gamma) cand.push_back(v);
    std::stable_sort(cand.begin(), cand.end(), [&](int x, int y) { return t.degree(x) < t.degree(y); });
    std::vector<char> taken(n, 0);
    int want = int(out.cut.boundary.size()), nsize = 0;
    for (int v : cand) {
        if (int(out.v1prime.size()) >= want) break;
        bool ok = true;
        for (int w : t.adj[v]) ok = ok && !nl[w] && !taken[w];
        if (!ok || nsize + t.degree(v) > eps * n) continue;
        out.v1prime.push_back(v);
        for (int w : t.adj[v]) taken[w] = 1;
        nsize += t.degree(v);
    }
    if (int(out.v1prime.size()) < want)
        throw GateError("sparse_cut_with_leaves", "could not place " + std::to_string(want) + " low-degree V1 vertices");
    std::sort(out.v1prime.begin(), out.v1prime.end());
    return out;
}

}  // namespace rt
