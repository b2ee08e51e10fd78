#include "rt/graph.hpp"

#include <algorithm>
#include <cmath>

#include "rt/errors.hpp"

namespace rt {

const char* color_name(Color c) { return c == Color::Red ? "red" : "blue"; }

long long BitGraph::edges() const {
    long long s = 0;
    for (auto& r : rows) s += r.count();
    return s / 2;
}

long long BitGraph::edges_in(const Bitset& s) const {
    long long e = 0;
    for (int v = s.first(); v >= 0; v = s.next(v)) e += rows[v].count_and(s);
    return e / 2;
}

RBGraph RBGraph::all(int n, Color c) {
    RBGraph g;
    g.n = n;
    g.red = BitGraph(n);
    g.blue = BitGraph(n);
    BitGraph& full = c == Color::Red ? g.red : g.blue;
    for (int v = 0; v < n; ++v) {
        full.rows[v].fill();
        full.rows[v].reset(v);
    }
    return g;
}

RBGraph RBGraph::from_red(const BitGraph& red) {
    RBGraph g = all(red.n, Color::Blue);
    g.red = red;
    for (int v = 0; v < red.n; ++v) g.blue.rows[v] -= red.rows[v];
    g.check();
    return g;
}

void RBGraph::set(int u, int v, Color c) {
    if (c == Color::Red) {
        red.add(u, v);
        blue.remove(u, v);
    } else {
        blue.add(u, v);
        red.remove(u, v);
    }
}

RBGraph RBGraph::swapped() const {
    RBGraph g = *this;
    std::swap(g.red, g.blue);
    return g;
}

void RBGraph::check() const {
    for (int v = 0; v < n; ++v) {
        audit(!red.has(v, v) && !blue.has(v, v), "colouring has a loop");
        audit(red.rows[v].count_and(blue.rows[v]) == 0, "pair with two colours");
        audit(red.degree(v) + blue.degree(v) == n - 1, "uncoloured pair");
        for (int w = red.rows[v].first(); w >= 0; w = red.rows[v].next(w)) audit(red.has(w, v), "red not symmetric");
        for (int w = blue.rows[v].first(); w >= 0; w = blue.rows[v].next(w)) audit(blue.has(w, v), "blue not symmetric");
    }
}

namespace {

// Blue cliques on [0, a) and [a, a + b), red between them.
RBGraph two_blue_cliques(int a, int b) {
    RBGraph g = RBGraph::all(a + b, Color::Blue);
    for (int u = 0; u < a; ++u)
        for (int v = a; v < a + b; ++v) g.set(u, v, Color::Red);
    return g;
}

}  // namespace

RBGraph burr_type1(int t1, int t2) {
    if (t2 < 2 || t1 < t2) throw InputError("burr_type1 needs t1 >= t2 >= 2");
    RBGraph g = two_blue_cliques(t1 + t2 - 1, t2 - 1);
    g.check();
    return g;
}

RBGraph burr_type2(int t1) {
    if (t1 < 2) throw InputError("burr_type2 needs t1 >= 2");
    RBGraph g = two_blue_cliques(t1 - 1, t1 - 1);
    g.check();
    return g;
}

RBGraph perturb(const RBGraph& g, double eta, uint64_t seed) {
    if (!(eta >= 0 && eta <= 1)) throw InputError("eta must lie in [0, 1]");
    RBGraph h = g;
    Rng rng(seed);
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            if (rng.bernoulli(eta)) h.set(u, v, other(g.color(u, v)));
    h.check();
    return h;
}

RBGraph add_random_vertex(const RBGraph& g, uint64_t seed) {
    RBGraph h = RBGraph::all(g.n + 1, Color::Blue);
    for (int u = 0; u < g.n; ++u)
        for (int v = g.red.rows[u].first(); v >= 0; v = g.red.rows[u].next(v))
            if (u < v) h.set(u, v, Color::Red);
    Rng rng(seed);
    for (int u = 0; u < g.n; ++u)
        if (rng.bernoulli(0.5)) h.set(u, g.n, Color::Red);
    h.check();
    return h;
}

std::string to_graph6(const BitGraph& g) {
    std::string s;
    long long n = g.n;
    if (n <= 62) {
        s += char(63 + n);
    } else if (n <= 258047) {
        s += '~';
        for (int sh = 12; sh >= 0; sh -= 6) s += char(63 + ((n >> sh) & 63));
    } else {
        s += "~~";
        for (int sh = 30; sh >= 0; sh -= 6) s += char(63 + ((n >> sh) & 63));
    }
    int acc = 0, bits = 0;
    for (int j = 1; j < g.n; ++j)
        for (int i = 0; i < j; ++i) {
            acc = (acc << 1) | (g.has(i, j) ? 1 : 0);
            if (++bits == 6) {
                s += char(63 + acc);
                acc = bits = 0;
            }
        }
    if (bits) s += char(63 + (acc << (6 - bits)));
    return s;
}

BitGraph from_graph6(const std::string& raw) {
    std::string s = raw;
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    if (s.rfind(">>graph6<<", 0) == 0) s = s.substr(10);
    size_t pos = 0;
    auto byte = [&](size_t i) {
        if (i >= s.size()) throw InputError("graph6 string is truncated");
        int c = (unsigned char)s[i] - 63;
        if (c < 0 || c > 63) throw InputError("graph6 byte out of range");
        return c;
    };
    long long n = 0;
    if (s.empty()) throw InputError("empty graph6 string");
    if (s[0] != '~') {
        n = byte(0);
        pos = 1;
    } else if (s.size() > 1 && s[1] != '~') {
        for (int i = 1; i <= 3; ++i) n = (n << 6) | byte(i);
        pos = 4;
    } else {
        for (int i = 2; i <= 7; ++i) n = (n << 6) | byte(i);
        pos = 8;
    }
    if (n > 1000000) throw InputError("graph6 order too large");
    BitGraph g{int(n)};
    long long need = n * (n - 1) / 2;
    if ((long long)(s.size() - pos) != (need + 5) / 6) throw InputError("graph6 length does not match its order");
    long long k = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++k) {
            int c = byte(pos + k / 6);
            if ((c >> (5 - k % 6)) & 1) g.add(i, j);
        }
    return g;
}

nlohmann::json graph6_sidecar(const RBGraph& g) { return {{"n", g.n}, {"format", "graph6-red"}}; }

std::string witness_problem(const RBGraph& g0, const ExtremalWitness& w) {
    const RBGraph g = w.swapped ? g0.swapped() : g0;
    int n = w.t1 + w.t2;
    double lim = w.mu * n;
    Bitset a(g.n), b(g.n);
    for (int v : w.u1) {
        if (v < 0 || v >= g.n) return "vertex out of range";
        a.set(v);
    }
    for (int v : w.u2) {
        if (v < 0 || v >= g.n) return "vertex out of range";
        b.set(v);
    }
    if (a.count() != int(w.u1.size()) || b.count() != int(w.u2.size())) return "repeated vertex";
    if (a.count_and(b)) return "U1 and U2 intersect";
    if (w.kind == 1) {
        if (w.u1.size() < (1 - w.mu) * n) return "|U1| < (1-mu)n";
        if (w.u2.size() < (1 - w.mu) * w.t2) return "|U2| < (1-mu)t2";
        for (int u : w.u1) {
            if (g.red.degree_in(u, a) > lim) return "red degree inside U1 exceeds mu*n";
            if (g.blue.degree_in(u, b) > lim) return "blue degree from U1 to U2 exceeds mu*n";
        }
        for (int u : w.u2)
            if (g.blue.degree_in(u, a) > lim) return "blue degree from U2 to U1 exceeds mu*n";
        return "";
    }
    if (w.kind != 2) return "unknown kind";
    if (w.u1.size() < (1 - w.mu) * w.t1 || w.u2.size() < (1 - w.mu) * w.t1) return "|U_i| < (1-mu)t1";
    for (int i = 0; i < 2; ++i)
        for (int u : i ? w.u2 : w.u1) {
            const Bitset& own = i ? b : a;
            const Bitset& opp = i ? a : b;
            if (g.red.degree_in(u, own) > lim) return "red degree inside U_i exceeds mu*n";
            if (g.blue.degree_in(u, opp) > lim) return "blue degree across exceeds mu*n";
        }
    return "";
}

namespace {

// Prunes vertices that break the degree conditions until none do.
void prune(const RBGraph& g, int kind, double lim, Bitset& s1, Bitset& s2) {
    while (true) {
        std::vector<int> drop1, drop2;
        for (int u = s1.first(); u >= 0; u = s1.next(u))
            if (g.red.degree_in(u, s1) > lim || g.blue.degree_in(u, s2) > lim) drop1.push_back(u);
        for (int u = s2.first(); u >= 0; u = s2.next(u))
            if ((kind == 2 && g.red.degree_in(u, s2) > lim) || g.blue.degree_in(u, s1) > lim) drop2.push_back(u);
        if (drop1.empty() && drop2.empty()) return;
        for (int u : drop1) s1.reset(u);
        for (int u : drop2) s2.reset(u);
    }
}

}  // namespace

std::optional<ExtremalWitness> detect_extremal(const RBGraph& g0, double mu, int t1, int t2) {
    int n = t1 + t2;
    double lim = mu * n;
    for (bool swap : {false, true}) {
        const RBGraph g = swap ? g0.swapped() : g0;
        if (g.n == 0) return std::nullopt;
        std::vector<int> seeds;
        int hi = 0, lo = 0;
        for (int v = 0; v < g.n; ++v) {
            if (g.red.degree(v) > g.red.degree(hi)) hi = v;
            if (g.red.degree(v) < g.red.degree(lo)) lo = v;
        }
        for (int s : {hi, lo, 0, g.n / 2, g.n - 1})
            if (std::find(seeds.begin(), seeds.end(), s) == seeds.end()) seeds.push_back(s);
        for (int s : seeds) {
            Bitset side0 = g.blue.rows[s], side1 = g.red.rows[s];
            side0.set(s);
            for (int pass = 0; pass < 4; ++pass) {
                Bitset n0(g.n), n1(g.n);
                for (int u = 0; u < g.n; ++u) {
                    int c0 = g.red.degree_in(u, side0) + g.blue.degree_in(u, side1);
                    int c1 = g.red.degree_in(u, side1) + g.blue.degree_in(u, side0);
                    (c0 <= c1 ? n0 : n1).set(u);
                }
                if (n0 == side0 && n1 == side1) break;
                side0 = n0;
                side1 = n1;
            }
            for (int kind : {1, 2})
                for (int orient = 0; orient < 2; ++orient) {
                    if (kind == 2 && orient == 1) continue;
                    Bitset a = orient ? side1 : side0, b = orient ? side0 : side1;
                    prune(g, kind, lim, a, b);
                    ExtremalWitness w;
                    w.kind = kind;
                    w.u1 = a.to_vector();
                    w.u2 = b.to_vector();
                    w.mu = mu;
                    w.t1 = t1;
                    w.t2 = t2;
                    w.swapped = swap;
                    if (kind == 2 && w.u1.size() < w.u2.size()) std::swap(w.u1, w.u2);
                    if (witness_problem(g0, w).empty()) return w;
                }
        }
    }
    return std::nullopt;
}

nlohmann::json witness_to_json(const ExtremalWitness& w) {
    return {{"kind", w.kind == 1 ? "I" : "II"}, {"U1", w.u1}, {"U2", w.u2}, {"mu", w.mu},
            {"t1", w.t1},  {"t2", w.t2},       {"swapped", w.swapped}};
}

PartitionI partition_plus_type1(const RBGraph& g, const std::vector<int>& u1, const std::vector<int>& u2, double beta,
                                int n, double mu) {
    Bitset a = Bitset::of(g.n, u1), b = Bitset::of(g.n, u2);
    if (a.count_and(b)) throw InputError("U1 and U2 must be disjoint");
    PartitionI p;
    Bitset up2(g.n);
    for (int v = 0; v < g.n; ++v) {
        bool in2 = g.red.degree_in(v, a) >= beta * n;
        (in2 ? p.u2p : p.u1p).push_back(v);
        if (in2) up2.set(v);
    }
    p.k = int(p.u1p.size()) - n;
    std::vector<int> deg;
    for (int u : p.u1p) {
        int d = g.blue.degree_in(u, up2);
        deg.push_back(d);
        if (d >= n / 10.0) p.x.push_back(u);
    }
    std::sort(deg.rbegin(), deg.rend());
    size_t rank = size_t(std::ceil(30 * mu * n));
    p.d = rank >= 1 && rank <= deg.size() ? deg[rank - 1] : 0;
    for (int v : p.u2p) audit(g.red.degree_in(v, a) >= beta * n, "U2+ threshold");
    for (int v : p.u1p) audit(g.red.degree_in(v, a) < beta * n, "U1+ threshold");
    return p;
}

PartitionII partition_plus_type2(const RBGraph& g, const std::vector<int>& u1, const std::vector<int>& u2, double beta,
                                 int n) {
    Bitset a = Bitset::of(g.n, u1), b = Bitset::of(g.n, u2);
    if (a.count_and(b)) throw InputError("U1 and U2 must be disjoint");
    PartitionII p;
    for (int v = 0; v < g.n; ++v) {
        if (a.test(v)) p.u1p.push_back(v);
        else if (b.test(v)) p.u2p.push_back(v);
        else if (g.red.degree_in(v, b) >= beta * n) p.u1p.push_back(v);
        else if (g.red.degree_in(v, a) >= beta * n) p.u2p.push_back(v);
        else p.leftover.push_back(v);
    }
    for (int v : p.leftover) {
        audit(g.blue.degree_in(v, a) > int(u1.size()) - beta * n, "leftover blue degree into U1");
        audit(g.blue.degree_in(v, b) > int(u2.size()) - beta * n, "leftover blue degree into U2");
    }
    return p;
}

}  // namespace rt
