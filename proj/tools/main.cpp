#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rt/decomp.hpp"
#include "rt/embed.hpp"
#include "rt/errors.hpp"
#include "rt/gen.hpp"
#include "rt/graph.hpp"
#include "rt/matching.hpp"
#include "rt/ramsey.hpp"
#include "rt/tree.hpp"

using namespace rt;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

// JSON object {"n", "edges"} or a parent array.
Tree read_tree(const std::string& path) {
    json j = read_json(path);
    if (j.is_array()) return Tree::from_parent_array(j.get<std::vector<int>>());
    return tree_from_json(j);
}

// graph6 of the red subgraph, either bare or inside a JSON sidecar with a "graph6" field.
RBGraph read_coloring(const std::string& path) {
    std::string text = slurp(path);
    size_t start = text.find_first_not_of(" \t\r\n");
    if (start == std::string::npos) throw InputError(path + " is empty");
    if (text[start] == '{') {
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded() || !j.contains("graph6")) throw InputError(path + " has no graph6 field");
        return RBGraph::from_red(from_graph6(j["graph6"].get<std::string>()));
    }
    std::string line = text.substr(start);
    line = line.substr(0, line.find_first_of("\r\n"));
    return RBGraph::from_red(from_graph6(line));
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {}
    std::ostream& stream() { return path_.empty() ? std::cout : file(); }

private:
    std::string path_;
    std::ofstream f_;
    std::ostream& file() {
        if (!f_.is_open()) {
            f_.open(path_);
            if (!f_) throw InputError("cannot write " + path_);
        }
        return f_;
    }
};

json split_json(const TreeSplit& s) { return {{"t1", s.t1}, {"t2", s.t2}, {"v", s.v}}; }

json cut_json(const SparseCut& s) {
    return {{"a", s.a}, {"b", s.b}, {"boundary", s.boundary}, {"eps", s.eps}, {"d", s.d}, {"trace", s.trace}};
}

struct DecompArgs {
    std::string op, tree;
    double eps = 0.01, c = 0.01, mu = 0.01, xi = 0.3, alpha = 0.02, gamma = 0.1;
    int k = 3, m = 10;
    std::vector<int> weights;
};

json run_decomp(const DecompArgs& a) {
    Tree t = read_tree(a.tree);
    Bipartition b = bipartition(t);
    json out{{"op", a.op}, {"params", json::object()}, {"audit", {{"passed", true}}}};
    json& p = out["params"];
    json& w = out["witness"];
    if (a.op == "leaves-in-v1") {
        w = leaves_in_v1(t, b);
    } else if (a.op == "bare-paths") {
        p["k"] = a.k;
        w = bare_paths(t, a.k);
    } else if (a.op == "cutset") {
        p["xi"] = a.xi;
        w = small_component_cutset(t, a.xi);
    } else if (a.op == "half-vertex") {
        w = half_component_vertex(t);
    } else if (a.op == "balanced-split") {
        TreeSplit s = balanced_split(t);
        check_split(t, s);
        w = split_json(s);
    } else if (a.op == "weighted-split") {
        std::vector<int> q = a.weights.empty() ? std::vector<int>(t.n, 1) : a.weights;
        if (int(q.size()) != t.n) throw InputError("--weights needs one value per vertex");
        p["weights"] = q;
        TreeSplit s = weighted_split(t, q);
        check_split(t, s);
        w = split_json(s);
    } else if (a.op == "s-hom") {
        p = {{"xi", a.xi}, {"c", a.c}};
        SHomomorphism h = s_homomorphism(t, a.xi, a.c);
        json labels = json::array();
        for (SLabel l : h.phi) labels.push_back(slabel_name(l));
        w = {{"phi", labels}, {"z", h.z}, {"a", h.a}, {"b", h.b}, {"c", h.c}};
    } else if (a.op == "two-vertex-split") {
        p["eps"] = a.eps;
        TwoVertexSplit s = two_vertex_split(t, a.eps);
        w = {{"a", s.a}, {"b", s.b}, {"boundary", s.boundary}, {"branch", s.branch}};
    } else if (a.op == "surplus-split") {
        p["mu"] = a.mu;
        SurplusSplit s = bipartite_surplus_split(t, b, a.mu);
        check_split(t, s.split);
        w = {{"split", split_json(s.split)}, {"surplus", s.surplus}};
    } else if (a.op == "v2-rich") {
        p["m"] = a.m;
        V2RichSubtree s = v2_rich_subtree(t, b, a.m);
        w = {{"vertices", s.vertices}, {"pieces", s.pieces}, {"index", s.index}, {"attach", s.attach}};
    } else if (a.op == "sparse-cut") {
        p = {{"eps", a.eps}, {"c", a.c}};
        SparseCut s = sparse_cut(t, a.eps, a.c);
        check_sparse_cut(t, s);
        w = cut_json(s);
    } else if (a.op == "sparse-cut-leaves") {
        p = {{"eps", a.eps}, {"mu", a.mu}, {"alpha", a.alpha}, {"c", a.c}, {"gamma", a.gamma}};
        SparseCutLeaves s = sparse_cut_with_leaves(t, b, a.eps, a.mu, a.alpha, a.c, a.gamma);
        check_sparse_cut(t, s.cut);
        w = {{"cut", cut_json(s.cut)}, {"mode", s.mode}, {"leaves", s.leaves}, {"v1prime", s.v1prime}};
    } else {
        throw InputError("unknown decomposition " + a.op);
    }
    return out;
}

json matching_run(const std::string& path, const std::vector<int>& demand) {
    json j = read_json(path);
    if (!j.contains("na") || !j.contains("nb") || !j.contains("edges"))
        throw InputError("bipartite JSON needs fields na, nb and edges");
    Bipartite g(j["na"].get<int>(), j["nb"].get<int>());
    for (auto& e : j["edges"]) {
        int x = e.at(0).get<int>(), y = e.at(1).get<int>();
        if (x < 0 || x >= g.na || y < 0 || y >= g.nb) throw InputError("edge outside the vertex ranges");
        g.add(x, y);
    }
    Matching m = max_matching(g);
    Cascade c = cascade(g, m);
    check_cascade(g, m, c);
    json out{{"size", m.size}, {"mate_a", m.mate_a}, {"mate_b", m.mate_b}, {"cascade", cascade_to_json(c)}};
    if (!demand.empty()) {
        if (int(demand.size()) != g.na) throw InputError("--demand needs one value per A vertex");
        StarPacking s = star_packing(g, demand);
        out["star_packing"] = {{"ok", s.ok}, {"stars", s.stars}, {"violator", s.violator}};
    }
    return out;
}

void emit_coloring(const RBGraph& g, const std::string& out) {
    json side = graph6_sidecar(g);
    std::string g6 = to_graph6(g.red);
    if (out.empty()) {
        side["graph6"] = g6;
        std::cout << side.dump() << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) throw InputError("cannot write " + out);
    f << g6 << "\n";
    std::ofstream s(out + ".json");
    s << side.dump() << "\n";
}

DeskConstants read_constants(const std::string& path) {
    if (path.empty()) return DeskConstants{};
    DeskConstants dc = DeskConstants::from_json(read_json(path));
    dc.check();
    return dc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tree Ramsey numbers: exact search, decompositions and extremal embeddings"};
    app.require_subcommand(1);
    std::string out;
    std::function<void()> action;

    auto* trees = app.add_subcommand("trees", "enumerate, generate and inspect trees");
    trees->require_subcommand(1);
    int tn = 0, tmaxdeg = 4, tt1 = 0, tt2 = 0;
    uint64_t tseed = 0;
    std::string tshape = "any", tfile;
    auto* tenum = trees->add_subcommand("enum", "all free trees on n vertices, one JSON line each");
    tenum->add_option("--n", tn, "vertex count")->required()->check(CLI::Range(1, 22));
    tenum->add_option("--out", out);
    tenum->callback([&] {
        action = [&] {
            Output o(out);
            enumerate_trees(tn, [&](const Tree& t) { o.stream() << tree_to_json(t).dump() << "\n"; });
        };
    });
    auto* trand = trees->add_subcommand("random", "random tree");
    trand->add_option("--n", tn, "vertex count (shape any)");
    trand->add_option("--t1", tt1, "larger class (shapes path-rich, leaf-rich)");
    trand->add_option("--t2", tt2, "smaller class");
    trand->add_option("--maxdeg", tmaxdeg)->check(CLI::Range(2, 1 << 20));
    trand->add_option("--shape", tshape)->check(CLI::IsMember({"any", "path-rich", "leaf-rich"}));
    trand->add_option("--seed", tseed)->required();
    trand->add_option("--out", out);
    trand->callback([&] {
        action = [&] {
            Rng r(tseed);
            Tree t;
            if (tshape == "any") {
                if (tn < 1) throw InputError("--n must be positive");
                t = random_tree(tn, tmaxdeg, r);
            } else {
                if (tt1 < tt2 || tt2 < 1) throw InputError("need t1 >= t2 >= 1");
                t = tshape == "path-rich" ? path_rich_tree(tt1, tt2, tmaxdeg, r) : leaf_rich_tree(tt1, tt2, tmaxdeg, r);
            }
            Output(out).stream() << tree_to_json(t).dump() << "\n";
        };
    });
    auto* tinfo = trees->add_subcommand("info", "classes, formula value and canonical code");
    tinfo->add_option("--tree", tfile)->required();
    tinfo->add_option("--out", out);
    tinfo->callback([&] {
        action = [&] {
            Tree t = read_tree(tfile);
            Bipartition b = bipartition(t);
            json j{{"n", t.n},
                   {"t1", b.t1},
                   {"t2", b.t2},
                   {"max_degree", t.max_degree()},
                   {"formula", formula_value(b.t1, b.t2)},
                   {"canonical", canonical_code(t)},
                   {"parent_array", parent_array(t)}};
            Output(out).stream() << j.dump() << "\n";
        };
    });
    auto* tdot = trees->add_subcommand("dot", "Graphviz export");
    tdot->add_option("--tree", tfile)->required();
    tdot->add_option("--out", out);
    tdot->callback([&] { action = [&] { Output(out).stream() << tree_to_dot(read_tree(tfile)); }; });

    DecompArgs da;
    auto* decomp = app.add_subcommand("decomp", "tree decompositions with audited witnesses");
    decomp->add_option("op", da.op, "decomposition")
        ->required()
        ->check(CLI::IsMember({"leaves-in-v1", "bare-paths", "cutset", "half-vertex", "balanced-split",
                               "weighted-split", "s-hom", "two-vertex-split", "surplus-split", "v2-rich",
                               "sparse-cut", "sparse-cut-leaves"}));
    decomp->add_option("--tree", da.tree)->required();
    decomp->add_option("--eps", da.eps);
    decomp->add_option("--c", da.c);
    decomp->add_option("--mu", da.mu);
    decomp->add_option("--xi", da.xi);
    decomp->add_option("--alpha", da.alpha);
    decomp->add_option("--gamma", da.gamma);
    decomp->add_option("--k", da.k);
    decomp->add_option("--m", da.m);
    decomp->add_option("--weights", da.weights)->delimiter(',');
    decomp->add_option("--out", out);
    decomp->callback([&] { action = [&] { Output(out).stream() << run_decomp(da).dump() << "\n"; }; });

    int ct1 = 0, ct2 = 0;
    double ceta = 0.002, cmu = 0.01;
    uint64_t cseed = 0;
    std::string cgraph;
    auto* color = app.add_subcommand("color", "Burr colourings, perturbation and extremality detection");
    color->require_subcommand(1);
    auto* burr1 = color->add_subcommand("burr1", "two blue cliques of t1+t2-1 and t2-1 vertices");
    burr1->add_option("--t1", ct1)->required();
    burr1->add_option("--t2", ct2)->required();
    burr1->add_option("--out", out);
    burr1->callback([&] { action = [&] { emit_coloring(burr_type1(ct1, ct2), out); }; });
    auto* burr2 = color->add_subcommand("burr2", "two blue cliques of t1-1 vertices");
    burr2->add_option("--t1", ct1)->required();
    burr2->add_option("--out", out);
    burr2->callback([&] { action = [&] { emit_coloring(burr_type2(ct1), out); }; });
    auto* pert = color->add_subcommand("perturb", "flip each pair independently with probability eta");
    pert->add_option("--graph", cgraph)->required();
    pert->add_option("--eta", ceta);
    pert->add_option("--seed", cseed)->required();
    pert->add_option("--out", out);
    bool cadd = false;
    pert->add_flag("--add-vertex", cadd, "append one vertex with uniformly random colours");
    pert->callback([&] {
        action = [&] {
            RBGraph g = perturb(read_coloring(cgraph), ceta, cseed);
            emit_coloring(cadd ? add_random_vertex(g, cseed + 1) : g, out);
        };
    });
    auto* detect = color->add_subcommand("detect", "find a (mu, t1, t2)-extremal witness");
    detect->add_option("--graph", cgraph)->required();
    detect->add_option("--mu", cmu);
    detect->add_option("--t1", ct1)->required();
    detect->add_option("--t2", ct2)->required();
    detect->add_option("--out", out);
    detect->callback([&] {
        action = [&] {
            auto w = detect_extremal(read_coloring(cgraph), cmu, ct1, ct2);
            if (!w) throw GateError("extremal", "no witness at mu = " + std::to_string(cmu));
            Output(out).stream() << witness_to_json(*w).dump() << "\n";
        };
    });

    std::string mgraph;
    std::vector<int> mdemand;
    auto* matching = app.add_subcommand("matching", "maximum matching, cascade classes and star packing");
    matching->add_option("--graph", mgraph, "JSON {na, nb, edges}")->required();
    matching->add_option("--demand", mdemand, "star sizes for the A side")->delimiter(',');
    matching->add_option("--out", out);
    matching->callback([&] { action = [&] { Output(out).stream() << matching_run(mgraph, mdemand).dump() << "\n"; }; });

    std::string egraph, etree, econst;
    uint64_t eseed = 0;
    auto* embed = app.add_subcommand("embed", "monochromatic embeddings into near-extremal colourings");
    embed->require_subcommand(1);
    auto* edrive = embed->add_subcommand("drive", "detect the extremal type and run its case driver");
    edrive->add_option("--graph", egraph)->required();
    edrive->add_option("--tree", etree)->required();
    edrive->add_option("--constants", econst, "DeskConstants JSON");
    edrive->add_option("--seed", eseed)->required();
    edrive->add_option("--out", out);
    edrive->callback([&] {
        action = [&] {
            DeskConstants dc = read_constants(econst);
            dc.seed = eseed;
            DriveResult r = drive(read_coloring(egraph), read_tree(etree), dc);
            Output(out).stream() << drive_to_json(r).dump() << "\n";
            if (!r.embedding) throw GateError("drive", "every case gate failed, see case_trace");
        };
    });

    SearchOptions so;
    std::string rtree;
    int rmax = 6;
    auto* ramsey = app.add_subcommand("ramsey", "exact Ramsey numbers of small trees");
    ramsey->require_subcommand(1);
    auto search_flags = [&](CLI::App* c) {
        c->add_option("--budget-secs", so.budget_secs)->check(CLI::NonNegativeNumber);
        c->add_option("--jobs", so.jobs)->check(CLI::Range(1, 256));
        c->add_option("--out", out);
    };
    auto* rexact = ramsey->add_subcommand("exact", "R(T) for one tree");
    rexact->add_option("--tree", rtree)->required();
    search_flags(rexact);
    rexact->callback([&] {
        action = [&] { Output(out).stream() << ramsey_to_json(ramsey_exact(read_tree(rtree), so)).dump() << "\n"; };
    });
    auto* rform = ramsey->add_subcommand("verify-formula", "exact value against the formula for every small tree");
    rform->add_option("--max-n", rmax)->check(CLI::Range(2, 8));
    search_flags(rform);
    rform->callback([&] {
        action = [&] {
            FormulaReport rep = verify_formula(rmax, so);
            auto& os = Output(out).stream();
            os << csv_header() << "\n";
            for (const auto& r : rep.rows) os << csv_row(r) << "\n";
            for (const auto& f : rep.failures) std::cerr << "expectation failed: " << f << "\n";
        };
    });
    auto* rlb = ramsey->add_subcommand("verify-lb", "Burr lower-bound witnesses for every tree up to max-n");
    rlb->add_option("--max-n", rmax)->check(CLI::Range(1, 12));
    rlb->add_option("--out", out);
    rlb->callback([&] {
        action = [&] {
            LowerBoundReport rep = verify_lower_bound_all(rmax);
            Output(out).stream() << json{{"max_n", rmax}, {"trees", rep.trees}, {"failures", rep.failures}}.dump()
                                 << "\n";
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    try {
        action();
    } catch (const GateError& e) {
        std::cout << json{{"error", "gate"}, {"gate", e.gate}, {"detail", e.what()}}.dump() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const AuditError& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
