#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rt/graph.hpp"
#include "rt/tree.hpp"

namespace rt {

struct LowerBound {
    RBGraph graph;
    bool red_free = false, blue_free = false;
    bool ok() const { return red_free && blue_free; }
};

// The larger Burr colouring on formula_value - 1 vertices, audited in both colours.
LowerBound lower_bound_witness(const Tree& t);

struct SearchOptions {
    double budget_secs = 600;
    int jobs = 1;
    bool blue_first = false;  // alternative branching order
};

enum class SearchOutcome { Found, None, Timeout };

struct SearchResult {
    SearchOutcome outcome = SearchOutcome::None;
    std::optional<RBGraph> coloring;  // set when Found
};

// Branch and bound over 2-colourings of K_N for one with no monochromatic copy of t.
// Deterministic for any number of jobs.
SearchResult mono_free_search(const Tree& t, int N, const SearchOptions& opt);

struct RamseyResult {
    std::string tree_code;
    int n = 0, t1 = 0, t2 = 0;
    long long formula = 0;
    std::optional<int> exact;
    std::optional<RBGraph> witness;  // on exact - 1 vertices
    std::string status;              // tight, off_by(d) or budget_exceeded
    int lower_witness_n = 0;         // largest N with a known mono-free colouring
    int smallest_unrefuted = 0;      // set when the budget ran out
    double seconds = 0;
};

RamseyResult ramsey_exact(const Tree& t, const SearchOptions& opt);

nlohmann::json ramsey_to_json(const RamseyResult& r);
std::string csv_header();
std::string csv_row(const RamseyResult& r);

// Shape checks used by the formula report.
bool is_path(const Tree& t);
bool is_star(const Tree& t);  // at least two leaves around one centre
bool is_double_star(const Tree& t);

struct FormulaReport {
    std::vector<RamseyResult> rows;
    std::vector<std::string> failures;  // broken family expectations
    int budget_exceeded = 0;
};
FormulaReport verify_formula(int nmax, const SearchOptions& opt);

struct LowerBoundReport {
    int trees = 0;
    std::vector<std::string> failures;
};
LowerBoundReport verify_lower_bound_all(int nmax);

}  // namespace rt
