#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/eval.hpp"
#include "costtree/learners.hpp"

namespace costtree {

struct BenchProblem {
    std::string name;
    Dataset data;
    CostModel model;  // test costs; the matrix is replaced by each swept mc
};

struct BenchConfig {
    std::vector<Algorithm> algorithms;
    std::vector<double> mcs;         // uniform penalties; empty keeps each problem's own matrix
    std::vector<std::size_t> rs{5};  // only anytime learners are swept over r
    std::size_t folds = 10;
    std::vector<std::uint64_t> seeds{0};
    double alpha = 0.05;
    LearnerOptions learner;  // r and seed are overwritten per cell
    std::size_t threads = 1;
};

// One learner variant on one problem, penalty and seed.
struct BenchCell {
    std::size_t problem = 0;
    Algorithm algorithm = Algorithm::ID3;
    std::optional<double> mc;
    std::optional<std::size_t> r;  // empty for learners that ignore r
    std::uint64_t seed = 0;
    EvalReport report;
};

struct BenchResult {
    std::vector<std::string> problems;
    std::vector<BenchCell> cells;
};

// Seed s fixes the fold partition shared by every learner run under s; the
// learner seed of fold f is derive_seed(s, {f}).
BenchResult run_bench(const std::vector<BenchProblem>& problems, const BenchConfig& config);

// Variant label, e.g. "act(r=5)" or "eg2".
std::string variant_name(const BenchCell& cell);

// Summary: one row per (algo, mc, r) with the mean normalized cost over all
// problems and seeds plus its t half-width over those units.
//   algo mc r units mean_normalized half_width mean_cost mean_accuracy mean_tree_size
void write_summary(std::ostream& out, const BenchResult& result);
// Pairwise comparisons per mc: per-unit paired t-tests on fold costs (win
// counts and p-values) and a Wilcoxon test over the unit means. Lower cost wins.
//   mc method_a method_b units t_wins_a t_wins_b wilcoxon_p wilcoxon_winner t_p_values
void write_comparisons(std::ostream& out, const BenchResult& result, double alpha);
// One row per fold of every cell.
//   problem algo mc r seed fold test_size avg_cost avg_tcost avg_mcost normalized accuracy tree_size
void write_folds(std::ostream& out, const BenchResult& result);

}  // namespace costtree
