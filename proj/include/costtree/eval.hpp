#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/tree.hpp"

namespace costtree {

// TC + min_i (1 - f_i) * max_ij M_ij: the cost of testing everything plus the
// penalty of always guessing the most frequent class at the worst rate.
double standard_cost(const CostModel& model, std::span<const double> class_frequencies);
// avg / standard. Not clamped: values above 1 are legitimate.
double normalized_cost(double average_cost, double standard);

// Stratified assignment of rows to k folds. Returns the test rows of each fold,
// sorted. Fold sizes differ by at most one, and so do the per-class counts.
std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed);

struct FoldResult {
    double avg_cost = 0.0;  // per-instance test cost plus misclassification penalty
    double avg_tcost = 0.0;
    double avg_mcost = 0.0;
    double normalized = 0.0;
    double accuracy = 0.0;
    std::size_t tree_size = 0;
    std::size_t test_size = 0;
};

struct EvalReport {
    double standard = 0.0;
    std::vector<FoldResult> folds;
    double mean_cost = 0.0;
    double mean_normalized = 0.0;
    double normalized_half_width = 0.0;  // two-sided t interval at 95%
    double mean_accuracy = 0.0;
    double mean_tree_size = 0.0;
};

// Charges every test example through the tree and averages.
FoldResult evaluate_tree(const Tree& tree, const Dataset& data, std::span<const std::size_t> rows,
                         const CostModel& model, double standard);

// Trains on everything outside fold `fold`.
using Inducer = std::function<Tree(const Dataset&, std::span<const std::size_t>, const CostModel&, std::size_t fold)>;

EvalReport cross_validate(const Dataset& data, const CostModel& model, const Inducer& inducer,
                          const std::vector<std::vector<std::size_t>>& folds);
EvalReport kfold_cv(const Dataset& data, const CostModel& model, const Inducer& inducer, std::size_t k = 10,
                    std::uint64_t seed = 0);

// Half-width of the two-sided (1 - alpha) t interval for the mean of `xs`.
double t_half_width(std::span<const double> xs, double alpha = 0.05);

enum class Winner { None, First, Second };
// Which direction of a score counts as better.
enum class Better { Higher, Lower };

std::string_view to_string(Winner w);

struct TestResult {
    Winner winner = Winner::None;
    double p = 1.0;
    double statistic = 0.0;  // t for the t-test, min(R+, R-) for Wilcoxon
};

// Two-sided paired t-test on a[i] - b[i]; a winner is declared when p < alpha.
TestResult paired_ttest(std::span<const double> a, std::span<const double> b, double alpha = 0.05,
                        Better better = Better::Higher);

struct SignedRanks {
    std::size_t n = 0;     // non-zero differences
    double r_plus = 0.0;   // rank sum of a > b
    double r_minus = 0.0;  // rank sum of a < b
    double tie_term = 0.0; // sum of t^3 - t over tied groups of |d|
};
// Mid-ranked absolute differences with zero differences dropped.
SignedRanks signed_ranks(std::span<const double> a, std::span<const double> b);

// Wilcoxon signed-rank test, normal approximation with tie-corrected variance
// and continuity correction.
TestResult wilcoxon(std::span<const double> a, std::span<const double> b, double alpha = 0.05,
                    Better better = Better::Higher);

}  // namespace costtree
