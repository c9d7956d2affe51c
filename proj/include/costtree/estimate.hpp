#pragma once

#include <cstddef>
#include <span>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/tree.hpp"

namespace costtree {

// Pessimistic error count for a leaf holding m examples of which s are
// misclassified: m times the upper limit of the binomial confidence interval
// at confidence level cf, i.e. the p solving P[Bin(m, p) <= s] = cf.
// EE(0, 0, cf) is defined as 0.
double expected_error(std::size_t m, std::size_t s, double cf);

// Lower tail P[Bin(m, p) <= s].
double binomial_cdf(std::size_t s, std::size_t m, double p);

// Expected misclassification cost of a leaf labelled `label`. For a non-uniform
// matrix the single penalty is replaced by a Laplace-weighted average of the
// penalties for predicting `label` on each other class.
double leaf_mcost(std::span<const std::size_t> counts, ClassId label, const CostMatrix& matrix, double cf);

// Sum of leaf costs divided by the training size m.
double tree_mcost(const Tree& tree, std::size_t m, const CostMatrix& matrix, double cf);

struct CostEstimate {
    double tcost = 0.0;
    double mcost = 0.0;
    double total = 0.0;
};

// Estimated per-instance cost of using `tree` (built from `rows`) on a new case.
CostEstimate total_cost(const Tree& tree, const Dataset& data, std::span<const std::size_t> rows,
                        const CostModel& model, double cf, const ChargeContext& ctx = {});

struct ProblemScale {
    double x = 0.0;   // mean off-diagonal penalty over the cost of all tests
    double w = 1.0;   // EG2 cost bias, 0.5 + e^-x
    double cf = 0.25; // confidence factor in [0.2, 0.3]
    double tc = 0.0;  // cost of administering every test
};

ProblemScale scale_for_ratio(double x);
ProblemScale problem_scale(const CostModel& model);

}  // namespace costtree
