#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/estimate.hpp"
#include "costtree/induction.hpp"
#include "costtree/tree.hpp"

namespace costtree {

// Lookahead split selection shared by LSID3 and ACT.
//
// For every candidate test a at a node, each branch subset E_i is explored by
// r sampled subtrees and scored by the best sample; the test with the lowest
// sum wins. Nominal tests get r samples per branch (the first one greedy for
// ACT); a numeric attribute is evaluated at its r highest-gain cut points with
// one greedy sample per branch each, so both kinds get the same budget.

enum class SampleKind { Greedy, Stochastic };

// One sampling job: grow a subtree on `rows` below the tested split.
struct ChildTask {
    const Dataset& data;
    std::span<const std::size_t> rows;        // E_i
    std::span<const std::size_t> attributes;  // A - {a} for nominal a
    const ChargeContext& ctx;                 // path context including a
    const CostModel& model;
    std::size_t parent_size = 0;  // |E|
    Split split;
    std::size_t child = 0;
    std::size_t sample = 0;
    std::uint64_t seed = 0;
};

// Returns the score of one sampled subtree for a branch. Lower is better.
using ChildSampler = std::function<double(const ChildTask&, SampleKind)>;

struct AttributeEvaluation {
    Split split;
    double test_cost = 0.0;            // added to the branch minima
    std::vector<double> child_minima;  // min_i over the samples of branch i
    double total = 0.0;
    std::size_t sampler_calls = 0;
};

struct LookaheadOptions {
    std::size_t r = 1;
    bool greedy_first = true;        // first sample of a nominal branch is greedy
    bool charge_test_cost = true;    // total_a includes the context cost of a
};

// Scores every candidate test at the node. Candidates that cannot split the
// node are skipped. Requires options.r >= 1.
std::vector<AttributeEvaluation> lookahead_evaluate(const NodeView& node, const LookaheadOptions& options,
                                                    const ChildSampler& sampler);

// argmin of total over the evaluations; ties go to the first one.
std::optional<AttributeEvaluation> pick_lowest(std::span<const AttributeEvaluation> evaluations);

// Size of the smallest of r SID3 trees per branch; r = 0 falls back to ID3.
ChildSampler size_sampler(std::size_t min_split = 2);
std::optional<Split> lsid3_choose(const NodeView& node, std::size_t r);
std::optional<Split> lsid3_choose(const NodeView& node, std::size_t r, const ChildSampler& sampler);

struct ActParams {
    std::size_t r = 5;
    double w = 1.0;
    double cf = 0.25;
    std::size_t min_split = 2;
};

// Grows an EG2 (Greedy) or SEG2 (Stochastic) tree on the branch and returns its
// estimated total cost weighted by |E_i| / |E|, so that the branch terms and
// the per-instance test cost add up to the per-instance cost of the whole
// subtree rooted at the candidate.
ChildSampler cost_sampler(const ActParams& params);

// ACT split selection; r = 0 falls back to EG2.
std::optional<Split> act_choose(const NodeView& node, const ActParams& params);
std::optional<Split> act_choose(const NodeView& node, const ActParams& params, const ChildSampler& sampler);

// Best cut point of a numeric attribute among its r highest-gain thresholds.
std::optional<AttributeEvaluation> act_choose_numeric(const NodeView& node, std::size_t attribute,
                                                      const ActParams& params, const ChildSampler& sampler);

struct AnytimeConfig {
    std::size_t r = 5;
    std::uint64_t seed = 0;
    bool auto_params = true;  // w and cf from problem_scale unless overridden
    std::optional<double> w;
    std::optional<double> cf;
    std::size_t min_split = 2;
};

// Resolved (w, cf) for a model under the config.
ActParams resolve_params(const AnytimeConfig& config, const CostModel& model);

Tree act_induce(const Dataset& data, std::span<const std::size_t> rows, const CostModel& model,
                const AnytimeConfig& config);
// Growth only, without the pruning pass.
Tree act_grow(const Dataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> attributes,
              const CostModel& model, const ActParams& params, std::uint64_t seed, const ChargeContext& ctx = {});

// LSID3 growth (no pruning).
Tree lsid3_induce(const Dataset& data, std::span<const std::size_t> rows, const CostModel& model, std::size_t r,
                  std::uint64_t seed, std::size_t min_split = 2);

// Bottom-up: a subtree becomes a default-class leaf when
//   EE(m, s, cf) * mc / m  <=  tcost(T, E) + mcost(T)
// with mc the uniform penalty, or the mean off-diagonal penalty otherwise.
// `rows` are the training examples that reach the root of `tree`.
Tree cost_sensitive_prune(Tree tree, const Dataset& data, std::span<const std::size_t> rows, const CostModel& model,
                          double cf, const ChargeContext& ctx = {});

}  // namespace costtree
