#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/random.hpp"
#include "costtree/tree.hpp"

namespace costtree {

// Shannon entropy in bits.
double entropy(std::span<const std::size_t> counts);

// A test: a nominal attribute, or a numeric attribute cut at `threshold`.
struct Split {
    std::size_t attribute = 0;
    bool numeric = false;
    double threshold = 0.0;

    std::size_t arity(const Dataset& data) const { return data.attribute(attribute).arity(); }
    std::size_t branch(double value) const;
    friend bool operator==(const Split&, const Split&) = default;
};

std::vector<std::vector<std::size_t>> partition(const Dataset& data, std::span<const std::size_t> rows,
                                                const Split& split);

// Information gain of splitting `rows` on a nominal attribute.
double info_gain(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute);
// Information gain of the binary cut `value <= threshold`.
double info_gain(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute, double threshold);
double info_gain(const Dataset& data, std::span<const std::size_t> rows, const Split& split);

struct ThresholdGain {
    double threshold = 0.0;
    double gain = 0.0;
};

// Candidate cut points of a numeric attribute: midpoints between consecutive
// distinct values, skipping pairs whose value groups are pure in the same
// class. Sorted by threshold.
std::vector<ThresholdGain> candidate_thresholds(const Dataset& data, std::span<const std::size_t> rows,
                                                std::size_t attribute);

// Up to `r` thresholds with the highest gain (ties: lower threshold first).
std::vector<ThresholdGain> top_thresholds(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute,
                                          std::size_t r);

// Best gain over all tests the attribute offers (0 if it cannot split `rows`).
double best_gain(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute);

// EG2's information cost function: (2^gain - 1) / (cost + 1)^w.
double icf(double gain, double cost, double w);

struct SplitCandidate {
    Split split;
    double gain = 0.0;
    double cost = 0.0;   // context cost of the test
    double score = 0.0;  // criterion-specific
};

// Everything a split chooser may look at.
struct NodeView {
    const Dataset& data;
    std::span<const std::size_t> rows;
    std::span<const std::size_t> attributes;
    const ChargeContext& ctx;
    const CostModel& model;
    std::uint64_t seed = 0;  // stream derived from the node's path
};

// Tests that separate the node's rows into at least two non-empty branches.
// Numeric attributes are offered at their best-gain threshold. Ordered by
// attribute index.
std::vector<SplitCandidate> split_candidates(const NodeView& node);

enum class Criterion { ID3, SID3, EG2, SEG2, IDX, CSID3, DTMC };

std::string_view to_string(Criterion c);
Criterion criterion_from_string(std::string_view name);

struct InducerConfig {
    Criterion criterion = Criterion::ID3;
    double w = 1.0;
    double cf = 0.25;
    std::uint64_t seed = 0;
    std::size_t min_split = 2;

    void validate() const;
};

// Deterministic argmax of the criterion score (ID3, EG2, IDX, CSID3);
// ties go to the lowest attribute index. Empty when nothing can split.
std::optional<SplitCandidate> choose_greedy(const NodeView& node, Criterion criterion, double w);

// Draws an index with probability proportional to `weights`; uniform when
// every weight is zero.
std::size_t sample_proportional(std::span<const double> weights, Rng& rng);

std::optional<SplitCandidate> choose_sid3(const NodeView& node, Rng& rng);
std::optional<SplitCandidate> choose_seg2(const NodeView& node, double w, Rng& rng);

// Split with the largest reduction of training-set total cost, or none when
// no split reduces it (DTMC stops growing there). score = reduction.
std::optional<SplitCandidate> choose_dtmc(const NodeView& node);

using SplitChooser = std::function<std::optional<Split>(const NodeView&)>;

// Generic top-down growth. Stops at pure nodes, when no attribute is left,
// below `min_split` examples, or when the chooser declines. Nominal attributes
// leave the candidate set below their own split; numeric ones stay.
Tree tdidt(const Dataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> attributes,
           const CostModel& model, const SplitChooser& chooser, std::size_t min_split = 2,
           const ChargeContext& ctx = {}, std::uint64_t seed = 0);

// Grows a tree with one of the greedy or stochastic criteria.
Tree grow(const Dataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> attributes,
          const CostModel& model, const InducerConfig& config, const ChargeContext& ctx = {});

// C4.5-style error-based pruning on the stored counts.
Tree error_based_prune(Tree tree, double cf);

}  // namespace costtree
