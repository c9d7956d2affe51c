#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/tree.hpp"

namespace costtree {

// Complete learners: growth criterion plus the pruning each one uses.
//   id3    gain, unpruned
//   c45    gain, error-based pruning
//   lsid3  size-lookahead, error-based pruning
//   idx    gain / cost, error-based pruning
//   csid3  gain^2 / cost, error-based pruning
//   eg2    ICF, error-based pruning
//   dtmc   immediate cost reduction, stops when nothing reduces cost
//   act    cost-lookahead, cost-sensitive pruning
enum class Algorithm { ID3, C45, LSID3, IDX, CSID3, EG2, DTMC, ACT };

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);
const std::vector<Algorithm>& all_algorithms();
// Whether the sample size r changes what the learner does.
bool is_anytime(Algorithm a);

struct LearnerOptions {
    std::size_t r = 5;
    std::uint64_t seed = 0;
    std::optional<double> w;   // ACT override; auto from costs otherwise
    std::optional<double> cf;  // ACT override; auto from costs otherwise
    double greedy_w = 1.0;     // EG2 bias
    double prune_cf = 0.25;    // error-based pruning confidence
    std::size_t min_split = 2;
};

Tree train(Algorithm algorithm, const Dataset& data, std::span<const std::size_t> rows, const CostModel& model,
           const LearnerOptions& options);

}  // namespace costtree
