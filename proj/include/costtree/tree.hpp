#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"

namespace costtree {

// A decision tree node. Internal nodes test a nominal attribute (one child per
// domain value) or compare a numeric attribute to a threshold (children
// {<=, >}). Every node keeps the per-class counts of the training examples
// that reached it and its default-class label.
struct Tree {
    enum class Kind { Leaf, Nominal, Numeric };

    Kind kind = Kind::Leaf;
    std::size_t attribute = 0;
    double threshold = 0.0;
    ClassId label = 0;
    std::vector<std::size_t> counts;
    std::vector<Tree> children;

    static Tree leaf(std::vector<std::size_t> counts, ClassId label);

    bool is_leaf() const { return kind == Kind::Leaf; }
    std::size_t examples() const;
    // Index of the branch an example with attribute value `v` follows.
    std::size_t branch(double v) const;

    friend bool operator==(const Tree&, const Tree&) = default;
};

struct PathCharge {
    ChargeContext tests;
    double total = 0.0;
};

struct Classification {
    ClassId label = 0;
    PathCharge charge;
};

// Follows the tests for `values` down to a leaf, charging every test in
// context. `start` holds tests already administered above the tree root.
Classification classify(const Tree& tree, std::span<const double> values, const CostModel& model,
                        const ChargeContext& start = {});

// Mean context-charged test cost of the given examples.
double average_tcost(const Tree& tree, const Dataset& data, std::span<const std::size_t> rows,
                     const CostModel& model, const ChargeContext& start = {});

// argmin_c sum_i counts[i] * cost(actual=i, predicted=c); ties go to the lowest class.
ClassId default_class(std::span<const std::size_t> counts, const CostModel& model);
// Cost of labelling every counted example with `label`.
double labelling_cost(std::span<const std::size_t> counts, ClassId label, const CostModel& model);

std::size_t tree_size(const Tree& tree);
std::size_t tree_leaves(const Tree& tree);
std::size_t tree_depth(const Tree& tree);

// Indented text, one node per line:
//   [<branch>: ]leaf <label> <c0,c1,...>
//   [<branch>: ]split <attr> <label> <c0,c1,...>
//   [<branch>: ]split <attr><=<thr> <label> <c0,c1,...>
// where <branch> is `attr=value`, `attr<=thr` or `attr>thr`.
void write_tree(std::ostream& out, const Tree& tree, const Dataset& schema);
std::string tree_to_string(const Tree& tree, const Dataset& schema);
Tree read_tree(std::istream& in, const Dataset& schema);
Tree tree_from_string(const std::string& text, const Dataset& schema);

}  // namespace costtree
