#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "costtree/dataset.hpp"

namespace costtree {

using GroupId = std::size_t;

struct TestGroup {
    std::string name;
    std::vector<std::size_t> members;
    double discount = 0.0;  // absolute amount taken off every member after the first
};

// Square penalty table. Stored and indexed as cost(actual, predicted).
class CostMatrix {
public:
    CostMatrix() = default;
    explicit CostMatrix(std::vector<std::vector<double>> rows);
    static CostMatrix uniform(std::size_t classes, double mc);

    std::size_t size() const { return rows_.size(); }
    double operator()(ClassId actual, ClassId predicted) const { return rows_[actual][predicted]; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }

    // True when every off-diagonal entry holds the same value.
    bool is_uniform() const;
    double max_entry() const;
    double off_diagonal_sum() const;
    double off_diagonal_mean() const;

private:
    std::vector<std::vector<double>> rows_;
};

class ChargeContext;

// Test costs, groups and misclassification penalties. Immutable once built.
class CostModel {
public:
    CostModel() = default;
    CostModel(std::vector<double> test_costs, std::vector<TestGroup> groups, CostMatrix matrix);

    std::size_t num_tests() const { return test_costs_.size(); }
    double base_cost(std::size_t attr) const;
    std::optional<GroupId> group_of(std::size_t attr) const;
    const std::vector<double>& test_costs() const { return test_costs_; }
    const std::vector<TestGroup>& groups() const { return groups_; }
    const CostMatrix& matrix() const { return matrix_; }
    std::size_t num_classes() const { return matrix_.size(); }

    // Marginal cost of administering `attr` after the tests already in `ctx`.
    double context_cost(std::size_t attr, const ChargeContext& ctx) const;
    std::pair<double, ChargeContext> charge(std::size_t attr, const ChargeContext& ctx) const;
    // Penalty of predicting `predicted` for an instance whose class is `actual`.
    double misclassification_cost(ClassId predicted, ClassId actual) const;

    // Cost of administering every test once, group discounts included.
    double total_test_cost() const;

    CostModel with_matrix(CostMatrix m) const;
    CostModel with_scaled_costs(double factor) const;

private:
    std::vector<double> test_costs_;
    std::vector<TestGroup> groups_;
    std::vector<std::optional<GroupId>> membership_;
    CostMatrix matrix_;
};

// The set of tests already administered on a path, plus the groups they opened.
class ChargeContext {
public:
    bool administered(std::size_t attr) const { return attr < tests_.size() && tests_[attr]; }
    bool group_charged(GroupId g) const { return g < groups_.size() && groups_[g]; }
    // Records `attr` (and its group) as administered; returns the marginal cost paid.
    double administer(std::size_t attr, const CostModel& model);
    std::vector<std::size_t> tests() const;
    std::size_t size() const;

    friend bool operator==(const ChargeContext& a, const ChargeContext& b) { return a.tests() == b.tests(); }

private:
    std::vector<bool> tests_;
    std::vector<bool> groups_;
};

// Sum of charges for administering `attrs` in order, starting from `ctx`.
double charge_sequence(std::span<const std::size_t> attrs, const CostModel& model, ChargeContext ctx = {});

// JSON cost file: {"tests": [{name, cost, group?}], "groups": [{name, discount_amount}],
// "matrix": [[...]]}, matrix rows = true class, columns = predicted class.
CostModel read_cost_model(std::istream& in, const Dataset& data);
CostModel load_cost_model(const std::filesystem::path& path, const Dataset& data);
void write_cost_model(std::ostream& out, const CostModel& model, const Dataset& data);
void save_cost_model(const std::filesystem::path& path, const CostModel& model, const Dataset& data);
CostMatrix read_cost_matrix(std::istream& in);
CostMatrix load_cost_matrix(const std::filesystem::path& path);

}  // namespace costtree
