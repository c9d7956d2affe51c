#pragma once

// Shared fixtures and independent oracles for the unit and acceptance tests.
// Oracles here deliberately avoid the library's own helpers.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/tree.hpp"

namespace testsupport {

using namespace costtree;

// P[Bin(m, p) <= s] by direct term recursion in long double.
inline long double binomial_cdf_direct(std::size_t s, std::size_t m, long double p) {
    if (p <= 0) return 1;
    if (p >= 1) return s >= m ? 1 : 0;
    long double term = std::pow(1 - p, static_cast<long double>(m));  // k = 0
    long double sum = term;
    for (std::size_t k = 1; k <= s; ++k) {
        term *= static_cast<long double>(m - k + 1) / static_cast<long double>(k) * p / (1 - p);
        sum += term;
    }
    return sum;
}

// m times the p solving P[Bin(m, p) <= s] = cf, by plain bisection.
inline double expected_error_oracle(std::size_t m, std::size_t s, double cf) {
    if (m == 0) return 0;
    if (s >= m) return static_cast<double>(m);
    long double lo = 0, hi = 1;
    for (int i = 0; i < 300; ++i) {
        long double mid = (lo + hi) / 2;
        if (binomial_cdf_direct(s, m, mid) > cf)
            lo = mid;
        else
            hi = mid;
    }
    return static_cast<double>((lo + hi) / 2 * m);
}

inline Attribute binary_attr(const std::string& name, std::size_t index) {
    return Attribute{name, AttributeKind::Nominal, {"0", "1"}, index};
}

inline Attribute numeric_attr(const std::string& name, std::size_t index) {
    return Attribute{name, AttributeKind::Numeric, {}, index};
}

inline Dataset binary_dataset(std::size_t n_attrs, std::vector<std::string> classes = {"0", "1"}) {
    std::vector<Attribute> schema;
    for (std::size_t i = 0; i < n_attrs; ++i) schema.push_back(binary_attr("a" + std::to_string(i + 1), i));
    return Dataset(schema, std::move(classes));
}

// Plain test costs, no groups, uniform penalty.
inline CostModel flat_costs(std::size_t n_attrs, double cost, std::size_t classes, double mc) {
    return CostModel(std::vector<double>(n_attrs, cost), {}, CostMatrix::uniform(classes, mc));
}

// Charge of a set of tests computed from scratch: full price for ungrouped
// tests, and for each group one full-price member plus discounted others.
inline double set_charge_oracle(const std::set<std::size_t>& tests, const CostModel& model) {
    double total = 0;
    std::map<std::size_t, std::size_t> per_group;
    for (auto t : tests) {
        total += model.base_cost(t);
        if (auto g = model.group_of(t)) ++per_group[*g];
    }
    for (auto [g, k] : per_group) total -= static_cast<double>(k - 1) * model.groups()[g].discount;
    return total;
}

// A scratch directory removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        std::random_device rd;
        path = std::filesystem::temp_directory_path() /
               ("costtree-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testsupport
