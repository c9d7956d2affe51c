#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "costtree/costs.hpp"
#include "costtree/error.hpp"

using namespace costtree;
using testsupport::set_charge_oracle;

namespace {

// Tests 0..3: 0 and 1 share a group with discount 6; 2 and 3 stand alone.
CostModel grouped_model() {
    return CostModel({10, 8, 5, 0}, {TestGroup{"blood", {0, 1}, 6}}, CostMatrix::uniform(2, 100));
}

CostModel random_model(std::mt19937_64& rng, std::size_t n_tests) {
    std::uniform_real_distribution<double> cost(0.5, 100);
    std::vector<double> costs(n_tests);
    for (auto& c : costs) c = cost(rng);
    std::size_t n_groups = rng() % 4;
    std::vector<TestGroup> groups(n_groups);
    for (std::size_t a = 0; a < n_tests; ++a) {
        auto pick = rng() % (n_groups + 1);
        if (pick < n_groups) groups[pick].members.push_back(a);
    }
    std::uniform_real_distribution<double> frac(0, 0.95);
    for (auto& g : groups) {
        g.name = "g";
        if (g.members.empty()) continue;
        double cheapest = 1e300;
        for (auto a : g.members) cheapest = std::min(cheapest, costs[a]);
        g.discount = frac(rng) * cheapest;
    }
    return CostModel(costs, groups, CostMatrix::uniform(2, 1));
}

}  // namespace

TEST_CASE("context cost: full, discounted, then free") {
    auto m = grouped_model();
    ChargeContext ctx;
    CHECK(m.context_cost(0, ctx) == 10);
    CHECK(ctx.administer(0, m) == 10);
    CHECK(m.context_cost(0, ctx) == 0);
    CHECK(m.context_cost(1, ctx) == 8 - 6);
    CHECK(m.context_cost(2, ctx) == 5);
    auto [c, next] = m.charge(1, ctx);
    CHECK(c == 2);
    CHECK(next.administered(1));
    CHECK(!ctx.administered(1));
    CHECK(next.tests() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("group order does not matter for the total") {
    auto m = grouped_model();
    std::vector<std::size_t> ab{0, 1}, ba{1, 0};
    CHECK(charge_sequence(ab, m) == 12);
    CHECK(charge_sequence(ba, m) == 12);
    CHECK(m.total_test_cost() == 10 + 2 + 5 + 0);
}

TEST_CASE("repeated tests are charged once") {
    auto m = grouped_model();
    std::vector<std::size_t> seq{2, 2, 0, 2, 1, 0};
    CHECK(charge_sequence(seq, m) == 5 + 10 + 2);
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(CostMatrix({{0, 1}, {1}}), DataError);
    CHECK_THROWS_AS(CostMatrix({{1, 1}, {1, 0}}), DataError);
    CHECK_THROWS_AS(CostMatrix({{0, -1}, {1, 0}}), DataError);
    CHECK_THROWS_AS(CostModel({1, 2}, {TestGroup{"g", {0, 1}, 1.5}}, CostMatrix::uniform(2, 1)), DataError);
    CHECK_THROWS_AS(CostModel({1, 2}, {TestGroup{"g", {0}, 0}, TestGroup{"h", {0}, 0}}, CostMatrix::uniform(2, 1)),
                    DataError);
    CHECK_THROWS_AS(CostModel({-1}, {}, CostMatrix::uniform(2, 1)), DataError);
    CHECK_THROWS_AS(grouped_model().base_cost(9), std::out_of_range);
}

TEST_CASE("misclassification cost reads the matrix as (actual, predicted)") {
    CostModel m({1}, {}, CostMatrix({{0, 199}, {1, 0}}));
    // Class 0 = positive: predicting 1 for a true 0 is a false negative.
    CHECK(m.misclassification_cost(1, 0) == 199);
    CHECK(m.misclassification_cost(0, 1) == 1);
    CHECK(!m.matrix().is_uniform());
    CHECK(m.matrix().off_diagonal_mean() == 100);
    CHECK(CostMatrix::uniform(3, 7).is_uniform());
}

TEST_CASE("charging properties on random models and paths") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        auto m = random_model(rng, 1 + rng() % 8);
        std::vector<std::size_t> path;
        for (std::size_t k = 0, n = rng() % 12; k < n; ++k) path.push_back(rng() % m.num_tests());
        std::set<std::size_t> as_set(path.begin(), path.end());
        const double oracle = set_charge_oracle(as_set, m);
        const double seq = charge_sequence(path, m);
        CHECK(seq == doctest::Approx(oracle).epsilon(1e-12));
        std::shuffle(path.begin(), path.end(), rng);
        CHECK(charge_sequence(path, m) == doctest::Approx(oracle).epsilon(1e-12));
        // Every marginal charge is positive for a positive base cost.
        ChargeContext ctx;
        for (auto a : path) {
            double c = ctx.administer(a, m);
            CHECK(c >= 0);
        }
    }
}

TEST_CASE("cost file round trip") {
    auto data = testsupport::binary_dataset(4);
    CostModel m({10, 8, 5, 0.25}, {TestGroup{"blood", {0, 1}, 6}}, CostMatrix({{0, 3.5}, {1, 0}}));
    std::ostringstream out;
    write_cost_model(out, m, data);
    std::istringstream in(out.str());
    auto back = read_cost_model(in, data);
    CHECK(back.test_costs() == m.test_costs());
    CHECK(back.groups().size() == 1);
    CHECK(back.groups()[0].members == std::vector<std::size_t>{0, 1});
    CHECK(back.groups()[0].discount == 6);
    CHECK(back.matrix().rows() == m.matrix().rows());
}

TEST_CASE("cost file errors") {
    auto data = testsupport::binary_dataset(2);
    auto load = [&](const std::string& text) {
        std::istringstream in(text);
        return read_cost_model(in, data);
    };
    CHECK_THROWS_AS(load("{"), DataError);
    CHECK_THROWS_AS(load(R"({"tests":[{"name":"a1","cost":1}],"matrix":[[0,1],[1,0]]})"), DataError);
    CHECK_THROWS_AS(load(R"({"tests":[{"name":"a1","cost":1},{"name":"zz","cost":1}],"matrix":[[0,1],[1,0]]})"),
                    DataError);
    CHECK_THROWS_AS(load(R"({"tests":[{"name":"a1","cost":1},{"name":"a2","cost":1,"group":"g"}],"matrix":[[0,1],[1,0]]})"),
                    DataError);
    CHECK_THROWS_AS(load(R"({"tests":[{"name":"a1","cost":1},{"name":"a2","cost":1}],"matrix":[[0,1,1],[1,0,1],[1,1,0]]})"),
                    DataError);
    auto ok = load(R"({"tests":[{"name":"a2","cost":3},{"name":"a1","cost":1}],"matrix":[[0,1],[2,0]]})");
    CHECK(ok.base_cost(1) == 3);
    CHECK(ok.misclassification_cost(0, 1) == 2);
    std::istringstream bare("[[0,5],[5,0]]");
    CHECK(read_cost_matrix(bare).is_uniform());
}

TEST_CASE("scaling multiplies every cost") {
    auto m = grouped_model().with_scaled_costs(3);
    CHECK(m.base_cost(0) == 30);
    CHECK(m.groups()[0].discount == 18);
    CHECK(m.matrix()(0, 1) == 300);
    CHECK(m.total_test_cost() == 3 * grouped_model().total_test_cost());
}
