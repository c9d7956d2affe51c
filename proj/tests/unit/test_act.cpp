#include <map>
#include <set>

#include "doctest.h"
#include "support.hpp"

#include "costtree/act.hpp"
#include "costtree/generators.hpp"

using namespace costtree;

namespace {

struct Node {
    Dataset data;
    CostModel model;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> attrs;
    ChargeContext ctx;

    NodeView view(std::uint64_t seed = 0) const { return NodeView{data, rows, attrs, ctx, model, seed}; }
};

// a1 separates the classes; a2 agrees with the label on 6 of 8 rows.
Node small_node(std::vector<double> costs = {0.4, 0.4}, double mc = 100) {
    auto d = testsupport::binary_dataset(2);
    for (auto r : std::vector<std::vector<int>>{{0, 0, 0}, {0, 0, 0}, {0, 1, 0}, {0, 0, 0},
                                                 {1, 1, 1}, {1, 1, 1}, {1, 0, 1}, {1, 1, 1}})
        d.add(Example{{double(r[0]), double(r[1])}, static_cast<ClassId>(r[2])});
    auto rows = d.all_rows();
    auto attrs = d.all_attributes();
    return Node{std::move(d), CostModel(costs, {}, CostMatrix::uniform(2, mc)), rows, attrs, {}};
}

Node numeric_node(std::size_t n, std::uint64_t seed) {
    Dataset d({testsupport::numeric_attr("x", 0)}, {"0", "1"});
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) d.add(Example{{double(i)}, static_cast<ClassId>(rng() % 2)});
    auto rows = d.all_rows();
    auto attrs = d.all_attributes();
    return Node{std::move(d), testsupport::flat_costs(1, 1, 2, 10), rows, attrs, {}};
}

}  // namespace

TEST_CASE("lookahead adds the test cost to the best sample of each branch") {
    auto node = small_node();
    // Samples per (attribute, branch): a1 = {4.7, 5.1} and {8.9, 4.9}.
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> table{
        {{0, 0}, {4.7, 5.1}}, {{0, 1}, {8.9, 4.9}}, {{1, 0}, {9, 9}}, {{1, 1}, {9, 9}}};
    std::vector<SampleKind> kinds;
    ChildSampler sampler = [&](const ChildTask& t, SampleKind kind) {
        kinds.push_back(kind);
        return table[{t.split.attribute, t.child}][t.sample];
    };
    LookaheadOptions opts;
    opts.r = 2;
    auto evals = lookahead_evaluate(node.view(), opts, sampler);
    REQUIRE(evals.size() == 2);
    CHECK(evals[0].total == 10.0);
    CHECK(evals[0].child_minima == std::vector<double>{4.7, 4.9});
    CHECK(evals[0].test_cost == 0.4);
    CHECK(evals[0].sampler_calls == 4);
    CHECK(pick_lowest(evals)->split.attribute == 0);
    // One greedy sample, then stochastic ones, per branch.
    CHECK(kinds == std::vector<SampleKind>{SampleKind::Greedy, SampleKind::Stochastic, SampleKind::Greedy,
                                           SampleKind::Stochastic, SampleKind::Greedy, SampleKind::Stochastic,
                                           SampleKind::Greedy, SampleKind::Stochastic});
}

TEST_CASE("sampling tasks carry the branch rows and a fresh context") {
    auto node = small_node();
    std::set<std::uint64_t> seeds;
    ChildSampler sampler = [&](const ChildTask& t, SampleKind) {
        CHECK(t.parent_size == 8);
        CHECK(t.rows.size() == 4);
        CHECK(t.ctx.administered(t.split.attribute));
        CHECK(!node.ctx.administered(t.split.attribute));
        CHECK(std::find(t.attributes.begin(), t.attributes.end(), t.split.attribute) == t.attributes.end());
        for (auto r : t.rows) CHECK(node.data.example(r).values[t.split.attribute] == double(t.child));
        seeds.insert(t.seed);
        return 1.0;
    };
    LookaheadOptions opts;
    opts.r = 3;
    lookahead_evaluate(node.view(7), opts, sampler);
    CHECK(seeds.size() == 2 * 2 * 3);
    CHECK_THROWS(lookahead_evaluate(node.view(), LookaheadOptions{0}, sampler));
}

TEST_CASE("ACT picks a cheaper test when lookahead shows it pays off") {
    // Sampled subtrees cost the same everywhere; only the test price differs.
    ChildSampler flat = [](const ChildTask& t, SampleKind) {
        return t.split.attribute == 0 ? 1.0 : 1.2;
    };
    ActParams p;
    p.r = 1;
    CHECK(act_choose(small_node({0.4, 0.4}).view(), p, flat)->attribute == 0);
    CHECK(act_choose(small_node({2.0, 0.4}).view(), p, flat)->attribute == 1);
}

TEST_CASE("r = 0 falls back to the greedy criteria") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        auto d = generate_xor(2, 3, 40, rng());
        auto rows = d.all_rows();
        auto attrs = d.all_attributes();
        std::vector<double> costs(d.num_attributes());
        for (auto& c : costs) c = 1 + rng() % 50;
        CostModel model(costs, {}, CostMatrix::uniform(2, 100));
        ChargeContext ctx;
        NodeView v{d, rows, attrs, ctx, model};
        ActParams p;
        p.r = 0;
        p.w = 0.7;
        auto eg2 = choose_greedy(v, Criterion::EG2, 0.7);
        CHECK(act_choose(v, p) == std::optional<Split>(eg2->split));
        auto id3 = choose_greedy(v, Criterion::ID3, 0);
        CHECK(lsid3_choose(v, 0) == std::optional<Split>(id3->split));

        InducerConfig cfg;
        cfg.criterion = Criterion::EG2;
        cfg.w = 0.7;
        CHECK(act_grow(d, rows, attrs, model, p, 3) == grow(d, rows, attrs, model, cfg));
        CHECK(lsid3_induce(d, rows, model, 0, 3) == grow(d, rows, attrs, model, InducerConfig{}));
    }
}

TEST_CASE("numeric attributes get r cut points with one greedy sample each") {
    auto node = numeric_node(40, 3);
    const auto cuts = candidate_thresholds(node.data, node.rows, 0);
    REQUIRE(cuts.size() > 8);
    for (std::size_t r : {1u, 3u, 8u}) {
        std::set<double> thresholds;
        std::size_t greedy = 0;
        ChildSampler sampler = [&](const ChildTask& t, SampleKind kind) {
            thresholds.insert(t.split.threshold);
            greedy += kind == SampleKind::Greedy;
            CHECK(t.sample == 0);
            return t.split.threshold;  // favours the lowest cut
        };
        ActParams p;
        p.r = r;
        auto ev = act_choose_numeric(node.view(), 0, p, sampler);
        REQUIRE(ev);
        CHECK(ev->sampler_calls == 2 * r);
        CHECK(greedy == 2 * r);
        CHECK(thresholds.size() == r);
        auto top = top_thresholds(node.data, node.rows, 0, r);
        for (const auto& t : top) CHECK(thresholds.count(t.threshold) == 1);
        CHECK(ev->split.threshold == *thresholds.begin());
    }
    auto few = numeric_node(3, 1);
    ActParams big;
    big.r = 50;
    ChildSampler unit = [](const ChildTask&, SampleKind) { return 1.0; };
    auto ev = act_choose_numeric(few.view(), 0, big, unit);
    if (ev) CHECK(ev->sampler_calls == 2 * candidate_thresholds(few.data, few.rows, 0).size());
}

TEST_CASE("cost sampler scales the branch estimate by its share of the node") {
    auto node = small_node({3, 5}, 50);
    ActParams p;
    p.r = 1;
    p.w = 1;
    p.cf = 0.25;
    auto sampler = cost_sampler(p);
    auto parts = partition(node.data, node.rows, Split{1, false, 0});
    std::vector<std::size_t> rest{0};
    auto ctx = node.ctx;
    ctx.administer(1, node.model);
    for (std::size_t i = 0; i < 2; ++i) {
        ChildTask task{node.data, parts[i], rest, ctx, node.model, 8, Split{1, false, 0}, i, 0, 9};
        InducerConfig cfg;
        cfg.criterion = Criterion::EG2;
        Tree t = grow(node.data, parts[i], rest, node.model, cfg, ctx);
        auto est = total_cost(t, node.data, parts[i], node.model, 0.25, ctx);
        CHECK(sampler(task, SampleKind::Greedy) == doctest::Approx(est.total * parts[i].size() / 8.0));
    }
}

TEST_CASE("LSID3 finds the parity attributes that ID3 misses") {
    // 3-XOR with irrelevant bits: every single bit has near-zero gain, so ID3
    // grows large trees. Lookahead over sampled subtree sizes should shrink them.
    const int trials = 20;
    std::vector<double> mean_size(4);
    const std::vector<std::size_t> rs{0, 1, 4, 8};
    for (int trial = 0; trial < trials; ++trial) {
        auto d = generate_xor(3, 4, 64, 100 + trial);
        auto rows = d.all_rows();
        auto model = testsupport::flat_costs(d.num_attributes(), 1, 2, 1);
        for (std::size_t k = 0; k < rs.size(); ++k)
            mean_size[k] += double(tree_size(lsid3_induce(d, rows, model, rs[k], trial))) / trials;
    }
    MESSAGE("mean sizes r=0,1,4,8: " << mean_size[0] << " " << mean_size[1] << " " << mean_size[2] << " "
                                     << mean_size[3]);
    CHECK(mean_size[3] < mean_size[0]);
    CHECK(mean_size[2] < mean_size[0]);
    CHECK(mean_size[3] <= mean_size[1]);
    // A perfect 3-XOR tree has 15 nodes.
    CHECK(mean_size[3] >= 15);
}

TEST_CASE("ACT induction is deterministic in its seed") {
    auto d = generate_multi_xor(120, 2);
    auto rows = d.all_rows();
    auto model = assign_costs(d, CostAssignmentParams{}, 2);
    model = CostModel(model.test_costs(), model.groups(), CostMatrix::uniform(2, 500));
    AnytimeConfig cfg;
    cfg.r = 2;
    cfg.seed = 11;
    auto a = act_induce(d, rows, model, cfg);
    CHECK(act_induce(d, rows, model, cfg) == a);
    CHECK_THROWS(act_induce(d, std::vector<std::size_t>{}, model, cfg));
}

TEST_CASE("parameter resolution") {
    auto model = testsupport::flat_costs(4, 10, 2, 80);
    AnytimeConfig cfg;
    auto p = resolve_params(cfg, model);
    auto s = problem_scale(model);
    CHECK(p.w == s.w);
    CHECK(p.cf == s.cf);
    cfg.w = 2.0;
    cfg.cf = 0.1;
    p = resolve_params(cfg, model);
    CHECK(p.w == 2.0);
    CHECK(p.cf == 0.1);
    auto free_tests = testsupport::flat_costs(4, 0, 2, 80);
    AnytimeConfig plain;
    CHECK(resolve_params(plain, free_tests).w == doctest::Approx(0.5));
}

TEST_CASE("cost-sensitive pruning") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 25; ++trial) {
        auto d = generate_xor(2, 3, 60, rng());
        auto rows = d.all_rows();
        auto attrs = d.all_attributes();
        const double cost = 1 + rng() % 30;
        const double mc = 10 + rng() % 300;
        auto model = testsupport::flat_costs(d.num_attributes(), cost, 2, mc);
        ActParams p;
        p.r = 1;
        Tree grown = act_grow(d, rows, attrs, model, p, rng());
        Tree pruned = cost_sensitive_prune(grown, d, rows, model, p.cf);
        CHECK(tree_size(pruned) <= tree_size(grown));
        CHECK(cost_sensitive_prune(pruned, d, rows, model, p.cf) == pruned);
        CHECK(total_cost(pruned, d, rows, model, p.cf).total <=
              total_cost(grown, d, rows, model, p.cf).total + 1e-9);
    }
    // Tests dearer than any possible error cannot pay for themselves.
    auto d = generate_xor(2, 0, 40, 1);
    auto rows = d.all_rows();
    auto attrs = d.all_attributes();
    auto dear = testsupport::flat_costs(2, 1000, 2, 10);
    ActParams p;
    p.r = 1;
    Tree full = tdidt(d, rows, attrs, dear, [](const NodeView& v) -> std::optional<Split> {
        auto c = choose_greedy(v, Criterion::ID3, 0);
        if (!c) return std::nullopt;
        return c->split;
    });
    CHECK(!full.is_leaf());
    CHECK(cost_sensitive_prune(full, d, rows, dear, 0.25).is_leaf());
    AnytimeConfig cfg;
    cfg.r = 1;
    CHECK(act_induce(d, rows, dear, cfg).is_leaf());
}

TEST_CASE("pick_lowest keeps the first of equal totals") {
    std::vector<AttributeEvaluation> evs(3);
    evs[0].split.attribute = 4;
    evs[0].total = 2;
    evs[1].split.attribute = 1;
    evs[1].total = 1;
    evs[2].split.attribute = 2;
    evs[2].total = 1;
    CHECK(pick_lowest(evs)->split.attribute == 1);
    CHECK(!pick_lowest(std::vector<AttributeEvaluation>{}));
}
