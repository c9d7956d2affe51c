#include "costtree/act.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace costtree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> without(std::span<const std::size_t> attrs, std::size_t a) {
    std::vector<std::size_t> out;
    out.reserve(attrs.size());
    for (auto x : attrs)
        if (x != a) out.push_back(x);
    return out;
}

// Scores one concrete split: r samples per branch for nominal tests, or a
// single sample per branch for one numeric cut point.
AttributeEvaluation evaluate_split(const NodeView& node, const SplitCandidate& cand, std::size_t samples_per_branch,
                                   std::size_t cut_index, const LookaheadOptions& options,
                                   const ChildSampler& sampler) {
    AttributeEvaluation ev;
    ev.split = cand.split;
    ev.test_cost = options.charge_test_cost ? cand.cost : 0.0;

    const auto parts = partition(node.data, node.rows, cand.split);
    const auto child_attrs = cand.split.numeric ? std::vector<std::size_t>(node.attributes.begin(), node.attributes.end())
                                                : without(node.attributes, cand.split.attribute);
    auto child_ctx = node.ctx;
    child_ctx.administer(cand.split.attribute, node.model);

    ev.total = ev.test_cost;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        double best = kInf;
        for (std::size_t k = 0; k < samples_per_branch; ++k) {
            ChildTask task{node.data,   parts[i],          child_attrs, child_ctx, node.model, node.rows.size(),
                           cand.split,  i,                 k,
                           derive_seed(node.seed, {cand.split.attribute, cut_index, i, k})};
            auto kind = (k == 0 && options.greedy_first) ? SampleKind::Greedy : SampleKind::Stochastic;
            best = std::min(best, sampler(task, kind));
            ++ev.sampler_calls;
        }
        ev.child_minima.push_back(best);
        ev.total += best;
    }
    return ev;
}

std::optional<AttributeEvaluation> evaluate_numeric(const NodeView& node, SplitCandidate cand,
                                                    const LookaheadOptions& options, const ChildSampler& sampler) {
    std::optional<AttributeEvaluation> best;
    std::size_t calls = 0;
    auto cuts = top_thresholds(node.data, node.rows, cand.split.attribute, options.r);
    for (std::size_t j = 0; j < cuts.size(); ++j) {
        cand.split.threshold = cuts[j].threshold;
        cand.gain = cuts[j].gain;
        auto ev = evaluate_split(node, cand, 1, j, options, sampler);
        calls += ev.sampler_calls;
        if (!best || ev.total < best->total) best = std::move(ev);
    }
    if (best) best->sampler_calls = calls;
    return best;
}

}  // namespace

std::vector<AttributeEvaluation> lookahead_evaluate(const NodeView& node, const LookaheadOptions& options,
                                                    const ChildSampler& sampler) {
    if (options.r == 0) throw std::invalid_argument("lookahead needs a sample size of at least 1");
    std::vector<AttributeEvaluation> out;
    for (const auto& cand : split_candidates(node)) {
        if (cand.split.numeric) {
            if (auto ev = evaluate_numeric(node, cand, options, sampler)) out.push_back(std::move(*ev));
        } else {
            out.push_back(evaluate_split(node, cand, options.r, 0, options, sampler));
        }
    }
    return out;
}

std::optional<AttributeEvaluation> pick_lowest(std::span<const AttributeEvaluation> evaluations) {
    const AttributeEvaluation* best = nullptr;
    for (const auto& ev : evaluations)
        if (!best || ev.total < best->total) best = &ev;
    if (!best) return std::nullopt;
    return *best;
}

ChildSampler size_sampler(std::size_t min_split) {
    return [min_split](const ChildTask& task, SampleKind kind) -> double {
        if (task.rows.empty()) return 1.0;
        InducerConfig cfg;
        cfg.criterion = kind == SampleKind::Greedy ? Criterion::ID3 : Criterion::SID3;
        cfg.seed = task.seed;
        cfg.min_split = min_split;
        return static_cast<double>(tree_size(grow(task.data, task.rows, task.attributes, task.model, cfg, task.ctx)));
    };
}

std::optional<Split> lsid3_choose(const NodeView& node, std::size_t r, const ChildSampler& sampler) {
    if (r == 0) {
        auto c = choose_greedy(node, Criterion::ID3, 0.0);
        if (!c) return std::nullopt;
        return c->split;
    }
    LookaheadOptions opts;
    opts.r = r;
    opts.greedy_first = false;
    opts.charge_test_cost = false;
    auto evals = lookahead_evaluate(node, opts, sampler);
    auto best = pick_lowest(evals);
    if (!best) return std::nullopt;
    return best->split;
}

std::optional<Split> lsid3_choose(const NodeView& node, std::size_t r) {
    return lsid3_choose(node, r, size_sampler());
}

ChildSampler cost_sampler(const ActParams& params) {
    return [params](const ChildTask& task, SampleKind kind) -> double {
        if (task.rows.empty()) return 0.0;
        InducerConfig cfg;
        cfg.criterion = kind == SampleKind::Greedy ? Criterion::EG2 : Criterion::SEG2;
        cfg.w = params.w;
        cfg.cf = params.cf;
        cfg.seed = task.seed;
        cfg.min_split = params.min_split;
        Tree t = grow(task.data, task.rows, task.attributes, task.model, cfg, task.ctx);
        auto est = total_cost(t, task.data, task.rows, task.model, params.cf, task.ctx);
        return est.total * static_cast<double>(task.rows.size()) / static_cast<double>(task.parent_size);
    };
}

std::optional<Split> act_choose(const NodeView& node, const ActParams& params, const ChildSampler& sampler) {
    if (params.r == 0) {
        auto c = choose_greedy(node, Criterion::EG2, params.w);
        if (!c) return std::nullopt;
        return c->split;
    }
    LookaheadOptions opts;
    opts.r = params.r;
    auto evals = lookahead_evaluate(node, opts, sampler);
    auto best = pick_lowest(evals);
    if (!best) return std::nullopt;
    return best->split;
}

std::optional<Split> act_choose(const NodeView& node, const ActParams& params) {
    return act_choose(node, params, cost_sampler(params));
}

std::optional<AttributeEvaluation> act_choose_numeric(const NodeView& node, std::size_t attribute,
                                                      const ActParams& params, const ChildSampler& sampler) {
    if (node.data.attribute(attribute).nominal()) throw std::invalid_argument("act_choose_numeric: nominal attribute");
    if (params.r == 0) throw std::invalid_argument("act_choose_numeric: r must be at least 1");
    SplitCandidate cand;
    cand.split = Split{attribute, true, 0.0};
    cand.cost = node.model.context_cost(attribute, node.ctx);
    LookaheadOptions opts;
    opts.r = params.r;
    return evaluate_numeric(node, cand, opts, sampler);
}

ActParams resolve_params(const AnytimeConfig& config, const CostModel& model) {
    ActParams p;
    p.r = config.r;
    p.min_split = config.min_split;
    if (config.auto_params) {
        double tc = model.total_test_cost();
        auto scale = tc > 0.0 ? problem_scale(model) : scale_for_ratio(kInf);
        p.w = scale.w;
        p.cf = scale.cf;
    }
    if (config.w) p.w = *config.w;
    if (config.cf) p.cf = *config.cf;
    return p;
}

Tree act_grow(const Dataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> attributes,
              const CostModel& model, const ActParams& params, std::uint64_t seed, const ChargeContext& ctx) {
    auto sampler = cost_sampler(params);
    SplitChooser chooser = [&](const NodeView& v) { return act_choose(v, params, sampler); };
    return tdidt(data, rows, attributes, model, chooser, params.min_split, ctx, seed);
}

Tree act_induce(const Dataset& data, std::span<const std::size_t> rows, const CostModel& model,
                const AnytimeConfig& config) {
    if (rows.empty()) throw std::invalid_argument("act_induce needs training examples");
    auto params = resolve_params(config, model);
    auto attrs = data.all_attributes();
    Tree t = act_grow(data, rows, attrs, model, params, config.seed);
    return cost_sensitive_prune(std::move(t), data, rows, model, params.cf);
}

Tree lsid3_induce(const Dataset& data, std::span<const std::size_t> rows, const CostModel& model, std::size_t r,
                  std::uint64_t seed, std::size_t min_split) {
    auto sampler = size_sampler(min_split);
    SplitChooser chooser = [&](const NodeView& v) { return lsid3_choose(v, r, sampler); };
    auto attrs = data.all_attributes();
    return tdidt(data, rows, attrs, model, chooser, min_split, {}, seed);
}

Tree cost_sensitive_prune(Tree tree, const Dataset& data, std::span<const std::size_t> rows, const CostModel& model,
                          double cf, const ChargeContext& ctx) {
    if (tree.is_leaf()) return tree;
    if (rows.empty()) return Tree::leaf(std::move(tree.counts), tree.label);

    Split split{tree.attribute, tree.kind == Tree::Kind::Numeric, tree.threshold};
    auto parts = partition(data, rows, split);
    auto child_ctx = ctx;
    child_ctx.administer(tree.attribute, model);
    for (std::size_t i = 0; i < tree.children.size(); ++i)
        tree.children[i] = cost_sensitive_prune(std::move(tree.children[i]), data, parts[i], model, cf, child_ctx);

    const auto counts = data.class_counts(rows);
    const ClassId label = default_class(counts, model);
    const std::size_t m = rows.size();
    const auto& matrix = model.matrix();
    const double mc = matrix.is_uniform() ? matrix.max_entry() : matrix.off_diagonal_mean();
    const double as_leaf = expected_error(m, m - counts[label], cf) * mc / static_cast<double>(m);
    const double as_subtree = total_cost(tree, data, rows, model, cf, ctx).total;
    if (as_leaf <= as_subtree) return Tree::leaf(counts, label);
    return tree;
}

}  // namespace costtree
