#include "costtree/induction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "costtree/estimate.hpp"

namespace costtree {

double entropy(std::span<const std::size_t> counts) {
    double n = 0.0;
    for (auto c : counts) n += static_cast<double>(c);
    if (n == 0.0) return 0.0;
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

std::size_t Split::branch(double value) const {
    if (numeric) return value <= threshold ? 0 : 1;
    return static_cast<std::size_t>(value);
}

std::vector<std::vector<std::size_t>> partition(const Dataset& data, std::span<const std::size_t> rows,
                                                const Split& split) {
    std::vector<std::vector<std::size_t>> parts(split.arity(data));
    for (auto r : rows) parts[split.branch(data.example(r).values[split.attribute])].push_back(r);
    return parts;
}

namespace {

// Weighted child entropy for a table of per-branch class counts.
double children_entropy(const std::vector<std::vector<std::size_t>>& table, double n) {
    double h = 0.0;
    for (const auto& row : table) {
        double m = 0.0;
        for (auto c : row) m += static_cast<double>(c);
        if (m > 0.0) h += m / n * entropy(row);
    }
    return h;
}

std::vector<std::vector<std::size_t>> branch_table(const Dataset& data, std::span<const std::size_t> rows,
                                                   const Split& split) {
    std::vector<std::vector<std::size_t>> table(split.arity(data), std::vector<std::size_t>(data.num_classes(), 0));
    for (auto r : rows) {
        const auto& e = data.example(r);
        ++table[split.branch(e.values[split.attribute])][e.label];
    }
    return table;
}

double gain_from_table(const std::vector<std::vector<std::size_t>>& table, std::span<const std::size_t> parent) {
    double n = 0.0;
    for (auto c : parent) n += static_cast<double>(c);
    if (n == 0.0) return 0.0;
    // Clamp tiny negative values produced by rounding.
    return std::max(0.0, entropy(parent) - children_entropy(table, n));
}

struct SortedColumn {
    // (value, label) pairs sorted by value, then grouped by distinct value.
    std::vector<std::pair<double, ClassId>> items;
    std::vector<std::size_t> group_end;  // exclusive end index of each value group
};

SortedColumn sort_column(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute) {
    SortedColumn col;
    col.items.reserve(rows.size());
    for (auto r : rows) col.items.emplace_back(data.example(r).values[attribute], data.example(r).label);
    std::sort(col.items.begin(), col.items.end());
    for (std::size_t i = 1; i <= col.items.size(); ++i)
        if (i == col.items.size() || col.items[i].first != col.items[i - 1].first) col.group_end.push_back(i);
    return col;
}

// Class of a value group if the group is pure, otherwise npos.
std::size_t pure_class(const SortedColumn& col, std::size_t begin, std::size_t end) {
    ClassId c = col.items[begin].second;
    for (std::size_t i = begin + 1; i < end; ++i)
        if (col.items[i].second != c) return std::numeric_limits<std::size_t>::max();
    return c;
}

// Calls fn(threshold, left_counts, right_counts) for every boundary cut point.
template <typename Fn>
void for_each_cut(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute, Fn&& fn) {
    if (rows.empty()) return;
    SortedColumn col = sort_column(data, rows, attribute);
    const std::size_t k = data.num_classes();
    std::vector<std::size_t> left(k, 0), right(k, 0);
    for (const auto& it : col.items) ++right[it.second];
    std::size_t begin = 0;
    for (std::size_t g = 0; g + 1 < col.group_end.size(); ++g) {
        std::size_t end = col.group_end[g];
        for (std::size_t i = begin; i < end; ++i) {
            ++left[col.items[i].second];
            --right[col.items[i].second];
        }
        std::size_t next_end = col.group_end[g + 1];
        auto a = pure_class(col, begin, end);
        auto b = pure_class(col, end, next_end);
        bool same_pure = a != std::numeric_limits<std::size_t>::max() && a == b;
        if (!same_pure) {
            double lo = col.items[end - 1].first;
            double hi = col.items[end].first;
            double thr = lo + (hi - lo) / 2.0;
            // Guard against the midpoint rounding onto the upper value.
            if (!(thr < hi)) thr = lo;
            fn(thr, left, right);
        }
        begin = end;
    }
}

bool better(const SplitCandidate& a, const SplitCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return std::isinf(a.score) && a.gain > b.gain;
}

double criterion_score(Criterion c, double gain, double cost, double w) {
    switch (c) {
        case Criterion::ID3:
        case Criterion::SID3:
            return gain;
        case Criterion::EG2:
        case Criterion::SEG2:
            return icf(gain, cost, w);
        case Criterion::IDX:
            if (cost == 0.0) return gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
            return gain / cost;
        case Criterion::CSID3:
            if (cost == 0.0) return gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
            return gain * gain / cost;
        case Criterion::DTMC:
            break;
    }
    throw std::invalid_argument("criterion has no gain-based score");
}

double node_cost(std::span<const std::size_t> counts, const CostModel& model) {
    return labelling_cost(counts, default_class(counts, model), model);
}

}  // namespace

double info_gain(const Dataset& data, std::span<const std::size_t> rows, const Split& split) {
    auto parent = data.class_counts(rows);
    return gain_from_table(branch_table(data, rows, split), parent);
}

double info_gain(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute) {
    return info_gain(data, rows, Split{attribute, false, 0.0});
}

double info_gain(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute, double threshold) {
    return info_gain(data, rows, Split{attribute, true, threshold});
}

std::vector<ThresholdGain> candidate_thresholds(const Dataset& data, std::span<const std::size_t> rows,
                                                std::size_t attribute) {
    std::vector<ThresholdGain> out;
    auto parent = data.class_counts(rows);
    const double n = static_cast<double>(rows.size());
    const double h = entropy(parent);
    for_each_cut(data, rows, attribute, [&](double thr, const auto& left, const auto& right) {
        double nl = 0.0;
        for (auto c : left) nl += static_cast<double>(c);
        double g = h - (nl / n) * entropy(left) - ((n - nl) / n) * entropy(right);
        out.push_back({thr, std::max(0.0, g)});
    });
    return out;
}

std::vector<ThresholdGain> top_thresholds(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute,
                                          std::size_t r) {
    auto all = candidate_thresholds(data, rows, attribute);
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.gain > b.gain; });
    if (all.size() > r) all.resize(r);
    return all;
}

double best_gain(const Dataset& data, std::span<const std::size_t> rows, std::size_t attribute) {
    if (data.attribute(attribute).nominal()) return info_gain(data, rows, attribute);
    double best = 0.0;
    for (const auto& t : candidate_thresholds(data, rows, attribute)) best = std::max(best, t.gain);
    return best;
}

double icf(double gain, double cost, double w) {
    return (std::exp2(gain) - 1.0) / std::pow(cost + 1.0, w);
}

std::vector<SplitCandidate> split_candidates(const NodeView& node) {
    std::vector<SplitCandidate> out;
    auto parent = node.data.class_counts(node.rows);
    for (auto a : node.attributes) {
        const auto& attr = node.data.attribute(a);
        SplitCandidate c;
        c.split.attribute = a;
        if (attr.nominal()) {
            auto table = branch_table(node.data, node.rows, c.split);
            std::size_t nonempty = 0;
            for (const auto& row : table)
                for (auto v : row)
                    if (v) {
                        ++nonempty;
                        break;
                    }
            if (nonempty < 2) continue;
            c.gain = gain_from_table(table, parent);
        } else {
            auto cuts = candidate_thresholds(node.data, node.rows, a);
            if (cuts.empty()) continue;
            auto best = cuts.front();
            for (const auto& t : cuts)
                if (t.gain > best.gain) best = t;
            c.split.numeric = true;
            c.split.threshold = best.threshold;
            c.gain = best.gain;
        }
        c.cost = node.model.context_cost(a, node.ctx);
        out.push_back(c);
    }
    return out;
}

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::ID3: return "id3";
        case Criterion::SID3: return "sid3";
        case Criterion::EG2: return "eg2";
        case Criterion::SEG2: return "seg2";
        case Criterion::IDX: return "idx";
        case Criterion::CSID3: return "csid3";
        case Criterion::DTMC: return "dtmc";
    }
    return "?";
}

Criterion criterion_from_string(std::string_view name) {
    for (auto c : {Criterion::ID3, Criterion::SID3, Criterion::EG2, Criterion::SEG2, Criterion::IDX, Criterion::CSID3,
                   Criterion::DTMC})
        if (to_string(c) == name) return c;
    throw std::invalid_argument("unknown criterion '" + std::string(name) + "'");
}

void InducerConfig::validate() const {
    if (!(cf > 0.0 && cf < 1.0)) throw std::invalid_argument("cf must lie in (0, 1)");
    if (min_split < 2) throw std::invalid_argument("min_split must be at least 2");
    if (!(w >= 0.0)) throw std::invalid_argument("w must be non-negative");
}

std::optional<SplitCandidate> choose_greedy(const NodeView& node, Criterion criterion, double w) {
    std::optional<SplitCandidate> best;
    for (auto c : split_candidates(node)) {
        c.score = criterion_score(criterion, c.gain, c.cost, w);
        if (!best || better(c, *best)) best = c;
    }
    return best;
}

std::size_t sample_proportional(std::span<const double> weights, Rng& rng) {
    if (weights.empty()) throw std::invalid_argument("cannot sample from an empty set");
    double total = 0.0;
    for (double v : weights) total += v;
    if (!(total > 0.0)) return std::uniform_int_distribution<std::size_t>(0, weights.size() - 1)(rng);
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
    return dist(rng);
}

namespace {

std::optional<SplitCandidate> choose_stochastic(const NodeView& node, Criterion criterion, double w, Rng& rng) {
    auto cands = split_candidates(node);
    if (cands.empty()) return std::nullopt;
    std::vector<double> weights;
    weights.reserve(cands.size());
    for (auto& c : cands) {
        c.score = criterion_score(criterion, c.gain, c.cost, w);
        weights.push_back(c.score);
    }
    return cands[sample_proportional(weights, rng)];
}

}  // namespace

std::optional<SplitCandidate> choose_sid3(const NodeView& node, Rng& rng) {
    return choose_stochastic(node, Criterion::SID3, 0.0, rng);
}

std::optional<SplitCandidate> choose_seg2(const NodeView& node, double w, Rng& rng) {
    return choose_stochastic(node, Criterion::SEG2, w, rng);
}

std::optional<SplitCandidate> choose_dtmc(const NodeView& node) {
    const auto parent = node.data.class_counts(node.rows);
    const double leaf_cost = node_cost(parent, node.model);
    const double n = static_cast<double>(node.rows.size());
    std::optional<SplitCandidate> best;
    auto consider = [&](SplitCandidate c, double children_cost) {
        c.score = leaf_cost - (n * c.cost + children_cost);
        if (!best || c.score > best->score) best = c;
    };
    for (auto a : node.attributes) {
        SplitCandidate c;
        c.split.attribute = a;
        c.cost = node.model.context_cost(a, node.ctx);
        if (node.data.attribute(a).nominal()) {
            double children = 0.0;
            for (const auto& row : branch_table(node.data, node.rows, c.split)) children += node_cost(row, node.model);
            consider(c, children);
            continue;
        }
        c.split.numeric = true;
        std::optional<std::pair<double, double>> best_cut;  // (children cost, threshold)
        for_each_cut(node.data, node.rows, a, [&](double thr, const auto& left, const auto& right) {
            double children = node_cost(left, node.model) + node_cost(right, node.model);
            if (!best_cut || children < best_cut->first) best_cut = {children, thr};
        });
        if (!best_cut) continue;
        c.split.threshold = best_cut->second;
        consider(c, best_cut->first);
    }
    if (!best || !(best->score > 0.0)) return std::nullopt;
    best->gain = info_gain(node.data, node.rows, best->split);
    return best;
}

Tree tdidt(const Dataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> attributes,
           const CostModel& model, const SplitChooser& chooser, std::size_t min_split, const ChargeContext& ctx,
           std::uint64_t seed) {
    auto counts = data.class_counts(rows);
    const ClassId label = default_class(counts, model);
    std::size_t populated = 0;
    for (auto c : counts) populated += c ? 1 : 0;
    if (populated <= 1 || attributes.empty() || rows.size() < min_split) return Tree::leaf(std::move(counts), label);

    auto split = chooser(NodeView{data, rows, attributes, ctx, model, seed});
    if (!split) return Tree::leaf(std::move(counts), label);

    Tree node;
    node.kind = split->numeric ? Tree::Kind::Numeric : Tree::Kind::Nominal;
    node.attribute = split->attribute;
    node.threshold = split->threshold;
    node.label = label;
    node.counts = std::move(counts);

    std::vector<std::size_t> child_attrs;
    child_attrs.reserve(attributes.size());
    for (auto a : attributes)
        if (a != split->attribute || split->numeric) child_attrs.push_back(a);
    auto child_ctx = ctx;
    child_ctx.administer(split->attribute, model);

    auto parts = partition(data, rows, *split);
    node.children.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].empty()) {
            node.children.push_back(Tree::leaf(std::vector<std::size_t>(data.num_classes(), 0), label));
            continue;
        }
        node.children.push_back(
            tdidt(data, parts[i], child_attrs, model, chooser, min_split, child_ctx, derive_seed(seed, {i})));
    }
    return node;
}

Tree grow(const Dataset& data, std::span<const std::size_t> rows, std::span<const std::size_t> attributes,
          const CostModel& model, const InducerConfig& config, const ChargeContext& ctx) {
    config.validate();
    auto to_split = [](const std::optional<SplitCandidate>& c) -> std::optional<Split> {
        if (!c) return std::nullopt;
        return c->split;
    };
    Rng rng(config.seed);
    SplitChooser chooser;
    switch (config.criterion) {
        case Criterion::SID3:
            chooser = [&](const NodeView& v) { return to_split(choose_sid3(v, rng)); };
            break;
        case Criterion::SEG2:
            chooser = [&](const NodeView& v) { return to_split(choose_seg2(v, config.w, rng)); };
            break;
        case Criterion::DTMC:
            chooser = [&](const NodeView& v) { return to_split(choose_dtmc(v)); };
            break;
        default:
            chooser = [&](const NodeView& v) { return to_split(choose_greedy(v, config.criterion, config.w)); };
            break;
    }
    return tdidt(data, rows, attributes, model, chooser, config.min_split, ctx, config.seed);
}

namespace {

double subtree_leaf_ee(const Tree& t, double cf) {
    if (t.is_leaf()) {
        auto m = t.examples();
        return expected_error(m, m - t.counts[t.label], cf);
    }
    double s = 0.0;
    for (const auto& c : t.children) s += subtree_leaf_ee(c, cf);
    return s;
}

}  // namespace

Tree error_based_prune(Tree tree, double cf) {
    if (tree.is_leaf()) return tree;
    for (auto& c : tree.children) c = error_based_prune(std::move(c), cf);
    auto m = tree.examples();
    double as_leaf = expected_error(m, m - tree.counts[tree.label], cf);
    if (as_leaf <= subtree_leaf_ee(tree, cf)) return Tree::leaf(std::move(tree.counts), tree.label);
    return tree;
}

}  // namespace costtree
