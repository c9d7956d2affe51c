#include "costtree/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "costtree/random.hpp"

namespace costtree {

double standard_cost(const CostModel& model, std::span<const double> class_frequencies) {
    if (class_frequencies.empty()) throw std::invalid_argument("standard_cost: no class frequencies");
    double min_miss = 1.0;
    for (double f : class_frequencies) min_miss = std::min(min_miss, 1.0 - f);
    return model.total_test_cost() + min_miss * model.matrix().max_entry();
}

double normalized_cost(double average_cost, double standard) {
    if (!(standard > 0.0)) throw std::invalid_argument("normalized_cost: standard cost must be positive");
    return average_cost / standard;
}

std::vector<std::vector<std::size_t>> stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
    if (data.size() < k) throw std::invalid_argument("fewer examples than folds");
    std::vector<std::vector<std::size_t>> by_class(data.num_classes());
    for (std::size_t row = 0; row < data.size(); ++row) by_class[data.example(row).label].push_back(row);

    Rng rng(seed);
    std::vector<std::vector<std::size_t>> folds(k);
    // Dealing continues across classes, so totals stay balanced too.
    std::size_t next = 0;
    for (auto& rows : by_class) {
        std::shuffle(rows.begin(), rows.end(), rng);
        for (auto row : rows) {
            folds[next].push_back(row);
            next = (next + 1) % k;
        }
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

FoldResult evaluate_tree(const Tree& tree, const Dataset& data, std::span<const std::size_t> rows,
                         const CostModel& model, double standard) {
    if (rows.empty()) throw std::invalid_argument("evaluate_tree: no test examples");
    FoldResult r;
    std::size_t correct = 0;
    for (auto row : rows) {
        const auto& ex = data.example(row);
        auto c = classify(tree, ex.values, model);
        r.avg_tcost += c.charge.total;
        r.avg_mcost += model.misclassification_cost(c.label, ex.label);
        if (c.label == ex.label) ++correct;
    }
    const auto m = static_cast<double>(rows.size());
    r.avg_tcost /= m;
    r.avg_mcost /= m;
    r.avg_cost = r.avg_tcost + r.avg_mcost;
    r.normalized = normalized_cost(r.avg_cost, standard);
    r.accuracy = static_cast<double>(correct) / m;
    r.tree_size = tree_size(tree);
    r.test_size = rows.size();
    return r;
}

double t_half_width(std::span<const double> xs, double alpha) {
    const std::size_t n = xs.size();
    if (n < 2) return 0.0;
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    boost::math::students_t dist(static_cast<double>(n - 1));
    return boost::math::quantile(boost::math::complement(dist, alpha / 2.0)) * sd / std::sqrt(static_cast<double>(n));
}

EvalReport cross_validate(const Dataset& data, const CostModel& model, const Inducer& inducer,
                          const std::vector<std::vector<std::size_t>>& folds) {
    EvalReport report;
    report.standard = standard_cost(model, data.class_frequencies());
    std::vector<bool> in_test(data.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::fill(in_test.begin(), in_test.end(), false);
        for (auto row : folds[f]) in_test[row] = true;
        std::vector<std::size_t> train;
        for (std::size_t row = 0; row < data.size(); ++row)
            if (!in_test[row]) train.push_back(row);
        Tree tree = inducer(data, train, model, f);
        report.folds.push_back(evaluate_tree(tree, data, folds[f], model, report.standard));
    }
    std::vector<double> normalized;
    for (const auto& f : report.folds) {
        report.mean_cost += f.avg_cost;
        report.mean_accuracy += f.accuracy;
        report.mean_tree_size += static_cast<double>(f.tree_size);
        normalized.push_back(f.normalized);
    }
    const auto n = static_cast<double>(report.folds.size());
    if (n > 0) {
        report.mean_cost /= n;
        report.mean_accuracy /= n;
        report.mean_tree_size /= n;
        report.mean_normalized = std::accumulate(normalized.begin(), normalized.end(), 0.0) / n;
    }
    report.normalized_half_width = t_half_width(normalized);
    return report;
}

EvalReport kfold_cv(const Dataset& data, const CostModel& model, const Inducer& inducer, std::size_t k,
                    std::uint64_t seed) {
    return cross_validate(data, model, inducer, stratified_folds(data, k, seed));
}

std::string_view to_string(Winner w) {
    switch (w) {
        case Winner::First: return "first";
        case Winner::Second: return "second";
        case Winner::None: break;
    }
    return "none";
}

namespace {

// Maps "a's differences lean positive" to a winner under the better-direction.
Winner lean_winner(bool a_higher, Better better) {
    return a_higher == (better == Better::Higher) ? Winner::First : Winner::Second;
}

void check_pairs(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired samples differ in length");
}

}  // namespace

TestResult paired_ttest(std::span<const double> a, std::span<const double> b, double alpha, Better better) {
    check_pairs(a, b);
    const std::size_t n = a.size();
    if (n < 2) throw std::invalid_argument("paired t-test needs at least 2 pairs");
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TestResult r;
    if (sd == 0.0) {
        if (mean == 0.0) return r;
        r.p = 0.0;
        r.statistic = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    } else {
        r.statistic = mean / (sd / std::sqrt(static_cast<double>(n)));
        boost::math::students_t dist(static_cast<double>(n - 1));
        r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.statistic))));
    }
    if (r.p < alpha) r.winner = lean_winner(mean > 0.0, better);
    return r;
}

SignedRanks signed_ranks(std::span<const double> a, std::span<const double> b) {
    check_pairs(a, b);
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) d.push_back(a[i] - b[i]);
    std::sort(d.begin(), d.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });

    SignedRanks s;
    s.n = d.size();
    for (std::size_t i = 0; i < d.size();) {
        std::size_t j = i;
        while (j < d.size() && std::abs(d[j]) == std::abs(d[i])) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        const auto t = static_cast<double>(j - i);
        s.tie_term += t * t * t - t;
        for (std::size_t q = i; q < j; ++q) (d[q] > 0 ? s.r_plus : s.r_minus) += rank;
        i = j;
    }
    return s;
}

TestResult wilcoxon(std::span<const double> a, std::span<const double> b, double alpha, Better better) {
    const auto s = signed_ranks(a, b);
    TestResult r;
    r.statistic = std::min(s.r_plus, s.r_minus);
    if (s.n == 0) return r;
    const auto n = static_cast<double>(s.n);
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - s.tie_term / 48.0;
    if (var <= 0.0) return r;
    const double z = std::max(0.0, std::abs(s.r_plus - mean) - 0.5) / std::sqrt(var);
    boost::math::normal normal;
    r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(normal, z)));
    if (r.p < alpha && s.r_plus != s.r_minus) r.winner = lean_winner(s.r_plus > s.r_minus, better);
    return r;
}

}  // namespace costtree
