#include "costtree/estimate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace costtree {

double binomial_cdf(std::size_t s, std::size_t m, double p) {
    if (s >= m) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lgm = std::lgamma(static_cast<double>(m) + 1.0);
    // Terms grow towards the mode; sum in log space relative to the largest.
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k <= s; ++k) {
        double kk = static_cast<double>(k);
        double t = lgm - std::lgamma(kk + 1.0) - std::lgamma(static_cast<double>(m - k) + 1.0) + kk * lp +
                   static_cast<double>(m - k) * lq;
        max_log = std::max(max_log, t);
    }
    double sum = 0.0;
    for (std::size_t k = 0; k <= s; ++k) {
        double kk = static_cast<double>(k);
        double t = lgm - std::lgamma(kk + 1.0) - std::lgamma(static_cast<double>(m - k) + 1.0) + kk * lp +
                   static_cast<double>(m - k) * lq;
        sum += std::exp(t - max_log);
    }
    return std::min(1.0, std::exp(max_log) * sum);
}

double expected_error(std::size_t m, std::size_t s, double cf) {
    if (!(cf > 0.0 && cf < 1.0)) throw std::invalid_argument("expected_error: cf must lie in (0, 1)");
    if (s > m) throw std::invalid_argument("expected_error: more errors than examples");
    if (m == 0) return 0.0;
    const double n = static_cast<double>(m);
    if (s == m) return n;
    if (s == 0) return n * (1.0 - std::pow(cf, 1.0 / n));

    // The CDF is strictly decreasing in p.
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        if (binomial_cdf(s, m, mid) > cf) lo = mid;
        else hi = mid;
    }
    return n * 0.5 * (lo + hi);
}

double leaf_mcost(std::span<const std::size_t> counts, ClassId label, const CostMatrix& matrix, double cf) {
    std::size_t m = 0;
    for (auto c : counts) m += c;
    if (m == 0) return 0.0;
    const std::size_t errors = m - counts[label];
    const double ee = expected_error(m, errors, cf);
    if (matrix.is_uniform()) {
        double mc = matrix.size() > 1 ? matrix(label == 0 ? 1 : 0, label) : 0.0;
        return ee * mc;
    }
    const double denom = static_cast<double>(errors + counts.size() - 1);
    double penalty = 0.0;
    for (ClassId i = 0; i < counts.size(); ++i) {
        if (i == label) continue;
        penalty += (static_cast<double>(counts[i]) + 1.0) / denom * matrix(i, label);
    }
    return ee * penalty;
}

namespace {

double sum_leaf_mcost(const Tree& t, const CostMatrix& matrix, double cf) {
    if (t.is_leaf()) return leaf_mcost(t.counts, t.label, matrix, cf);
    double s = 0.0;
    for (const auto& c : t.children) s += sum_leaf_mcost(c, matrix, cf);
    return s;
}

}  // namespace

double tree_mcost(const Tree& tree, std::size_t m, const CostMatrix& matrix, double cf) {
    if (m == 0) throw std::invalid_argument("tree_mcost needs a positive training size");
    return sum_leaf_mcost(tree, matrix, cf) / static_cast<double>(m);
}

CostEstimate total_cost(const Tree& tree, const Dataset& data, std::span<const std::size_t> rows,
                        const CostModel& model, double cf, const ChargeContext& ctx) {
    if (rows.empty()) throw std::invalid_argument("total_cost needs at least one example");
    CostEstimate e;
    e.tcost = average_tcost(tree, data, rows, model, ctx);
    e.mcost = tree_mcost(tree, rows.size(), model.matrix(), cf);
    e.total = e.tcost + e.mcost;
    return e;
}

ProblemScale scale_for_ratio(double x) {
    ProblemScale s;
    s.x = x;
    if (std::isinf(x)) {
        s.w = 0.5;
        s.cf = 0.3;
        return s;
    }
    s.w = 0.5 + std::exp(-x);
    s.cf = 0.2 + 0.05 * (1.0 + (x - 1.0) / (x + 1.0));
    return s;
}

ProblemScale problem_scale(const CostModel& model) {
    const double tc = model.total_test_cost();
    if (!(tc > 0.0)) throw std::invalid_argument("problem_scale: the cost of all tests must be positive");
    const auto& m = model.matrix();
    const double k = static_cast<double>(m.size());
    ProblemScale s = scale_for_ratio(m.off_diagonal_sum() / ((k - 1.0) * k * tc));
    s.tc = tc;
    return s;
}

}  // namespace costtree
