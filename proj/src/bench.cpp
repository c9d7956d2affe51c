#include "costtree/bench.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "costtree/random.hpp"

namespace costtree {

namespace {

std::string mc_label(const std::optional<double>& mc) { return mc ? format_number(*mc) : "matrix"; }
std::string r_label(const std::optional<std::size_t>& r) { return r ? std::to_string(*r) : "-"; }

struct VariantKey {
    Algorithm algorithm;
    std::optional<std::size_t> r;
    auto tie() const { return std::make_tuple(static_cast<int>(algorithm), r.has_value(), r.value_or(0)); }
    friend bool operator<(const VariantKey& a, const VariantKey& b) { return a.tie() < b.tie(); }
    friend bool operator==(const VariantKey& a, const VariantKey& b) { return a.tie() == b.tie(); }
};

// Cells grouped by penalty, then variant, in sweep order.
using Grouped = std::vector<std::pair<std::optional<double>, std::vector<std::pair<VariantKey, std::vector<const BenchCell*>>>>>;

Grouped group_cells(const BenchResult& result) {
    Grouped out;
    for (const auto& cell : result.cells) {
        auto mc_it = std::find_if(out.begin(), out.end(), [&](const auto& g) { return g.first == cell.mc; });
        if (mc_it == out.end()) mc_it = out.insert(out.end(), {cell.mc, {}});
        VariantKey key{cell.algorithm, cell.r};
        auto& variants = mc_it->second;
        auto v_it = std::find_if(variants.begin(), variants.end(), [&](const auto& v) { return v.first == key; });
        if (v_it == variants.end()) v_it = variants.insert(variants.end(), {key, {}});
        v_it->second.push_back(&cell);
    }
    return out;
}

std::vector<double> fold_costs(const EvalReport& r) {
    std::vector<double> out;
    for (const auto& f : r.folds) out.push_back(f.normalized);
    return out;
}

}  // namespace

std::string variant_name(const BenchCell& cell) {
    std::string name(to_string(cell.algorithm));
    if (cell.r) name += "(r=" + std::to_string(*cell.r) + ")";
    return name;
}

BenchResult run_bench(const std::vector<BenchProblem>& problems, const BenchConfig& config) {
    if (config.algorithms.empty()) throw std::invalid_argument("bench needs at least one algorithm");
    if (config.seeds.empty()) throw std::invalid_argument("bench needs at least one seed");
    BenchResult result;
    for (const auto& p : problems) result.problems.push_back(p.name);

    std::vector<std::optional<double>> mcs;
    for (double mc : config.mcs) mcs.emplace_back(mc);
    if (mcs.empty()) mcs.emplace_back(std::nullopt);

    for (std::size_t pi = 0; pi < problems.size(); ++pi)
        for (const auto& mc : mcs)
            for (auto algo : config.algorithms) {
                std::vector<std::optional<std::size_t>> rs;
                if (is_anytime(algo))
                    for (auto r : config.rs) rs.emplace_back(r);
                if (rs.empty()) rs.emplace_back(std::nullopt);
                for (const auto& r : rs)
                    for (auto seed : config.seeds) result.cells.push_back(BenchCell{pi, algo, mc, r, seed, {}});
            }

    // Partitions depend on (problem, seed) only, so every learner sees the same folds.
    std::map<std::pair<std::size_t, std::uint64_t>, std::vector<std::vector<std::size_t>>> partitions;
    for (const auto& cell : result.cells) {
        auto key = std::make_pair(cell.problem, cell.seed);
        if (!partitions.count(key))
            partitions[key] = stratified_folds(problems[cell.problem].data, config.folds, cell.seed);
    }

    auto run_cell = [&](BenchCell& cell) {
        const auto& problem = problems[cell.problem];
        const CostModel model =
            cell.mc ? problem.model.with_matrix(CostMatrix::uniform(problem.data.num_classes(), *cell.mc)) : problem.model;
        LearnerOptions options = config.learner;
        if (cell.r) options.r = *cell.r;
        const auto seed = cell.seed;
        const auto algo = cell.algorithm;
        Inducer inducer = [&, options](const Dataset& d, std::span<const std::size_t> rows, const CostModel& m,
                                       std::size_t fold) mutable {
            options.seed = derive_seed(seed, {fold});
            return train(algo, d, rows, m, options);
        };
        cell.report = cross_validate(problem.data, model, inducer, partitions.at({cell.problem, cell.seed}));
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, result.cells.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < result.cells.size();) {
            try {
                run_cell(result.cells[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

void write_summary(std::ostream& out, const BenchResult& result) {
    out << "algo\tmc\tr\tunits\tmean_normalized\thalf_width\tmean_cost\tmean_accuracy\tmean_tree_size\n";
    for (const auto& [mc, variants] : group_cells(result)) {
        for (const auto& [key, cells] : variants) {
            std::vector<double> normalized;
            double cost = 0, acc = 0, size = 0;
            for (const auto* c : cells) {
                normalized.push_back(c->report.mean_normalized);
                cost += c->report.mean_cost;
                acc += c->report.mean_accuracy;
                size += c->report.mean_tree_size;
            }
            const auto n = static_cast<double>(cells.size());
            double mean = 0;
            for (double x : normalized) mean += x;
            out << to_string(key.algorithm) << '\t' << mc_label(mc) << '\t' << r_label(key.r) << '\t' << cells.size()
                << '\t' << format_number(mean / n) << '\t' << format_number(t_half_width(normalized)) << '\t'
                << format_number(cost / n) << '\t' << format_number(acc / n) << '\t' << format_number(size / n)
                << '\n';
        }
    }
}

void write_comparisons(std::ostream& out, const BenchResult& result, double alpha) {
    out << "mc\tmethod_a\tmethod_b\tunits\tt_wins_a\tt_wins_b\twilcoxon_p\twilcoxon_winner\tt_p_values\n";
    for (const auto& [mc, variants] : group_cells(result)) {
        for (std::size_t i = 0; i < variants.size(); ++i) {
            for (std::size_t j = i + 1; j < variants.size(); ++j) {
                const auto& a = variants[i].second;
                const auto& b = variants[j].second;
                std::size_t wins_a = 0, wins_b = 0;
                std::vector<double> mean_a, mean_b;
                std::string ps;
                for (std::size_t u = 0; u < a.size() && u < b.size(); ++u) {
                    auto fa = fold_costs(a[u]->report), fb = fold_costs(b[u]->report);
                    auto t = paired_ttest(fa, fb, alpha, Better::Lower);
                    if (t.winner == Winner::First) ++wins_a;
                    if (t.winner == Winner::Second) ++wins_b;
                    if (!ps.empty()) ps += ',';
                    ps += format_number(t.p);
                    mean_a.push_back(a[u]->report.mean_normalized);
                    mean_b.push_back(b[u]->report.mean_normalized);
                }
                auto w = wilcoxon(mean_a, mean_b, alpha, Better::Lower);
                out << mc_label(mc) << '\t' << variant_name(*a.front()) << '\t' << variant_name(*b.front()) << '\t'
                    << mean_a.size() << '\t' << wins_a << '\t' << wins_b << '\t' << format_number(w.p) << '\t'
                    << to_string(w.winner) << '\t' << (ps.empty() ? "-" : ps) << '\n';
            }
        }
    }
}

void write_folds(std::ostream& out, const BenchResult& result) {
    out << "problem\talgo\tmc\tr\tseed\tfold\ttest_size\tavg_cost\tavg_tcost\tavg_mcost\tnormalized\taccuracy\t"
           "tree_size\n";
    for (const auto& cell : result.cells) {
        for (std::size_t f = 0; f < cell.report.folds.size(); ++f) {
            const auto& r = cell.report.folds[f];
            out << result.problems[cell.problem] << '\t' << to_string(cell.algorithm) << '\t' << mc_label(cell.mc)
                << '\t' << r_label(cell.r) << '\t' << cell.seed << '\t' << f << '\t' << r.test_size << '\t'
                << format_number(r.avg_cost) << '\t' << format_number(r.avg_tcost) << '\t'
                << format_number(r.avg_mcost) << '\t' << format_number(r.normalized) << '\t'
                << format_number(r.accuracy) << '\t' << r.tree_size << '\n';
        }
    }
}

}  // namespace costtree
