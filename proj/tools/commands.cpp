#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "costtree/act.hpp"
#include "costtree/bench.hpp"
#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/error.hpp"
#include "costtree/estimate.hpp"
#include "costtree/eval.hpp"
#include "costtree/generators.hpp"
#include "costtree/learners.hpp"
#include "costtree/random.hpp"
#include "costtree/tree.hpp"

namespace costtree::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kGenerators{"multiplexer", "xor", "xor3d", "multi-xor", "multi-and-or"};

std::vector<std::string> algorithm_names() {
    std::vector<std::string> out;
    for (auto a : all_algorithms()) out.emplace_back(to_string(a));
    return out;
}

// Writes through a string so a failed command never leaves a half-written file.
void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write '" + path + "'");
    f << content;
    if (!f) throw DataError("cannot write '" + path + "'");
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty() || path == "-")
        out << content;
    else
        write_file(path, content);
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--cr expects lo:hi, got '" + text + "'");
    try {
        std::size_t used_lo = 0, used_hi = 0;
        const std::string lo_s = text.substr(0, colon), hi_s = text.substr(colon + 1);
        const double lo = std::stod(lo_s, &used_lo);
        const double hi = std::stod(hi_s, &used_hi);
        if (used_lo != lo_s.size() || used_hi != hi_s.size()) throw std::invalid_argument("trailing");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("--cr expects lo:hi, got '" + text + "'");
    }
}

struct CostFlags {
    std::string cr = "1:100";
    double g = 0.2;
    double d = 0.0;
    double phi = 0.8;
    int rho = 1;

    void add_to(CLI::App& app) {
        app.add_option("--cr", cr, "Cost range lo:hi")->capture_default_str();
        app.add_option("--g", g, "Group fraction")->capture_default_str();
        app.add_option("--d", d, "Delayed-test fraction (only 0 is supported)")->capture_default_str();
        app.add_option("--phi", phi, "Group discount as a fraction of the cheapest member")->capture_default_str();
        app.add_option("--rho", rho, "1: costs follow information gain, 0: uniform")
            ->check(CLI::IsMember({0, 1}))
            ->capture_default_str();
    }

    CostAssignmentParams params() const {
        CostAssignmentParams p;
        std::tie(p.cost_lo, p.cost_hi) = parse_range(cr);
        p.group_fraction = g;
        p.delayed_fraction = d;
        p.group_discount = phi;
        p.gain_proportional = rho == 1;
        return p;
    }
};

// ---------------------------------------------------------------- gendata

struct GendataArgs {
    std::string generator;
    std::size_t relevant = 5;
    std::size_t irrelevant = 5;
    std::size_t address_bits = 4;
    std::size_t n = 200;
    std::uint64_t seed = 0;
    std::string out;
};

void add_gendata(CLI::App& app, GendataArgs& a) {
    auto* cmd = app.add_subcommand("gendata", "Generate a synthetic dataset as CSV");
    cmd->add_option("generator", a.generator, "multiplexer | xor | xor3d | multi-xor | multi-and-or")
        ->required()
        ->check(CLI::IsMember(kGenerators));
    cmd->add_option("--relevant", a.relevant, "xor: parity bits")->capture_default_str();
    cmd->add_option("--irrelevant", a.irrelevant, "xor, xor3d: noise attributes")->capture_default_str();
    cmd->add_option("--address-bits", a.address_bits, "multiplexer: address bits")->capture_default_str();
    cmd->add_option("-n,--instances", a.n, "Number of examples")->capture_default_str();
    cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    cmd->add_option("-o,--out", a.out, "Output CSV (stdout when omitted)");
}

int run_gendata(const GendataArgs& a, std::ostream& out) {
    Dataset data;
    if (a.generator == "multiplexer")
        data = generate_multiplexer(a.address_bits, a.n, a.seed);
    else if (a.generator == "xor")
        data = generate_xor(a.relevant, a.irrelevant, a.n, a.seed);
    else if (a.generator == "xor3d")
        data = generate_numeric_xor3d(a.irrelevant, a.n, a.seed);
    else if (a.generator == "multi-xor")
        data = generate_multi_xor(a.n, a.seed);
    else
        data = generate_multi_and_or(a.n, a.seed);
    std::ostringstream s;
    write_dataset(s, data);
    emit(a.out, s.str(), out);
    return kOk;
}

// ---------------------------------------------------------------- gencosts

struct GencostsArgs {
    std::string data;
    CostFlags costs;
    std::optional<double> mc;
    std::string mc_matrix;
    std::uint64_t seed = 0;
    std::string out;
};

void add_gencosts(CLI::App& app, GencostsArgs& a) {
    auto* cmd = app.add_subcommand("gencosts", "Assign random test costs and a penalty matrix to a dataset");
    cmd->add_option("--data", a.data, "Dataset CSV")->required();
    a.costs.add_to(*cmd);
    auto* mc = cmd->add_option("--mc", a.mc, "Uniform misclassification penalty");
    auto* matrix = cmd->add_option("--mc-matrix", a.mc_matrix, "JSON file with an explicit penalty matrix");
    mc->excludes(matrix);
    cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    cmd->add_option("-o,--out", a.out, "Output JSON (stdout when omitted)");
}

int run_gencosts(const GencostsArgs& a, std::ostream& out) {
    if (!a.mc && a.mc_matrix.empty()) throw UsageError("one of --mc or --mc-matrix is required");
    const auto params = a.costs.params();
    const Dataset data = load_dataset(a.data);
    CostModel model = assign_costs(data, params, a.seed);
    if (a.mc) {
        if (!(*a.mc >= 0.0)) throw UsageError("--mc must be non-negative");
        model = model.with_matrix(CostMatrix::uniform(data.num_classes(), *a.mc));
    } else {
        auto m = load_cost_matrix(a.mc_matrix);
        if (m.size() != data.num_classes()) throw DataError("penalty matrix size does not match the class count");
        model = model.with_matrix(std::move(m));
    }
    std::ostringstream s;
    write_cost_model(s, model, data);
    emit(a.out, s.str(), out);
    return kOk;
}

// ---------------------------------------------------------------- train / eval

struct LearnerFlags {
    std::string algo = "act";
    std::size_t r = 5;
    bool r_given = false;
    std::uint64_t seed = 0;
    std::optional<double> w;
    std::optional<double> cf;
    double prune_cf = 0.25;
    CLI::Option* r_opt = nullptr;

    void add_to(CLI::App& app) {
        app.add_option("--algo", algo, "Learner")->check(CLI::IsMember(algorithm_names()))->capture_default_str();
        r_opt = app.add_option("--r", r, "Sample size for lsid3 and act")->capture_default_str();
        app.add_option("--seed", seed, "Random seed")->capture_default_str();
        app.add_option("--w", w, "act: cost bias (automatic when omitted)");
        app.add_option("--cf", cf, "act: confidence factor (automatic when omitted)");
        app.add_option("--prune-cf", prune_cf, "Confidence factor of error-based pruning")->capture_default_str();
    }

    Algorithm algorithm() const { return algorithm_from_string(algo); }

    LearnerOptions options() const {
        LearnerOptions o;
        o.r = r;
        o.seed = seed;
        o.w = w;
        o.cf = cf;
        o.prune_cf = prune_cf;
        if (cf && !(*cf > 0.0 && *cf < 1.0)) throw UsageError("--cf must lie in (0, 1)");
        if (!(prune_cf > 0.0 && prune_cf < 1.0)) throw UsageError("--prune-cf must lie in (0, 1)");
        return o;
    }

    void warn_ignored(std::ostream& err) const {
        const auto a = algorithm();
        if (!is_anytime(a) && r_opt && r_opt->count() > 0)
            err << "warning: --r is ignored by " << algo << '\n';
        if (a != Algorithm::ACT && (w || cf)) err << "warning: --w and --cf only apply to act\n";
    }
};

struct TrainArgs {
    std::string data;
    std::string costs;
    LearnerFlags learner;
    std::string out;
};

void add_train(CLI::App& app, TrainArgs& a) {
    auto* cmd = app.add_subcommand("train", "Grow a tree and report its estimated cost");
    cmd->add_option("--data", a.data, "Dataset CSV")->required();
    cmd->add_option("--costs", a.costs, "Cost JSON")->required();
    a.learner.add_to(*cmd);
    cmd->add_option("-o,--out", a.out, "Tree file");
}

// cf used to report the training-set estimate: the learner's own when it has one.
double estimate_cf(const LearnerFlags& f, const CostModel& model) {
    if (f.algorithm() != Algorithm::ACT) return f.prune_cf;
    AnytimeConfig cfg;
    cfg.w = f.w;
    cfg.cf = f.cf;
    return resolve_params(cfg, model).cf;
}

int run_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    const auto options = a.learner.options();
    const Dataset data = load_dataset(a.data);
    const CostModel model = load_cost_model(a.costs, data);
    if (data.empty()) throw DataError("the dataset has no examples");
    a.learner.warn_ignored(err);
    const auto rows = data.all_rows();
    const Tree tree = train(a.learner.algorithm(), data, rows, model, options);
    const double cf = estimate_cf(a.learner, model);
    const auto est = total_cost(tree, data, rows, model, cf);

    const std::string text = tree_to_string(tree, data);
    if (!a.out.empty()) write_file(a.out, text);
    out << "algo\t" << a.learner.algo << '\n'
        << "cf\t" << format_number(cf) << '\n'
        << "tcost\t" << format_number(est.tcost) << '\n'
        << "mcost\t" << format_number(est.mcost) << '\n'
        << "total\t" << format_number(est.total) << '\n'
        << "size\t" << tree_size(tree) << '\n'
        << "leaves\t" << tree_leaves(tree) << '\n'
        << "depth\t" << tree_depth(tree) << '\n';
    if (a.out.empty()) out << '\n' << text;
    return kOk;
}

struct EvalArgs {
    std::string data;
    std::string costs;
    LearnerFlags learner;
    std::size_t k = 10;
    std::string out;
};

void add_eval(CLI::App& app, EvalArgs& a) {
    auto* cmd = app.add_subcommand("eval", "Stratified k-fold cross-validation of one learner");
    cmd->add_option("--data", a.data, "Dataset CSV")->required();
    cmd->add_option("--costs", a.costs, "Cost JSON")->required();
    a.learner.add_to(*cmd);
    cmd->add_option("-k,--folds", a.k, "Number of folds")->capture_default_str();
    cmd->add_option("-o,--out", a.out, "Per-fold TSV (stdout when omitted)");
}

int run_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    const auto options = a.learner.options();
    if (a.k < 2) throw UsageError("--folds must be at least 2");
    const Dataset data = load_dataset(a.data);
    const CostModel model = load_cost_model(a.costs, data);
    if (data.size() < a.k) throw DataError("fewer examples than folds");
    a.learner.warn_ignored(err);
    const auto algo = a.learner.algorithm();
    const auto seed = a.learner.seed;
    Inducer inducer = [&](const Dataset& d, std::span<const std::size_t> rows, const CostModel& m, std::size_t fold) {
        auto o = options;
        o.seed = derive_seed(seed, {fold});
        return train(algo, d, rows, m, o);
    };
    const auto report = kfold_cv(data, model, inducer, a.k, seed);

    std::ostringstream s;
    s << "fold\ttest_size\tavg_cost\tavg_tcost\tavg_mcost\tnormalized\taccuracy\ttree_size\n";
    for (std::size_t f = 0; f < report.folds.size(); ++f) {
        const auto& r = report.folds[f];
        s << f << '\t' << r.test_size << '\t' << format_number(r.avg_cost) << '\t' << format_number(r.avg_tcost)
          << '\t' << format_number(r.avg_mcost) << '\t' << format_number(r.normalized) << '\t'
          << format_number(r.accuracy) << '\t' << r.tree_size << '\n';
    }
    emit(a.out, s.str(), out);
    out << "standard_cost\t" << format_number(report.standard) << '\n'
        << "mean_cost\t" << format_number(report.mean_cost) << '\n'
        << "mean_normalized\t" << format_number(report.mean_normalized) << '\n'
        << "half_width\t" << format_number(report.normalized_half_width) << '\n'
        << "mean_accuracy\t" << format_number(report.mean_accuracy) << '\n'
        << "mean_tree_size\t" << format_number(report.mean_tree_size) << '\n';
    return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<std::string> data;
    std::vector<std::string> costs;
    CostFlags generated;
    std::vector<std::string> algos{"act", "eg2"};
    std::vector<double> mcs;
    std::vector<std::size_t> rs{5};
    std::size_t k = 10;
    std::vector<std::uint64_t> seeds{0};
    std::uint64_t cost_seed = 0;
    std::size_t threads = 1;
    double alpha = 0.05;
    std::string out;
    bool force = false;
};

void add_bench(CLI::App& app, BenchArgs& a) {
    auto* cmd = app.add_subcommand("bench", "Cross-validated sweep over learners, penalties and sample sizes");
    cmd->add_option("--data", a.data, "Dataset CSV (repeatable)")->required();
    cmd->add_option("--costs", a.costs,
                    "Cost JSON, one per dataset; when omitted costs are generated from --cr/--g/--phi/--rho");
    a.generated.add_to(*cmd);
    cmd->add_option("--cost-seed", a.cost_seed, "Seed for generated costs")->capture_default_str();
    cmd->add_option("--algos", a.algos, "Learners")
        ->delimiter(',')
        ->check(CLI::IsMember(algorithm_names()))
        ->capture_default_str();
    cmd->add_option("--mc", a.mcs, "Uniform penalties to sweep; the cost files' matrices when omitted")
        ->delimiter(',');
    cmd->add_option("--r", a.rs, "Sample sizes for lsid3 and act")->delimiter(',')->capture_default_str();
    cmd->add_option("-k,--folds", a.k, "Number of folds")->capture_default_str();
    cmd->add_option("--seeds", a.seeds, "Partition seeds")->delimiter(',')->capture_default_str();
    cmd->add_option("--threads", a.threads, "Worker threads")->capture_default_str();
    cmd->add_option("--alpha", a.alpha, "Significance level")->capture_default_str();
    cmd->add_option("-o,--out", a.out, "Output prefix: <out>.tsv, <out>.comparisons.tsv, <out>.folds.tsv")
        ->required();
    cmd->add_flag("--force", a.force, "Overwrite existing outputs");
}

int run_bench_cmd(const BenchArgs& a, std::ostream& out) {
    if (a.k < 2) throw UsageError("--folds must be at least 2");
    if (!a.costs.empty() && a.costs.size() != a.data.size())
        throw UsageError("give one --costs file per --data file");
    if (a.threads < 1) throw UsageError("--threads must be at least 1");
    const std::vector<std::string> outputs{a.out + ".tsv", a.out + ".comparisons.tsv", a.out + ".folds.tsv"};
    if (!a.force)
        for (const auto& p : outputs)
            if (fs::exists(p)) throw UsageError("'" + p + "' exists; pass --force to overwrite");
    std::optional<CostAssignmentParams> params;
    if (a.costs.empty()) params = a.generated.params();

    std::vector<BenchProblem> problems;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        Dataset data = load_dataset(a.data[i]);
        CostModel model = params ? assign_costs(data, *params, derive_seed(a.cost_seed, {i}))
                                 : load_cost_model(a.costs[i], data);
        problems.push_back({fs::path(a.data[i]).stem().string(), std::move(data), std::move(model)});
    }

    BenchConfig cfg;
    for (const auto& name : a.algos) cfg.algorithms.push_back(algorithm_from_string(name));
    cfg.mcs = a.mcs;
    cfg.rs = a.rs;
    cfg.folds = a.k;
    cfg.seeds = a.seeds;
    cfg.alpha = a.alpha;
    cfg.threads = a.threads;
    for (double mc : cfg.mcs)
        if (!(mc >= 0.0)) throw UsageError("--mc values must be non-negative");
    if (cfg.mcs.empty())
        for (const auto& p : problems)
            if (p.model.matrix().max_entry() == 0.0 && p.model.total_test_cost() == 0.0)
                throw DataError("problem '" + p.name + "' has zero standard cost");

    const auto result = run_bench(problems, cfg);
    std::ostringstream summary, comparisons, folds;
    write_summary(summary, result);
    write_comparisons(comparisons, result, cfg.alpha);
    write_folds(folds, result);
    write_file(outputs[0], summary.str());
    write_file(outputs[1], comparisons.str());
    write_file(outputs[2], folds.str());
    out << summary.str();
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cost-sensitive decision tree induction", "costtree"};
    app.require_subcommand(1);
    GendataArgs gendata;
    GencostsArgs gencosts;
    TrainArgs train_args;
    EvalArgs eval_args;
    BenchArgs bench;
    add_gendata(app, gendata);
    add_gencosts(app, gencosts);
    add_train(app, train_args);
    add_eval(app, eval_args);
    add_bench(app, bench);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front())
            err << "run '" << app.get_name() << ' ' << sub->get_name() << " --help' for usage\n";
        return kUsage;
    }

    try {
        if (app.got_subcommand("gendata")) return run_gendata(gendata, out);
        if (app.got_subcommand("gencosts")) return run_gencosts(gencosts, out);
        if (app.got_subcommand("train")) return run_train(train_args, out, err);
        if (app.got_subcommand("eval")) return run_eval(eval_args, out, err);
        return run_bench_cmd(bench, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UnsupportedFeature& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const nlohmann::json::exception& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace costtree::cli
