#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "costtree/act.hpp"
#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"
#include "costtree/error.hpp"
#include "costtree/estimate.hpp"
#include "costtree/eval.hpp"
#include "costtree/generators.hpp"
#include "costtree/learners.hpp"
#include "costtree/tree.hpp"

namespace py = pybind11;
using namespace costtree;

namespace {

Dataset dataset_from_csv(const std::string& text) {
    std::istringstream in(text);
    return read_dataset(in);
}

std::string dataset_to_csv(const Dataset& d) {
    std::ostringstream out;
    write_dataset(out, d);
    return out.str();
}

CostModel costs_from_json(const std::string& text, const Dataset& d) {
    std::istringstream in(text);
    return read_cost_model(in, d);
}

std::string costs_to_json(const CostModel& m, const Dataset& d) {
    std::ostringstream out;
    write_cost_model(out, m, d);
    return out.str();
}

LearnerOptions options(std::size_t r, std::uint64_t seed, std::optional<double> w, std::optional<double> cf,
                       double prune_cf) {
    LearnerOptions o;
    o.r = r;
    o.seed = seed;
    o.w = w;
    o.cf = cf;
    o.prune_cf = prune_cf;
    return o;
}

py::dict report_dict(const EvalReport& r) {
    py::list folds;
    for (const auto& f : r.folds) {
        py::dict d;
        d["avg_cost"] = f.avg_cost;
        d["avg_tcost"] = f.avg_tcost;
        d["avg_mcost"] = f.avg_mcost;
        d["normalized"] = f.normalized;
        d["accuracy"] = f.accuracy;
        d["tree_size"] = f.tree_size;
        d["test_size"] = f.test_size;
        folds.append(d);
    }
    py::dict out;
    out["standard"] = r.standard;
    out["mean_cost"] = r.mean_cost;
    out["mean_normalized"] = r.mean_normalized;
    out["normalized_half_width"] = r.normalized_half_width;
    out["mean_accuracy"] = r.mean_accuracy;
    out["mean_tree_size"] = r.mean_tree_size;
    out["folds"] = folds;
    return out;
}

py::dict test_dict(const TestResult& t) {
    py::dict d;
    d["winner"] = std::string(to_string(t.winner));
    d["p"] = t.p;
    d["statistic"] = t.statistic;
    return d;
}

Better better_from(const std::string& s) {
    if (s == "higher") return Better::Higher;
    if (s == "lower") return Better::Lower;
    throw std::invalid_argument("better must be 'higher' or 'lower'");
}

}  // namespace

PYBIND11_MODULE(_costtree, m) {
    m.doc() = "Cost-sensitive decision tree induction";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<UnsupportedFeature>(m, "UnsupportedFeature", PyExc_NotImplementedError);

    py::class_<Dataset>(m, "Dataset")
        .def_static("from_csv", &dataset_from_csv, py::arg("text"))
        .def_static("load", [](const std::filesystem::path& p) { return load_dataset(p); }, py::arg("path"))
        .def("to_csv", &dataset_to_csv)
        .def("save", [](const Dataset& d, const std::filesystem::path& p) { save_dataset(p, d); }, py::arg("path"))
        .def_property_readonly("classes", &Dataset::classes)
        .def_property_readonly("attributes",
                               [](const Dataset& d) {
                                   std::vector<std::string> names;
                                   for (const auto& a : d.schema()) names.push_back(a.name);
                                   return names;
                               })
        .def_property_readonly("labels",
                               [](const Dataset& d) {
                                   std::vector<ClassId> out;
                                   for (const auto& e : d.examples()) out.push_back(e.label);
                                   return out;
                               })
        .def("values", [](const Dataset& d, std::size_t row) { return d.examples().at(row).values; })
        .def("class_frequencies", &Dataset::class_frequencies)
        .def("__len__", &Dataset::size);

    py::class_<CostModel>(m, "CostModel")
        .def(py::init([](std::vector<double> costs, std::vector<std::vector<double>> matrix) {
                 return CostModel(std::move(costs), {}, CostMatrix(std::move(matrix)));
             }),
             py::arg("test_costs"), py::arg("matrix"))
        .def_static("from_json", &costs_from_json, py::arg("text"), py::arg("dataset"))
        .def_static("load", [](const std::filesystem::path& p, const Dataset& d) { return load_cost_model(p, d); },
                    py::arg("path"), py::arg("dataset"))
        .def("to_json", &costs_to_json, py::arg("dataset"))
        .def_property_readonly("test_costs", &CostModel::test_costs)
        .def_property_readonly("matrix", [](const CostModel& c) { return c.matrix().rows(); })
        .def("total_test_cost", &CostModel::total_test_cost)
        .def("with_uniform_penalty",
             [](const CostModel& c, double mc) {
                 return CostModel(c.test_costs(), c.groups(), CostMatrix::uniform(c.matrix().size(), mc));
             },
             py::arg("mc"))
        .def("charge", [](const CostModel& c, std::vector<std::size_t> tests) { return charge_sequence(tests, c); },
             py::arg("tests"));

    py::class_<Tree>(m, "Tree")
        .def("size", [](const Tree& t) { return tree_size(t); })
        .def("leaves", [](const Tree& t) { return tree_leaves(t); })
        .def("depth", [](const Tree& t) { return tree_depth(t); })
        .def("is_leaf", &Tree::is_leaf)
        .def("to_text", [](const Tree& t, const Dataset& schema) { return tree_to_string(t, schema); },
             py::arg("schema"))
        .def_static("from_text", [](const std::string& s, const Dataset& schema) { return tree_from_string(s, schema); },
                    py::arg("text"), py::arg("schema"))
        .def("classify",
             [](const Tree& t, const std::vector<double>& values, const CostModel& model) {
                 auto c = classify(t, values, model);
                 return py::make_tuple(c.label, c.charge.total);
             },
             py::arg("values"), py::arg("model"))
        .def(py::self == py::self);

    m.def("generate_multiplexer", &generate_multiplexer, py::arg("address_bits"), py::arg("n"), py::arg("seed") = 0);
    m.def("generate_xor", &generate_xor, py::arg("relevant"), py::arg("irrelevant"), py::arg("n"),
          py::arg("seed") = 0);
    m.def("generate_xor3d", &generate_numeric_xor3d, py::arg("irrelevant"), py::arg("n"), py::arg("seed") = 0);
    m.def("generate_multi_xor", &generate_multi_xor, py::arg("n"), py::arg("seed") = 0);
    m.def("generate_multi_and_or", &generate_multi_and_or, py::arg("n"), py::arg("seed") = 0);

    m.def(
        "assign_costs",
        [](const Dataset& d, double lo, double hi, double g, double d_frac, double phi, bool rho, double mc,
           std::uint64_t seed) {
            CostAssignmentParams p;
            p.cost_lo = lo;
            p.cost_hi = hi;
            p.group_fraction = g;
            p.delayed_fraction = d_frac;
            p.group_discount = phi;
            p.gain_proportional = rho;
            auto model = assign_costs(d, p, seed);
            return CostModel(model.test_costs(), model.groups(), CostMatrix::uniform(d.num_classes(), mc));
        },
        py::arg("dataset"), py::arg("lo") = 1.0, py::arg("hi") = 100.0, py::arg("g") = 0.2, py::arg("d") = 0.0,
        py::arg("phi") = 0.8, py::arg("rho") = true, py::arg("mc") = 100.0, py::arg("seed") = 0);

    m.def("expected_error", &expected_error, py::arg("m"), py::arg("s"), py::arg("cf"));
    m.def(
        "problem_scale",
        [](const CostModel& model) {
            auto s = problem_scale(model);
            py::dict d;
            d["x"] = s.x;
            d["w"] = s.w;
            d["cf"] = s.cf;
            d["tc"] = s.tc;
            return d;
        },
        py::arg("model"));

    m.def("algorithms", [] {
        std::vector<std::string> out;
        for (auto a : all_algorithms()) out.emplace_back(to_string(a));
        return out;
    });

    m.def(
        "train",
        [](const std::string& algo, const Dataset& d, const CostModel& model, std::size_t r, std::uint64_t seed,
           std::optional<double> w, std::optional<double> cf, double prune_cf) {
            auto rows = d.all_rows();
            py::gil_scoped_release release;
            return train(algorithm_from_string(algo), d, rows, model, options(r, seed, w, cf, prune_cf));
        },
        py::arg("algo"), py::arg("dataset"), py::arg("model"), py::arg("r") = 5, py::arg("seed") = 0,
        py::arg("w") = py::none(), py::arg("cf") = py::none(), py::arg("prune_cf") = 0.25);

    m.def(
        "total_cost",
        [](const Tree& t, const Dataset& d, const CostModel& model, double cf) {
            auto e = total_cost(t, d, d.all_rows(), model, cf);
            py::dict out;
            out["tcost"] = e.tcost;
            out["mcost"] = e.mcost;
            out["total"] = e.total;
            return out;
        },
        py::arg("tree"), py::arg("dataset"), py::arg("model"), py::arg("cf") = 0.25);

    m.def(
        "kfold",
        [](const std::string& algo, const Dataset& d, const CostModel& model, std::size_t k, std::uint64_t seed,
           std::size_t r) {
            const auto a = algorithm_from_string(algo);
            Inducer inducer = [&](const Dataset& data, std::span<const std::size_t> rows, const CostModel& mm,
                                  std::size_t fold) {
                return train(a, data, rows, mm, options(r, derive_seed(seed, {fold}), {}, {}, 0.25));
            };
            EvalReport report;
            {
                py::gil_scoped_release release;
                report = kfold_cv(d, model, inducer, k, seed);
            }
            return report_dict(report);
        },
        py::arg("algo"), py::arg("dataset"), py::arg("model"), py::arg("k") = 10, py::arg("seed") = 0,
        py::arg("r") = 5);

    m.def(
        "paired_ttest",
        [](const std::vector<double>& a, const std::vector<double>& b, double alpha, const std::string& better) {
            return test_dict(paired_ttest(a, b, alpha, better_from(better)));
        },
        py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05, py::arg("better") = "higher");
    m.def(
        "wilcoxon",
        [](const std::vector<double>& a, const std::vector<double>& b, double alpha, const std::string& better) {
            return test_dict(wilcoxon(a, b, alpha, better_from(better)));
        },
        py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05, py::arg("better") = "higher");
}
