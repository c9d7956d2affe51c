#include "costtree/costs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "costtree/error.hpp"
#include "json.hpp"

namespace costtree {

using nlohmann::json;

CostMatrix::CostMatrix(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i].size() != rows_.size()) throw DataError("cost matrix must be square");
        for (std::size_t j = 0; j < rows_.size(); ++j) {
            double v = rows_[i][j];
            if (!std::isfinite(v) || v < 0) throw DataError("cost matrix entries must be finite and non-negative");
            if (i == j && v != 0) throw DataError("cost matrix diagonal must be zero");
        }
    }
}

CostMatrix CostMatrix::uniform(std::size_t classes, double mc) {
    std::vector<std::vector<double>> rows(classes, std::vector<double>(classes, mc));
    for (std::size_t i = 0; i < classes; ++i) rows[i][i] = 0.0;
    return CostMatrix(std::move(rows));
}

bool CostMatrix::is_uniform() const {
    std::optional<double> first;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j) {
            if (i == j) continue;
            if (!first) first = rows_[i][j];
            else if (rows_[i][j] != *first) return false;
        }
    return true;
}

double CostMatrix::max_entry() const {
    double m = 0.0;
    for (const auto& r : rows_)
        for (double v : r) m = std::max(m, v);
    return m;
}

double CostMatrix::off_diagonal_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (i != j) s += rows_[i][j];
    return s;
}

double CostMatrix::off_diagonal_mean() const {
    auto n = size();
    return n < 2 ? 0.0 : off_diagonal_sum() / static_cast<double>(n * (n - 1));
}

CostModel::CostModel(std::vector<double> test_costs, std::vector<TestGroup> groups, CostMatrix matrix)
    : test_costs_(std::move(test_costs)),
      groups_(std::move(groups)),
      membership_(test_costs_.size()),
      matrix_(std::move(matrix)) {
    for (double c : test_costs_)
        if (!std::isfinite(c) || c < 0) throw DataError("test costs must be finite and non-negative");
    for (GroupId g = 0; g < groups_.size(); ++g) {
        const auto& grp = groups_[g];
        if (!std::isfinite(grp.discount) || grp.discount < 0)
            throw DataError("group '" + grp.name + "' has an invalid discount");
        for (auto a : grp.members) {
            if (a >= test_costs_.size()) throw DataError("group '" + grp.name + "' references an unknown test");
            if (membership_[a]) throw DataError("a test may belong to a single group");
            membership_[a] = g;
            // Marginal costs must stay positive for any member with a positive base cost.
            if (grp.discount > 0 && grp.discount >= test_costs_[a])
                throw DataError("group '" + grp.name + "' discount must be below every member cost");
        }
    }
}

double CostModel::base_cost(std::size_t attr) const {
    if (attr >= test_costs_.size()) throw std::out_of_range("unknown attribute " + std::to_string(attr));
    return test_costs_[attr];
}

std::optional<GroupId> CostModel::group_of(std::size_t attr) const {
    if (attr >= membership_.size()) throw std::out_of_range("unknown attribute " + std::to_string(attr));
    return membership_[attr];
}

double CostModel::context_cost(std::size_t attr, const ChargeContext& ctx) const {
    double base = base_cost(attr);
    if (ctx.administered(attr)) return 0.0;
    if (auto g = membership_[attr]; g && ctx.group_charged(*g)) return base - groups_[*g].discount;
    return base;
}

std::pair<double, ChargeContext> CostModel::charge(std::size_t attr, const ChargeContext& ctx) const {
    ChargeContext next = ctx;
    double c = next.administer(attr, *this);
    return {c, std::move(next)};
}

double CostModel::misclassification_cost(ClassId predicted, ClassId actual) const {
    if (predicted >= num_classes() || actual >= num_classes()) throw std::out_of_range("unknown class");
    return matrix_(actual, predicted);
}

double CostModel::total_test_cost() const {
    std::vector<std::size_t> all(test_costs_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return charge_sequence(all, *this);
}

CostModel CostModel::with_matrix(CostMatrix m) const {
    return CostModel(test_costs_, groups_, std::move(m));
}

CostModel CostModel::with_scaled_costs(double factor) const {
    auto costs = test_costs_;
    for (auto& c : costs) c *= factor;
    auto groups = groups_;
    for (auto& g : groups) g.discount *= factor;
    auto rows = matrix_.rows();
    for (auto& r : rows)
        for (auto& v : r) v *= factor;
    return CostModel(std::move(costs), std::move(groups), CostMatrix(std::move(rows)));
}

double ChargeContext::administer(std::size_t attr, const CostModel& model) {
    double c = model.context_cost(attr, *this);
    if (tests_.size() <= attr) tests_.resize(model.num_tests(), false);
    tests_[attr] = true;
    if (auto g = model.group_of(attr)) {
        if (groups_.size() <= *g) groups_.resize(model.groups().size(), false);
        groups_[*g] = true;
    }
    return c;
}

std::vector<std::size_t> ChargeContext::tests() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tests_.size(); ++i)
        if (tests_[i]) out.push_back(i);
    return out;
}

std::size_t ChargeContext::size() const {
    return static_cast<std::size_t>(std::count(tests_.begin(), tests_.end(), true));
}

double charge_sequence(std::span<const std::size_t> attrs, const CostModel& model, ChargeContext ctx) {
    double total = 0.0;
    for (auto a : attrs) total += ctx.administer(a, model);
    return total;
}

namespace {

CostMatrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw DataError("cost matrix must be an array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : j) {
        if (!r.is_array()) throw DataError("cost matrix must be an array of rows");
        std::vector<double> row;
        for (const auto& v : r) {
            if (!v.is_number()) throw DataError("cost matrix entries must be numbers");
            row.push_back(v.get<double>());
        }
        rows.push_back(std::move(row));
    }
    return CostMatrix(std::move(rows));
}

json parse_json(std::istream& in) {
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed cost file: ") + e.what());
    }
}

}  // namespace

CostModel read_cost_model(std::istream& in, const Dataset& data) {
    json j = parse_json(in);
    try {
        std::map<std::string, GroupId> group_ids;
        std::vector<TestGroup> groups;
        if (j.contains("groups")) {
            for (const auto& g : j.at("groups")) {
                TestGroup grp;
                grp.name = g.at("name").get<std::string>();
                grp.discount = g.at("discount_amount").get<double>();
                if (!group_ids.emplace(grp.name, groups.size()).second)
                    throw DataError("duplicate group '" + grp.name + "'");
                groups.push_back(std::move(grp));
            }
        }
        std::vector<std::optional<double>> costs(data.num_attributes());
        for (const auto& t : j.at("tests")) {
            auto attr = data.attribute_index(t.at("name").get<std::string>());
            if (costs[attr]) throw DataError("duplicate test '" + data.attribute(attr).name + "'");
            costs[attr] = t.at("cost").get<double>();
            if (t.contains("group") && !t.at("group").is_null()) {
                auto name = t.at("group").get<std::string>();
                auto it = group_ids.find(name);
                if (it == group_ids.end()) throw DataError("unknown group '" + name + "'");
                groups[it->second].members.push_back(attr);
            }
        }
        std::vector<double> flat;
        for (std::size_t a = 0; a < costs.size(); ++a) {
            if (!costs[a]) throw DataError("no cost given for test '" + data.attribute(a).name + "'");
            flat.push_back(*costs[a]);
        }
        for (auto& g : groups) std::sort(g.members.begin(), g.members.end());
        auto matrix = matrix_from_json(j.at("matrix"));
        if (matrix.size() != data.num_classes()) throw DataError("cost matrix size does not match the class count");
        return CostModel(std::move(flat), std::move(groups), std::move(matrix));
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed cost file: ") + e.what());
    }
}

CostModel load_cost_model(const std::filesystem::path& path, const Dataset& data) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open cost file '" + path.string() + "'");
    return read_cost_model(in, data);
}

void write_cost_model(std::ostream& out, const CostModel& model, const Dataset& data) {
    if (model.num_tests() != data.num_attributes()) throw DataError("cost model does not match the dataset schema");
    json tests = json::array();
    for (std::size_t a = 0; a < model.num_tests(); ++a) {
        json t = {{"name", data.attribute(a).name}, {"cost", model.base_cost(a)}};
        if (auto g = model.group_of(a)) t["group"] = model.groups()[*g].name;
        tests.push_back(std::move(t));
    }
    json groups = json::array();
    for (const auto& g : model.groups()) groups.push_back({{"name", g.name}, {"discount_amount", g.discount}});
    json j = {{"tests", std::move(tests)}, {"groups", std::move(groups)}, {"matrix", model.matrix().rows()}};
    out << j.dump(2) << '\n';
}

void save_cost_model(const std::filesystem::path& path, const CostModel& model, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    write_cost_model(out, model, data);
}

CostMatrix read_cost_matrix(std::istream& in) {
    json j = parse_json(in);
    return matrix_from_json(j.is_object() && j.contains("matrix") ? j.at("matrix") : j);
}

CostMatrix load_cost_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open matrix file '" + path.string() + "'");
    return read_cost_matrix(in);
}

}  // namespace costtree
