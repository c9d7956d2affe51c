#include "costtree/tree.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "costtree/error.hpp"

namespace costtree {

Tree Tree::leaf(std::vector<std::size_t> counts, ClassId label) {
    Tree t;
    t.counts = std::move(counts);
    t.label = label;
    return t;
}

std::size_t Tree::examples() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t Tree::branch(double v) const {
    switch (kind) {
        case Kind::Numeric:
            return v <= threshold ? 0 : 1;
        case Kind::Nominal: {
            auto idx = static_cast<std::size_t>(v);
            if (v < 0 || idx >= children.size()) throw std::out_of_range("nominal value outside the split arity");
            return idx;
        }
        case Kind::Leaf:
            break;
    }
    throw std::logic_error("branch() on a leaf");
}

Classification classify(const Tree& tree, std::span<const double> values, const CostModel& model,
                        const ChargeContext& start) {
    Classification out;
    out.charge.tests = start;
    const Tree* node = &tree;
    while (!node->is_leaf()) {
        if (node->attribute >= values.size()) throw std::out_of_range("example does not match the tree schema");
        out.charge.total += out.charge.tests.administer(node->attribute, model);
        node = &node->children[node->branch(values[node->attribute])];
    }
    out.label = node->label;
    return out;
}

double average_tcost(const Tree& tree, const Dataset& data, std::span<const std::size_t> rows,
                     const CostModel& model, const ChargeContext& start) {
    if (rows.empty()) throw std::invalid_argument("average_tcost needs at least one example");
    double sum = 0.0;
    for (auto r : rows) sum += classify(tree, data.example(r).values, model, start).charge.total;
    return sum / static_cast<double>(rows.size());
}

double labelling_cost(std::span<const std::size_t> counts, ClassId label, const CostModel& model) {
    double c = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        if (counts[i] && i != label) c += static_cast<double>(counts[i]) * model.misclassification_cost(label, i);
    return c;
}

ClassId default_class(std::span<const std::size_t> counts, const CostModel& model) {
    if (counts.empty()) throw std::invalid_argument("default_class needs class counts");
    ClassId best = 0;
    if (model.matrix().is_uniform()) {
        for (ClassId c = 1; c < counts.size(); ++c)
            if (counts[c] > counts[best]) best = c;
        return best;
    }
    double best_cost = labelling_cost(counts, 0, model);
    for (ClassId c = 1; c < counts.size(); ++c) {
        double cost = labelling_cost(counts, c, model);
        if (cost < best_cost) {
            best = c;
            best_cost = cost;
        }
    }
    return best;
}

std::size_t tree_size(const Tree& tree) {
    std::size_t n = 1;
    for (const auto& c : tree.children) n += tree_size(c);
    return n;
}

std::size_t tree_leaves(const Tree& tree) {
    if (tree.is_leaf()) return 1;
    std::size_t n = 0;
    for (const auto& c : tree.children) n += tree_leaves(c);
    return n;
}

std::size_t tree_depth(const Tree& tree) {
    std::size_t d = 0;
    for (const auto& c : tree.children) d = std::max(d, tree_depth(c) + 1);
    return d;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string counts_text(const std::vector<std::size_t>& counts) {
    std::string s;
    for (std::size_t i = 0; i < counts.size(); ++i) s += (i ? "," : "") + std::to_string(counts[i]);
    return s;
}

std::string branch_text(const Tree& parent, std::size_t child, const Dataset& schema) {
    const auto& a = schema.attribute(parent.attribute);
    if (parent.kind == Tree::Kind::Nominal) return a.name + "=" + a.domain.at(child);
    return a.name + (child == 0 ? "<=" : ">") + format_number(parent.threshold);
}

void write_node(std::ostream& out, const Tree& t, const Dataset& schema, std::size_t depth, const std::string& branch) {
    out << std::string(2 * depth, ' ');
    if (!branch.empty()) out << branch << ": ";
    const auto& label = schema.classes().at(t.label);
    if (t.is_leaf()) {
        out << "leaf " << label << ' ' << counts_text(t.counts) << '\n';
        return;
    }
    const auto& a = schema.attribute(t.attribute);
    out << "split " << a.name;
    if (t.kind == Tree::Kind::Numeric) out << "<=" << format_number(t.threshold);
    out << ' ' << label << ' ' << counts_text(t.counts) << '\n';
    for (std::size_t i = 0; i < t.children.size(); ++i)
        write_node(out, t.children[i], schema, depth + 1, branch_text(t, i, schema));
}

struct Line {
    std::size_t depth = 0;
    std::string body;
    std::size_t number = 0;
};

std::vector<std::size_t> parse_counts(const std::string& s, std::size_t classes) {
    std::vector<std::size_t> counts;
    std::size_t start = 0;
    while (start <= s.size()) {
        auto end = s.find(',', start);
        if (end == std::string::npos) end = s.size();
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data() + start, s.data() + end, v);
        if (ec != std::errc() || ptr != s.data() + end) throw DataError("malformed counts '" + s + "'");
        counts.push_back(v);
        start = end + 1;
    }
    if (counts.size() != classes) throw DataError("count vector does not match the class set");
    return counts;
}

class TreeParser {
public:
    TreeParser(std::vector<Line> lines, const Dataset& schema) : lines_(std::move(lines)), schema_(schema) {}

    Tree parse() {
        if (lines_.empty()) throw DataError("empty tree file");
        Tree t = node(0);
        if (pos_ != lines_.size()) fail(lines_[pos_], "unexpected trailing node");
        return t;
    }

private:
    [[noreturn]] static void fail(const Line& l, const std::string& msg) {
        throw DataError("tree line " + std::to_string(l.number) + ": " + msg);
    }

    Tree node(std::size_t depth) {
        if (pos_ >= lines_.size()) throw DataError("tree file ended early");
        const Line& line = lines_[pos_++];
        if (line.depth != depth) fail(line, "unexpected indentation");
        std::string body = line.body;
        if (depth > 0) {
            auto sep = body.find(": ");
            if (sep == std::string::npos) fail(line, "missing branch prefix");
            body = body.substr(sep + 2);
        }
        std::istringstream ss(body);
        std::vector<std::string> tok;
        for (std::string s; ss >> s;) tok.push_back(s);
        Tree t;
        if (tok.size() == 3 && tok[0] == "leaf") {
            t.label = schema_.class_index(tok[1]);
            t.counts = parse_counts(tok[2], schema_.num_classes());
            return t;
        }
        if (tok.size() != 4 || tok[0] != "split") fail(line, "expected 'leaf' or 'split'");
        const std::string& test = tok[1];
        if (auto le = test.rfind("<="); le != std::string::npos) {
            t.kind = Tree::Kind::Numeric;
            t.attribute = schema_.attribute_index(test.substr(0, le));
            auto thr = test.substr(le + 2);
            auto [ptr, ec] = std::from_chars(thr.data(), thr.data() + thr.size(), t.threshold);
            if (ec != std::errc() || ptr != thr.data() + thr.size()) fail(line, "malformed threshold");
            if (schema_.attribute(t.attribute).nominal()) fail(line, "threshold on a nominal attribute");
        } else {
            t.kind = Tree::Kind::Nominal;
            t.attribute = schema_.attribute_index(test);
            if (!schema_.attribute(t.attribute).nominal()) fail(line, "numeric attribute without threshold");
        }
        t.label = schema_.class_index(tok[2]);
        t.counts = parse_counts(tok[3], schema_.num_classes());
        std::size_t arity = schema_.attribute(t.attribute).arity();
        for (std::size_t i = 0; i < arity; ++i) t.children.push_back(node(depth + 1));
        return t;
    }

    std::vector<Line> lines_;
    const Dataset& schema_;
    std::size_t pos_ = 0;
};

}  // namespace

void write_tree(std::ostream& out, const Tree& tree, const Dataset& schema) { write_node(out, tree, schema, 0, ""); }

std::string tree_to_string(const Tree& tree, const Dataset& schema) {
    std::ostringstream ss;
    write_tree(ss, tree, schema);
    return ss.str();
}

Tree read_tree(std::istream& in, const Dataset& schema) {
    std::vector<Line> lines;
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.find_first_not_of(' ') == std::string::npos) continue;
        auto indent = raw.find_first_not_of(' ');
        if (indent % 2 != 0) throw DataError("tree line " + std::to_string(number) + ": odd indentation");
        lines.push_back({indent / 2, raw.substr(indent), number});
    }
    return TreeParser(std::move(lines), schema).parse();
}

Tree tree_from_string(const std::string& text, const Dataset& schema) {
    std::istringstream ss(text);
    return read_tree(ss, schema);
}

}  // namespace costtree
