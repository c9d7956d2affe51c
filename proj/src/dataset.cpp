#include "costtree/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "costtree/error.hpp"

namespace costtree {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

// Splits on commas that are not nested inside braces.
std::vector<std::string> split_top_level(std::string_view line) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char ch : line) {
        if (ch == '{') ++depth;
        if (ch == '}') --depth;
        if (depth < 0) throw DataError("malformed header: unbalanced braces");
        if (ch == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (depth != 0) throw DataError("malformed header: unbalanced braces");
    out.push_back(trim(cur));
    return out;
}

std::vector<std::string> split_plain(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

void check_unique(const std::vector<std::string>& symbols, const std::string& what) {
    if (symbols.empty()) throw DataError("empty domain for " + what);
    std::set<std::string> seen;
    for (const auto& s : symbols) {
        if (s.empty()) throw DataError("empty symbol in domain of " + what);
        if (!seen.insert(s).second) throw DataError("duplicate symbol '" + s + "' in " + what);
    }
}

struct Column {
    std::string name;
    bool numeric = false;
    std::vector<std::string> domain;
};

Column parse_column(const std::string& field) {
    auto colon = field.find(':');
    if (colon == std::string::npos) throw DataError("malformed header field '" + field + "'");
    Column c;
    c.name = trim(std::string_view(field).substr(0, colon));
    std::string kind = trim(std::string_view(field).substr(colon + 1));
    if (c.name.empty()) throw DataError("malformed header: empty column name");
    if (kind == "num") {
        c.numeric = true;
    } else if (kind.size() >= 2 && kind.front() == '{' && kind.back() == '}') {
        c.domain = split_plain(std::string_view(kind).substr(1, kind.size() - 2));
        check_unique(c.domain, "column '" + c.name + "'");
    } else {
        throw DataError("malformed header: unknown kind '" + kind + "' for column '" + c.name + "'");
    }
    return c;
}

}  // namespace

Dataset::Dataset(std::vector<Attribute> schema, std::vector<std::string> classes)
    : schema_(std::move(schema)), classes_(std::move(classes)) {
    if (classes_.size() < 2) throw DataError("a dataset needs at least two classes");
    check_unique(classes_, "class set");
    std::set<std::string> names;
    for (std::size_t i = 0; i < schema_.size(); ++i) {
        auto& a = schema_[i];
        a.index = i;
        if (!names.insert(a.name).second) throw DataError("duplicate attribute name '" + a.name + "'");
        if (a.nominal()) check_unique(a.domain, "attribute '" + a.name + "'");
    }
}

std::size_t Dataset::class_index(const std::string& symbol) const {
    auto it = std::find(classes_.begin(), classes_.end(), symbol);
    if (it == classes_.end()) throw DataError("unknown class '" + symbol + "'");
    return static_cast<std::size_t>(it - classes_.begin());
}

std::size_t Dataset::attribute_index(const std::string& name) const {
    for (const auto& a : schema_)
        if (a.name == name) return a.index;
    throw DataError("unknown attribute '" + name + "'");
}

void Dataset::add(Example e) {
    if (e.values.size() != schema_.size()) throw DataError("arity mismatch");
    for (std::size_t i = 0; i < schema_.size(); ++i) {
        double v = e.values[i];
        if (!std::isfinite(v)) throw DataError("non-finite value for '" + schema_[i].name + "'");
        if (schema_[i].nominal()) {
            if (v < 0 || v != std::floor(v) || v >= static_cast<double>(schema_[i].domain.size()))
                throw DataError("unknown nominal value for '" + schema_[i].name + "'");
        }
    }
    if (e.label >= classes_.size()) throw DataError("unknown class label");
    examples_.push_back(std::move(e));
}

std::vector<std::size_t> Dataset::all_rows() const {
    std::vector<std::size_t> rows(examples_.size());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return rows;
}

std::vector<std::size_t> Dataset::all_attributes() const {
    std::vector<std::size_t> attrs(schema_.size());
    for (std::size_t i = 0; i < attrs.size(); ++i) attrs[i] = i;
    return attrs;
}

std::vector<std::size_t> Dataset::class_counts(std::span<const std::size_t> rows) const {
    std::vector<std::size_t> counts(classes_.size(), 0);
    for (auto r : rows) ++counts[examples_[r].label];
    return counts;
}

std::vector<double> Dataset::class_frequencies() const {
    std::vector<double> f(classes_.size(), 0.0);
    if (examples_.empty()) return f;
    for (const auto& e : examples_) f[e.label] += 1.0;
    for (auto& x : f) x /= static_cast<double>(examples_.size());
    return f;
}

Dataset read_dataset(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("malformed header: empty file");
    auto fields = split_top_level(line);
    if (fields.size() < 2) throw DataError("malformed header: need at least one attribute and a class column");

    std::vector<Column> columns;
    for (const auto& f : fields) columns.push_back(parse_column(f));
    if (columns.back().numeric) throw DataError("malformed header: class column must be nominal");

    std::vector<Attribute> schema;
    for (std::size_t i = 0; i + 1 < columns.size(); ++i) {
        Attribute a;
        a.name = columns[i].name;
        a.kind = columns[i].numeric ? AttributeKind::Numeric : AttributeKind::Nominal;
        a.domain = columns[i].domain;
        schema.push_back(std::move(a));
    }
    Dataset data(std::move(schema), columns.back().domain);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_plain(line);
        auto where = " (line " + std::to_string(line_no) + ")";
        if (cells.size() != columns.size()) throw DataError("arity mismatch" + where);
        Example e;
        e.values.reserve(cells.size() - 1);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto& cell = cells[i];
            if (cell.empty() || cell == "?") throw DataError("missing value" + where);
            const auto& col = columns[i];
            if (col.numeric) {
                double v = 0;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
                    throw DataError("malformed numeric value '" + cell + "'" + where);
                e.values.push_back(v);
                continue;
            }
            auto it = std::find(col.domain.begin(), col.domain.end(), cell);
            if (it == col.domain.end())
                throw DataError("unknown nominal value '" + cell + "' for '" + col.name + "'" + where);
            auto idx = static_cast<std::size_t>(it - col.domain.begin());
            if (i + 1 == cells.size()) e.label = idx;
            else e.values.push_back(static_cast<double>(idx));
        }
        data.add(std::move(e));
    }
    return data;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
    return read_dataset(in);
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const Dataset& data) {
    auto braces = [](const std::vector<std::string>& d) {
        std::string s = "{";
        for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + d[i];
        return s + "}";
    };
    for (const auto& a : data.schema()) out << a.name << ':' << (a.nominal() ? braces(a.domain) : "num") << ',';
    out << "class:" << braces(data.classes()) << '\n';
    for (const auto& e : data.examples()) {
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            const auto& a = data.attribute(i);
            out << (a.nominal() ? a.domain[static_cast<std::size_t>(e.values[i])] : format_number(e.values[i])) << ',';
        }
        out << data.classes()[e.label] << '\n';
    }
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    write_dataset(out, data);
}

}  // namespace costtree
