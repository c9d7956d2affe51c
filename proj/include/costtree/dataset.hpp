#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace costtree {

using ClassId = std::size_t;

enum class AttributeKind { Nominal, Numeric };

struct Attribute {
    std::string name;
    AttributeKind kind = AttributeKind::Nominal;
    std::vector<std::string> domain;  // nominal only
    std::size_t index = 0;

    bool nominal() const { return kind == AttributeKind::Nominal; }
    // Number of branches a test on this attribute produces.
    std::size_t arity() const { return nominal() ? domain.size() : 2; }
};

// Nominal values are stored as the index of the symbol in the attribute domain.
struct Example {
    std::vector<double> values;
    ClassId label = 0;
};

class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<Attribute> schema, std::vector<std::string> classes);

    const std::vector<Attribute>& schema() const { return schema_; }
    const Attribute& attribute(std::size_t i) const { return schema_.at(i); }
    std::size_t num_attributes() const { return schema_.size(); }

    const std::vector<std::string>& classes() const { return classes_; }
    std::size_t num_classes() const { return classes_.size(); }
    std::size_t class_index(const std::string& symbol) const;
    std::size_t attribute_index(const std::string& name) const;

    const std::vector<Example>& examples() const { return examples_; }
    const Example& example(std::size_t row) const { return examples_[row]; }
    std::size_t size() const { return examples_.size(); }
    bool empty() const { return examples_.empty(); }

    // Validates arity, nominal ranges, finiteness and label before appending.
    void add(Example e);

    std::vector<std::size_t> all_rows() const;
    std::vector<std::size_t> all_attributes() const;
    // Per-class counts over the given rows.
    std::vector<std::size_t> class_counts(std::span<const std::size_t> rows) const;
    // Per-class relative frequencies over the whole dataset.
    std::vector<double> class_frequencies() const;

private:
    std::vector<Attribute> schema_;
    std::vector<std::string> classes_;
    std::vector<Example> examples_;
};

// CSV with a typed header line: `name:{v1,v2}` or `name:num`, class last.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const Dataset& data);
void save_dataset(const std::filesystem::path& path, const Dataset& data);

// Shortest round-trip decimal representation.
std::string format_number(double v);

}  // namespace costtree
