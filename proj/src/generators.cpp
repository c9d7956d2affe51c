#include "costtree/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "costtree/error.hpp"
#include "costtree/induction.hpp"
#include "costtree/random.hpp"

namespace costtree {

namespace {

Attribute binary(std::string name) { return Attribute{std::move(name), AttributeKind::Nominal, {"0", "1"}, 0}; }

Attribute numeric(std::string name) { return Attribute{std::move(name), AttributeKind::Numeric, {}, 0}; }

std::vector<Attribute> indexed(std::vector<Attribute> schema) {
    for (std::size_t i = 0; i < schema.size(); ++i) schema[i].index = i;
    return schema;
}

std::vector<double> random_bits(std::size_t n, Rng& rng) {
    std::bernoulli_distribution bit(0.5);
    std::vector<double> v(n);
    for (auto& x : v) x = bit(rng) ? 1.0 : 0.0;
    return v;
}

// Eleven bits: s0, s1, x0..x8. `rule` maps (selector, x) to a label bit.
template <typename Rule>
Dataset selector_dataset(std::size_t n, std::uint64_t seed, Rule rule) {
    std::vector<Attribute> schema{binary("s0"), binary("s1")};
    for (int i = 0; i < 9; ++i) schema.push_back(binary("x" + std::to_string(i)));
    Dataset data(indexed(std::move(schema)), {"0", "1"});
    Rng rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        auto v = random_bits(11, rng);
        const int sel = static_cast<int>(v[0]) * 2 + static_cast<int>(v[1]);
        auto x = [&](int i) { return v[2 + i] != 0.0; };
        const ClassId label = rule(sel, x) ? 1 : 0;
        data.add(Example{std::move(v), label});
    }
    return data;
}

}  // namespace

Dataset generate_multiplexer(std::size_t address_bits, std::size_t n_instances, std::uint64_t seed) {
    if (address_bits < 1 || address_bits > 16) throw std::invalid_argument("multiplexer needs 1..16 address bits");
    const std::size_t data_bits = std::size_t{1} << address_bits;
    std::vector<Attribute> schema;
    for (std::size_t i = 0; i < address_bits; ++i) schema.push_back(binary("a" + std::to_string(i)));
    for (std::size_t i = 0; i < data_bits; ++i) schema.push_back(binary("d" + std::to_string(i)));
    Dataset data(indexed(std::move(schema)), {"0", "1"});
    Rng rng(seed);
    for (std::size_t k = 0; k < n_instances; ++k) {
        auto v = random_bits(address_bits + data_bits, rng);
        std::size_t addr = 0;
        for (std::size_t i = 0; i < address_bits; ++i) addr = addr * 2 + static_cast<std::size_t>(v[i]);
        const auto label = static_cast<ClassId>(v[address_bits + addr]);
        data.add(Example{std::move(v), label});
    }
    return data;
}

Dataset generate_xor(std::size_t relevant, std::size_t irrelevant, std::size_t n_instances, std::uint64_t seed) {
    if (relevant < 1) throw std::invalid_argument("xor needs at least one relevant bit");
    std::vector<Attribute> schema;
    for (std::size_t i = 0; i < relevant; ++i) schema.push_back(binary("r" + std::to_string(i)));
    for (std::size_t i = 0; i < irrelevant; ++i) schema.push_back(binary("n" + std::to_string(i)));
    Dataset data(indexed(std::move(schema)), {"0", "1"});
    Rng rng(seed);
    for (std::size_t k = 0; k < n_instances; ++k) {
        auto v = random_bits(relevant + irrelevant, rng);
        std::size_t parity = 0;
        for (std::size_t i = 0; i < relevant; ++i) parity ^= static_cast<std::size_t>(v[i]);
        data.add(Example{std::move(v), parity});
    }
    return data;
}

Dataset generate_numeric_xor3d(std::size_t irrelevant, std::size_t n_instances, std::uint64_t seed) {
    std::vector<Attribute> schema{numeric("x0"), numeric("x1"), numeric("x2")};
    for (std::size_t i = 0; i < irrelevant; ++i) schema.push_back(numeric("n" + std::to_string(i)));
    Dataset data(indexed(std::move(schema)), {"-1", "1"});
    Rng rng(seed);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (std::size_t k = 0; k < n_instances; ++k) {
        std::vector<double> v(3 + irrelevant);
        for (auto& x : v) x = coord(rng);
        const ClassId label = v[0] * v[1] * v[2] > 0.0 ? 1 : 0;
        data.add(Example{std::move(v), label});
    }
    return data;
}

Dataset generate_multi_xor(std::size_t n_instances, std::uint64_t seed) {
    return selector_dataset(n_instances, seed, [](int sel, auto x) {
        const int a = 2 * sel;
        return x(a) != x(a + 1);
    });
}

Dataset generate_multi_and_or(std::size_t n_instances, std::uint64_t seed) {
    return selector_dataset(n_instances, seed, [](int sel, auto x) {
        switch (sel) {
            case 0: return x(0) && x(1);
            case 1: return x(2) || x(3);
            case 2: return x(4) && x(5);
            default: return x(6) || x(7) || x(8);
        }
    });
}

void CostAssignmentParams::validate() const {
    if (delayed_fraction != 0.0) throw UnsupportedFeature("delayed tests are not supported (d must be 0)");
    if (!(cost_lo > 0.0) || !(cost_lo <= cost_hi) || !std::isfinite(cost_hi))
        throw std::invalid_argument("cost range must satisfy 0 < lo <= hi");
    if (!(group_fraction >= 0.0 && group_fraction <= 1.0)) throw std::invalid_argument("g must lie in [0, 1]");
    if (!(group_discount >= 0.0 && group_discount < 1.0)) throw std::invalid_argument("phi must lie in [0, 1)");
}

CostModel assign_costs(const Dataset& data, const CostAssignmentParams& params, std::uint64_t seed) {
    params.validate();
    const std::size_t n = data.num_attributes();
    if (params.gain_proportional && data.empty())
        throw std::invalid_argument("gain-proportional costs need a non-empty dataset");

    Rng rng(seed);
    const double lo = params.cost_lo, hi = params.cost_hi;
    std::vector<double> costs(n, lo);
    if (params.gain_proportional) {
        const auto rows = data.all_rows();
        std::vector<double> gains(n);
        for (std::size_t a = 0; a < n; ++a) gains[a] = best_gain(data, rows, a);
        const double max_gain = gains.empty() ? 0.0 : *std::max_element(gains.begin(), gains.end());
        const double sd = (hi - lo) / 4.0;
        for (std::size_t a = 0; a < n; ++a) {
            const double mean = max_gain > 0.0 ? lo + gains[a] / max_gain * (hi - lo) : lo;
            if (sd == 0.0) {
                costs[a] = lo;
                continue;
            }
            std::normal_distribution<double> normal(mean, sd);
            double c = normal(rng);
            for (int attempt = 1; attempt < 100 && (c < lo || c > hi); ++attempt) c = normal(rng);
            costs[a] = std::clamp(c, lo, hi);
        }
    } else {
        std::uniform_real_distribution<double> uniform(lo, hi);
        for (auto& c : costs) c = lo == hi ? lo : uniform(rng);
    }

    const auto n_groups = static_cast<std::size_t>(std::llround(params.group_fraction * static_cast<double>(n)));
    std::vector<TestGroup> groups(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) groups[g].name = "g" + std::to_string(g);
    if (n_groups > 0) {
        // n_groups + 1 equally likely outcomes; the last one means "no group".
        std::uniform_int_distribution<std::size_t> pick(0, n_groups);
        for (std::size_t a = 0; a < n; ++a) {
            const auto g = pick(rng);
            if (g < n_groups) groups[g].members.push_back(a);
        }
    }
    for (auto& g : groups) {
        if (g.members.empty()) continue;
        double cheapest = costs[g.members.front()];
        for (auto a : g.members) cheapest = std::min(cheapest, costs[a]);
        g.discount = params.group_discount * cheapest;
    }

    const std::size_t k = data.num_classes();
    return CostModel(std::move(costs), std::move(groups), CostMatrix::uniform(k, 0.0));
}

}  // namespace costtree
