#pragma once

#include <cstddef>
#include <cstdint>

#include "costtree/costs.hpp"
#include "costtree/dataset.hpp"

namespace costtree {

// Synthetic hard concepts. Every generator is a pure function of its arguments.

// a address bits followed by 2^a data bits; the label is the addressed data bit.
Dataset generate_multiplexer(std::size_t address_bits, std::size_t n_instances, std::uint64_t seed);

// Label is the parity of the first `relevant` bits; the rest are noise.
Dataset generate_xor(std::size_t relevant, std::size_t irrelevant, std::size_t n_instances, std::uint64_t seed);

// Three relevant coordinates uniform in [-1, 1]; label "1" iff their product is
// strictly positive, "-1" otherwise (a zero coordinate gives "-1").
Dataset generate_numeric_xor3d(std::size_t irrelevant, std::size_t n_instances, std::uint64_t seed);

// 11 bits. Bits s0,s1 select one of four sub-concepts over x0..x8:
//   Multi-XOR:    x0^x1, x2^x3, x4^x5, x6^x7   (x8 is irrelevant everywhere)
//   Multi-AND-OR: x0&x1, x2|x3, x4&x5, x6|x7|x8
Dataset generate_multi_xor(std::size_t n_instances, std::uint64_t seed);
Dataset generate_multi_and_or(std::size_t n_instances, std::uint64_t seed);

struct CostAssignmentParams {
    double cost_lo = 1.0;
    double cost_hi = 100.0;
    double group_fraction = 0.2;    // g
    double delayed_fraction = 0.0;  // d; delayed tests are unsupported, must be 0
    double group_discount = 0.8;    // phi, fraction of the cheapest member cost
    bool gain_proportional = true;  // rho

    void validate() const;
};

// Random test costs and groups for `data`. The returned model carries a zero
// misclassification matrix; attach a real one with CostModel::with_matrix.
CostModel assign_costs(const Dataset& data, const CostAssignmentParams& params, std::uint64_t seed);

}  // namespace costtree
