#include "costtree/learners.hpp"

#include <stdexcept>
#include <string>

#include "costtree/act.hpp"
#include "costtree/induction.hpp"

namespace costtree {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::ID3: return "id3";
        case Algorithm::C45: return "c45";
        case Algorithm::LSID3: return "lsid3";
        case Algorithm::IDX: return "idx";
        case Algorithm::CSID3: return "csid3";
        case Algorithm::EG2: return "eg2";
        case Algorithm::DTMC: return "dtmc";
        case Algorithm::ACT: return "act";
    }
    return "?";
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> all{Algorithm::ID3, Algorithm::C45,   Algorithm::LSID3, Algorithm::IDX,
                                            Algorithm::CSID3, Algorithm::EG2, Algorithm::DTMC,  Algorithm::ACT};
    return all;
}

Algorithm algorithm_from_string(std::string_view name) {
    for (auto a : all_algorithms())
        if (to_string(a) == name) return a;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

bool is_anytime(Algorithm a) { return a == Algorithm::LSID3 || a == Algorithm::ACT; }

Tree train(Algorithm algorithm, const Dataset& data, std::span<const std::size_t> rows, const CostModel& model,
           const LearnerOptions& options) {
    if (rows.empty()) throw std::invalid_argument("train needs at least one example");
    if (model.num_tests() != data.num_attributes() || model.num_classes() != data.num_classes())
        throw std::invalid_argument("cost model does not match the dataset");
    const auto attrs = data.all_attributes();
    auto greedy = [&](Criterion c) {
        InducerConfig cfg;
        cfg.criterion = c;
        cfg.w = options.greedy_w;
        cfg.cf = options.prune_cf;
        cfg.seed = options.seed;
        cfg.min_split = options.min_split;
        return grow(data, rows, attrs, model, cfg);
    };
    switch (algorithm) {
        case Algorithm::ID3:
            return greedy(Criterion::ID3);
        case Algorithm::C45:
            return error_based_prune(greedy(Criterion::ID3), options.prune_cf);
        case Algorithm::IDX:
            return error_based_prune(greedy(Criterion::IDX), options.prune_cf);
        case Algorithm::CSID3:
            return error_based_prune(greedy(Criterion::CSID3), options.prune_cf);
        case Algorithm::EG2:
            return error_based_prune(greedy(Criterion::EG2), options.prune_cf);
        case Algorithm::DTMC:
            return greedy(Criterion::DTMC);
        case Algorithm::LSID3:
            return error_based_prune(lsid3_induce(data, rows, model, options.r, options.seed, options.min_split),
                                     options.prune_cf);
        case Algorithm::ACT: {
            AnytimeConfig cfg;
            cfg.r = options.r;
            cfg.seed = options.seed;
            cfg.w = options.w;
            cfg.cf = options.cf;
            cfg.min_split = options.min_split;
            return act_induce(data, rows, model, cfg);
        }
    }
    throw std::invalid_argument("unknown algorithm");
}

}  // namespace costtree
