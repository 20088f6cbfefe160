#pragma once

#include <cstdint>

#include "taep/core_model.hpp"

namespace taep {

struct SynthConfig {
    std::uint64_t seed = 1;
    std::size_t n_train = 32;
    std::size_t n_test = 32;
    std::size_t l_seen = 4;
    std::size_t l_unseen = 2;
    std::size_t m = 8;  // embedding dimension
    std::size_t d = 8;  // feature dimension
    double label_density = 0.3;
    double noise_scale = 0.1;
    double transfer_tightness = 0.9;
};

struct SynthTask {
    Dataset train;  // labels over the seen classes only
    Dataset test;   // labels carry the full L-column truth
    LabelSpace labels;
};

// Deterministic synthetic transfer task. Unseen label prototypes are convex
// blends of the seen prototypes (weight = transfer_tightness) mixed with a
// fresh random direction; instance features are a seed-fixed linear map of
// the mean positive prototype plus Gaussian noise. Every entity draws from
// its own named stream, so changing one count never reshuffles another
// entity's values.
SynthTask generate(const SynthConfig& config);

}  // namespace taep
