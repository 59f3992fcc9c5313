#pragma once

#include <cstdint>
#include <vector>

#include "magnet/embed/embedding.hpp"
#include "magnet/embed/vocab.hpp"

namespace magnet::embed {

struct SkipgramConfig {
    long dim = 100;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    double lr = 0.025;
    std::uint64_t seed = 1;
};

struct SkipgramResult {
    EmbeddingTable table;
    std::vector<double> epoch_loss;  // mean negative-sampling loss per epoch
};

/// Skip-gram with negative sampling over token sequences (one per graph).
/// Single-threaded and fully deterministic for a fixed seed.
SkipgramResult train_skipgram(
    const std::vector<std::vector<std::string>>& sequences, const Vocab& vocab,
    const SkipgramConfig& cfg = {});

}  // namespace magnet::embed
