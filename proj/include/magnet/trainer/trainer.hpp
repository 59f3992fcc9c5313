#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

#include "magnet/embed/skipgram.hpp"
#include "magnet/metapath/metapath.hpp"
#include "magnet/mhagnn/checkpoint.hpp"
#include "magnet/trainer/dataset.hpp"
#include "magnet/trainer/metrics.hpp"

namespace magnet::trainer {

enum class Precision { F32 = 0, F64 = 1 };

struct TrainConfig {
    int epochs = 100;
    long batch_size = 32;
    double lr = 5e-4;
    std::uint64_t seed = 42;
    std::optional<std::pair<double, double>> class_weights;
    int patience = 0;  // epochs without valid-F1 improvement; 0 disables
    std::uint64_t min_metapath_count = 3;
    embed::Provenance embedding = embed::Provenance::Skipgram;
    int skipgram_epochs = 5;
    int skipgram_window = 5;
    int skipgram_negatives = 5;
    Precision precision = Precision::F32;
    bool quiet = false;
};

/// Train-split-fitted preprocessing state: the vocabulary, the embedding
/// table, and the active meta-path set. Everything here depends on the
/// training split only.
struct Preprocess {
    embed::Vocab vocab;
    embed::EmbeddingTable table;
    std::set<metapath::MetaPathType> active;
};

Preprocess fit_preprocess(const Dataset& ds,
                          std::span<const std::size_t> train_indices,
                          const mhagnn::ModelConfig& model_cfg,
                          const TrainConfig& cfg);

struct TrainResult {
    mhagnn::Checkpoint checkpoint;
    int best_epoch = -1;
    double best_valid_f1 = 0.0;
};

/// Full training run: fit preprocessing on the train split, optimize with
/// Adam, track validation F1 per epoch, and return the best-validation
/// checkpoint (with per-epoch history embedded).
TrainResult train(const Dataset& ds, const mhagnn::ModelConfig& model_cfg,
                  const TrainConfig& cfg);

struct EvalResult {
    Metrics metrics;
    std::vector<std::string> ids;
    std::vector<int> labels;
    std::vector<int> predictions;
    std::vector<double> prob_vulnerable;
    std::vector<std::vector<double>> representations;
    std::vector<long> node_counts;
};

/// Deterministic evaluation of a checkpoint on a subset of the dataset.
/// Includes centroid distance (when both classes are present) and
/// node-count-stratified accuracy. Throws on an empty subset.
EvalResult evaluate(const mhagnn::Checkpoint& ck, const Dataset& ds,
                    std::span<const std::size_t> indices);

}  // namespace magnet::trainer
