#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "magnet/code_graph.hpp"
#include "magnet/graphio/manifest.hpp"

namespace magnet::trainer {

struct Sample {
    std::string id;
    int label = 0;
    CodeGraph graph;
    std::optional<std::string> update_date;
    long node_count = 0;
};

struct SplitSpec {
    enum class Mode { Random, Time };
    Mode mode = Mode::Random;
    std::array<int, 3> ratios = {8, 1, 1};
    std::uint64_t seed = 42;
    std::string valid_cutoff;  // for Mode::Time
    std::string test_cutoff;
};

struct Dataset {
    std::vector<Sample> samples;  // manifest order
    graphio::SplitAssignment split;
    std::vector<std::size_t> train, valid, test;  // indices into samples

    const std::vector<std::size_t>& subset(graphio::Split s) const {
        switch (s) {
            case graphio::Split::Train: return train;
            case graphio::Split::Valid: return valid;
            default: return test;
        }
    }
};

/// Loads manifest records and lowers inline code / reads graph documents
/// (paths resolved relative to the manifest). Applies the split spec.
Dataset load_dataset(const std::filesystem::path& manifest_path,
                     const SplitSpec& split);

/// Same, but with a precomputed split assignment (e.g. read from a file).
Dataset load_dataset(const std::filesystem::path& manifest_path,
                     const graphio::SplitAssignment& split);

}  // namespace magnet::trainer
