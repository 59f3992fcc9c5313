#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnet/embed/embedding.hpp"
#include "magnet/metapath/metapath.hpp"
#include "magnet/mhagnn/config.hpp"
#include "magnet/mhagnn/params.hpp"

namespace magnet::mhagnn {

/// Everything needed to reproduce inference: model config, vocabulary,
/// embedding table, the training-split meta-path active set, all parameter
/// tensors (little-endian f32), the seed, and the training history.
struct Checkpoint {
    ModelConfig config;
    embed::Vocab vocab;
    embed::EmbeddingTable table;
    std::set<metapath::MetaPathType> active;
    std::vector<std::pair<std::string, std::vector<float>>> params;
    std::vector<tensor::Shape> param_shapes;
    std::uint64_t seed = 0;
    nlohmann::json history = nlohmann::json::array();

    template <class T>
    static Checkpoint from_params(ModelParams<T>& mp) {
        Checkpoint ck;
        ck.config = mp.cfg;
        for (auto& p : mp.store) {
            std::vector<float> data(p.value.size());
            for (std::size_t i = 0; i < data.size(); ++i)
                data[i] = static_cast<float>(p.value[i]);
            ck.params.emplace_back(p.name, std::move(data));
            ck.param_shapes.push_back(p.shape);
        }
        return ck;
    }

    /// Rebuilds ModelParams from the stored tensors. Throws
    /// CheckpointError on any name/shape mismatch.
    template <class T>
    ModelParams<T> restore_params() const {
        ModelParams<T> mp(config, seed);
        if (params.size() != mp.store.size())
            throw CheckpointError("checkpoint parameter count mismatch");
        std::size_t i = 0;
        for (auto& p : mp.store) {
            if (params[i].first != p.name || param_shapes[i] != p.shape)
                throw CheckpointError("checkpoint parameter '" +
                                      params[i].first +
                                      "' does not match model layout");
            for (std::size_t k = 0; k < p.value.size(); ++k)
                p.value[k] = static_cast<T>(params[i].second[k]);
            ++i;
        }
        return mp;
    }
};

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace magnet::mhagnn
