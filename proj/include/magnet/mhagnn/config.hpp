#pragma once

#include <string>

#include "magnet/errors.hpp"

namespace magnet::mhagnn {

enum class Activation { Sigmoid = 0, Tanh = 1, Relu = 2 };

const char* to_string(Activation a);

/// Graph readout: gated multi-granularity attention, or a plain sum of
/// node encodings (the ablation variant).
enum class ReadoutMode { MultiGranularity = 0, SumPool = 1 };

struct ModelConfig {
    long embed_dim = 100;  // node vector dimension at layer 0
    long hidden_dim = 64;
    int layers = 2;
    int heads = 4;
    long readout_hidden = 16;     // bottleneck width of the readout MLP
    long classifier_hidden = 64;
    Activation update_activation = Activation::Sigmoid;
    ReadoutMode readout = ReadoutMode::MultiGranularity;
    bool node_attention = true;  // ablation switches
    bool edge_attention = true;

    long head_dim() const { return hidden_dim / heads; }
    long gru_dim() const { return hidden_dim / 2; }  // per direction
    long readout_dim() const {
        return readout == ReadoutMode::MultiGranularity ? 3 * hidden_dim
                                                        : hidden_dim;
    }

    void validate() const {
        if (layers < 1)
            throw Error("model config: layers must be >= 1");
        if (heads < 1 || hidden_dim % heads != 0)
            throw Error("model config: hidden_dim (" +
                        std::to_string(hidden_dim) +
                        ") must be divisible by heads (" +
                        std::to_string(heads) + ")");
        if (hidden_dim % 2 != 0)
            throw Error("model config: hidden_dim must be even for the BiGRU");
        if (embed_dim < 1 || readout_hidden < 1 || classifier_hidden < 1)
            throw Error("model config: dimensions must be positive");
    }
};

}  // namespace magnet::mhagnn
