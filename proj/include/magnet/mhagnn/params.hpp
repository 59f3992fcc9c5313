#pragma once

#include <array>
#include <deque>
#include <string>
#include <vector>

#include "magnet/code_graph.hpp"
#include "magnet/mhagnn/config.hpp"
#include "magnet/node_types.hpp"
#include "magnet/rng.hpp"
#include "magnet/tensor/tensor.hpp"

namespace magnet::mhagnn {

/// All trainable weights, keyed by (layer, granularity, edge kind, head).
/// Parameters live in a stable deque; views below index into it.
template <class T>
struct ModelParams {
    using Param = tensor::Parameter<T>;

    struct Linear {
        Param* W = nullptr;
        Param* b = nullptr;
    };
    struct Gru {  // one direction; z/r/n gates
        Linear z_x, z_h, r_x, r_h, n_x, n_h;
    };
    struct Layer {
        std::array<Linear, kGranularityCount> key, query, value;
        // node_att[granularity(target)][head]: weight vector of length
        // 2 * head_dim scoring (K_s || Q_t).
        std::array<std::vector<Param*>, kGranularityCount> node_att;
        // edge_att[kind][head]: head_dim x head_dim bilinear form.
        std::array<std::vector<Param*>, kEdgeKindCount> edge_att;
        std::array<Param*, kEdgeKindCount> edge_mu{};  // scalar per edge kind
    };

    ModelConfig cfg;
    std::deque<Param> store;

    std::array<Linear, kGranularityCount> input_proj;  // embed_dim -> hidden
    std::vector<Layer> layer;
    Gru gru_fwd, gru_bwd;
    std::array<Param*, kGranularityCount> omega_avg{};  // readout pool gains
    std::array<Param*, kGranularityCount> omega_max{};
    Linear readout_mlp1, readout_mlp2;
    Linear cls1, cls2;

    ModelParams(const ModelConfig& config, std::uint64_t seed) : cfg(config) {
        cfg.validate();
        Rng rng(seed);
        const long d = cfg.hidden_dim;
        const long p = cfg.head_dim();
        const long g = cfg.gru_dim();
        static constexpr const char* kGran[] = {"st", "ex", "sy"};
        static constexpr const char* kEdge[] = {"ast", "cfg", "dfg", "ncs"};

        auto add = [&](const std::string& name, tensor::Shape shape,
                       bool xavier = true, T fill = T(0)) {
            store.emplace_back(name, std::move(shape));
            Param* param = &store.back();
            if (xavier)
                tensor::xavier_init(*param, rng);
            else
                std::fill(param->value.begin(), param->value.end(), fill);
            return param;
        };
        // Linear weights are stored {in, out} so row matrices multiply as
        // X @ W and vectors as x @ W.
        auto add_linear = [&](const std::string& name, long in, long out) {
            Linear l;
            l.W = add(name + ".W", {in, out});
            l.b = add(name + ".b", {out}, false);
            return l;
        };

        for (int gr = 0; gr < kGranularityCount; ++gr)
            input_proj[gr] = add_linear(std::string("input_proj.") + kGran[gr],
                                        cfg.embed_dim, d);

        layer.resize(static_cast<std::size_t>(cfg.layers));
        for (int l = 0; l < cfg.layers; ++l) {
            auto& lay = layer[static_cast<std::size_t>(l)];
            const std::string prefix = "layer" + std::to_string(l) + ".";
            for (int gr = 0; gr < kGranularityCount; ++gr) {
                lay.key[gr] = add_linear(prefix + "key." + kGran[gr], d, d);
                lay.query[gr] = add_linear(prefix + "query." + kGran[gr], d, d);
                lay.value[gr] = add_linear(prefix + "value." + kGran[gr], d, d);
            }
            for (int gr = 0; gr < kGranularityCount; ++gr)
                for (int h = 0; h < cfg.heads; ++h)
                    lay.node_att[gr].push_back(
                        add(prefix + "node_att." + kGran[gr] + ".h" +
                                std::to_string(h),
                            {2 * p}));
            for (int e = 0; e < kEdgeKindCount; ++e) {
                for (int h = 0; h < cfg.heads; ++h)
                    lay.edge_att[e].push_back(
                        add(prefix + "edge_att." + kEdge[e] + ".h" +
                                std::to_string(h),
                            {p, p}));
                lay.edge_mu[e] =
                    add(prefix + "edge_mu." + kEdge[e], {1}, false, T(1));
            }
        }

        auto add_gru = [&](const std::string& name) {
            Gru gru;
            gru.z_x = add_linear(name + ".z_x", d, g);
            gru.z_h = add_linear(name + ".z_h", g, g);
            gru.r_x = add_linear(name + ".r_x", d, g);
            gru.r_h = add_linear(name + ".r_h", g, g);
            gru.n_x = add_linear(name + ".n_x", d, g);
            gru.n_h = add_linear(name + ".n_h", g, g);
            return gru;
        };
        gru_fwd = add_gru("gru.fwd");
        gru_bwd = add_gru("gru.bwd");

        for (int gr = 0; gr < kGranularityCount; ++gr) {
            omega_avg[gr] = add(std::string("readout.omega_avg.") + kGran[gr],
                                {1}, false, T(1));
            omega_max[gr] = add(std::string("readout.omega_max.") + kGran[gr],
                                {1}, false, T(1));
        }
        readout_mlp1 = add_linear("readout.mlp1", d, cfg.readout_hidden);
        readout_mlp2 = add_linear("readout.mlp2", cfg.readout_hidden, d);
        cls1 = add_linear("cls.l1", cfg.readout_dim(), cfg.classifier_hidden);
        cls2 = add_linear("cls.l2", cfg.classifier_hidden, 2);
    }

    std::vector<Param*> all() {
        std::vector<Param*> out;
        out.reserve(store.size());
        for (auto& p : store) out.push_back(&p);
        return out;
    }

    long total_coords() const {
        long n = 0;
        for (const auto& p : store) n += p.numel();
        return n;
    }
};

}  // namespace magnet::mhagnn
