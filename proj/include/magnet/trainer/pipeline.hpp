#pragma once

#include <unordered_map>

#include "magnet/mhagnn/model.hpp"
#include "magnet/trainer/trainer.hpp"

namespace magnet::trainer {

/// Annotates, filters, and embeds one graph into model input form.
/// Features are laid out in the canonical node order of the GraphIndex.
template <class T>
mhagnn::GraphTensors<T> prepare_graph(const CodeGraph& graph,
                                      const Preprocess& pre) {
    auto filtered =
        metapath::apply_filter(metapath::annotate(graph), pre.active);
    mhagnn::GraphTensors<T> gt;
    gt.index = mhagnn::build_graph_index(filtered);
    gt.embed_dim = pre.table.dim;

    std::unordered_map<int, const CodeNode*> by_id;
    for (const auto& n : filtered.graph.nodes) by_id.emplace(n.id, &n);

    gt.features.resize(static_cast<std::size_t>(gt.index.n_nodes *
                                                pre.table.dim));
    for (long c = 0; c < gt.index.n_nodes; ++c) {
        const CodeNode* node =
            by_id.at(gt.index.node_ids[static_cast<std::size_t>(c)]);
        const auto h0 = embed::node_init(*node, pre.vocab, pre.table);
        for (long d = 0; d < pre.table.dim; ++d)
            gt.features[static_cast<std::size_t>(c * pre.table.dim + d)] =
                static_cast<T>(h0[static_cast<std::size_t>(d)]);
    }
    return gt;
}

}  // namespace magnet::trainer
