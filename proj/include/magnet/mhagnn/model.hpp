#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "magnet/metapath/metapath.hpp"
#include "magnet/mhagnn/params.hpp"
#include "magnet/tensor/tensor.hpp"

namespace magnet::mhagnn {

/// Index structures for one (annotated, filtered) graph, precomputed once
/// per sample. Nodes are re-ordered canonically: spanned nodes by
/// (first token asc, last token desc, type), then spanless nodes by id.
/// This makes the forward pass independent of node-id labeling and doubles
/// as the BiGRU sequence order.
struct GraphIndex {
    long n_nodes = 0;
    std::vector<int> node_ids;             // canonical position -> node id
    std::vector<Granularity> gran;         // per canonical position
    std::vector<std::vector<long>> gran_nodes;  // [granularity] -> positions
    std::vector<long> gran_perm_inv;       // node pos -> row in concat-by-gran

    std::vector<long> edge_src, edge_dst;  // canonical positions
    std::vector<EdgeKind> edge_kind;
    std::vector<std::vector<long>> edges_of_kind;      // [kind] -> edge idx
    std::vector<std::vector<long>> edges_of_dst_gran;  // [gran] -> edge idx

    std::vector<long> nodes_with_in;   // canonical positions, ascending
    std::vector<long> nodes_without_in;
    std::vector<long> update_perm_inv;  // node pos -> row in {with,without}

    long edge_count() const { return static_cast<long>(edge_src.size()); }
};

GraphIndex build_graph_index(const metapath::MetaPathGraph& g);

/// Per-sample model input: the index plus h0 features (canonical row
/// order, row-major n x embed_dim).
template <class T>
struct GraphTensors {
    GraphIndex index;
    std::vector<T> features;
    long embed_dim = 0;
};

template <class T>
struct ForwardResult {
    tensor::Tensor<T> logits;     // {2}
    tensor::Tensor<T> graph_vec;  // readout representation
    // Final-layer attention weight per edge, one tensor per head, aligned
    // with GraphIndex edge arrays. Empty when the graph has no edges.
    std::vector<tensor::Tensor<T>> final_attention;
};

namespace detail {

template <class T>
using Tn = tensor::Tensor<T>;

/// Caches parameter leaves so each Parameter appears once per tape.
template <class T>
class LeafCache {
public:
    explicit LeafCache(tensor::Tape<T>& tape) : tape_(tape) {}
    Tn<T> operator()(tensor::Parameter<T>* p) {
        auto it = cache_.find(p);
        if (it != cache_.end()) return it->second;
        Tn<T> t = tape_.leaf(*p);
        cache_.emplace(p, t);
        return t;
    }

private:
    tensor::Tape<T>& tape_;
    std::unordered_map<tensor::Parameter<T>*, Tn<T>> cache_;
};

template <class T>
Tn<T> linear_rows(const Tn<T>& x, const typename ModelParams<T>::Linear& l,
                  LeafCache<T>& leaf) {
    return tensor::add_rowvec(tensor::matmul(x, leaf(l.W)), leaf(l.b));
}

template <class T>
Tn<T> linear_vec(const Tn<T>& x, const typename ModelParams<T>::Linear& l,
                 LeafCache<T>& leaf) {
    return tensor::add(tensor::matmul(x, leaf(l.W)), leaf(l.b));
}

template <class T>
Tn<T> activate(const Tn<T>& x, Activation a) {
    switch (a) {
        case Activation::Sigmoid: return tensor::sigmoid(x);
        case Activation::Tanh: return tensor::tanh_act(x);
        case Activation::Relu: return tensor::relu(x);
    }
    return tensor::sigmoid(x);
}

/// Applies the granularity-conditioned projection `lin[gran(v)]` to every
/// node row, preserving canonical row order.
template <class T>
Tn<T> project_by_granularity(
    const Tn<T>& h, const GraphIndex& gi,
    const std::array<typename ModelParams<T>::Linear, kGranularityCount>& lin,
    LeafCache<T>& leaf) {
    std::vector<Tn<T>> pieces;
    for (int g = 0; g < kGranularityCount; ++g) {
        if (gi.gran_nodes[g].empty()) continue;
        Tn<T> rows = tensor::gather_rows(h, gi.gran_nodes[g]);
        pieces.push_back(linear_rows<T>(rows, lin[g], leaf));
    }
    Tn<T> packed = pieces.size() == 1 ? pieces[0] : tensor::concat(pieces, 0);
    return tensor::gather_rows(packed, gi.gran_perm_inv);
}

template <class T>
Tn<T> bigru_direction(tensor::Tape<T>& tape, const Tn<T>& h_seq,
                      const typename ModelParams<T>::Gru& gru, bool backward,
                      LeafCache<T>& leaf, long gru_dim) {
    const long n = h_seq.shape()[0];
    std::vector<Tn<T>> states(static_cast<std::size_t>(n));
    Tn<T> h = tape.zeros({gru_dim});
    for (long step = 0; step < n; ++step) {
        const long t = backward ? n - 1 - step : step;
        Tn<T> x = tensor::row(h_seq, t);
        Tn<T> z = tensor::sigmoid(tensor::add(linear_vec<T>(x, gru.z_x, leaf),
                                              linear_vec<T>(h, gru.z_h, leaf)));
        Tn<T> r = tensor::sigmoid(tensor::add(linear_vec<T>(x, gru.r_x, leaf),
                                              linear_vec<T>(h, gru.r_h, leaf)));
        Tn<T> cand = tensor::tanh_act(
            tensor::add(linear_vec<T>(x, gru.n_x, leaf),
                        tensor::mul(r, linear_vec<T>(h, gru.n_h, leaf))));
        // h' = (1 - z) * cand + z * h  ==  cand + z * (h - cand)
        h = tensor::add(cand, tensor::mul(z, tensor::sub(h, cand)));
        states[static_cast<std::size_t>(t)] = h;
    }
    return tensor::stack_rows(states);
}

}  // namespace detail

/// Full MHAGNN forward pass for one graph: input projection, L meta-path
/// attention layers with residual updates, BiGRU encoding in source order,
/// multi-granularity readout, and the 2-logit classifier head.
template <class T>
ForwardResult<T> forward(tensor::Tape<T>& tape, ModelParams<T>& params,
                         const GraphTensors<T>& gt) {
    using detail::Tn;
    const GraphIndex& gi = gt.index;
    const ModelConfig& cfg = params.cfg;
    const long n = gi.n_nodes;
    const long d = cfg.hidden_dim;
    const long p = cfg.head_dim();
    const long e_count = gi.edge_count();
    detail::LeafCache<T> leaf(tape);

    Tn<T> h_feat = tape.constant({n, gt.embed_dim}, gt.features);
    Tn<T> h = detail::project_by_granularity<T>(h_feat, gi,
                                                params.input_proj, leaf);

    ForwardResult<T> result;
    for (int l = 0; l < cfg.layers; ++l) {
        auto& lay = params.layer[static_cast<std::size_t>(l)];
        if (e_count == 0) continue;  // no retained edges: every node keeps h

        Tn<T> k_full =
            detail::project_by_granularity<T>(h, gi, lay.key, leaf);
        Tn<T> q_full =
            detail::project_by_granularity<T>(h, gi, lay.query, leaf);
        Tn<T> v_full =
            detail::project_by_granularity<T>(h, gi, lay.value, leaf);

        const bool capture = (l == cfg.layers - 1);
        if (capture) result.final_attention.clear();

        std::vector<Tn<T>> head_messages;
        for (int head = 0; head < cfg.heads; ++head) {
            Tn<T> kh = tensor::slice_cols(k_full, head * p, (head + 1) * p);
            Tn<T> qh = tensor::slice_cols(q_full, head * p, (head + 1) * p);
            Tn<T> vh = tensor::slice_cols(v_full, head * p, (head + 1) * p);
            Tn<T> k_src = tensor::gather_rows(kh, gi.edge_src);
            Tn<T> q_dst = tensor::gather_rows(qh, gi.edge_dst);
            Tn<T> v_src = tensor::gather_rows(vh, gi.edge_src);

            std::vector<Tn<T>> logit_parts;
            if (cfg.node_attention) {
                // sigma(W_{tau(t)} . (K_s || Q_t)) per edge, batched by the
                // target node's granularity.
                std::vector<Tn<T>> parts;
                for (int g = 0; g < kGranularityCount; ++g) {
                    const auto& idx = gi.edges_of_dst_gran[g];
                    if (idx.empty()) continue;
                    Tn<T> cat = tensor::concat<T>(
                        {tensor::gather_rows(k_src, idx),
                         tensor::gather_rows(q_dst, idx)},
                        1);
                    Tn<T> scores = tensor::sigmoid(tensor::matmul(
                        cat, leaf(lay.node_att[g][static_cast<std::size_t>(
                                 head)])));
                    parts.push_back(tensor::scatter_vec(scores, idx, e_count));
                }
                Tn<T> acc = parts[0];
                for (std::size_t i = 1; i < parts.size(); ++i)
                    acc = tensor::add(acc, parts[i]);
                logit_parts.push_back(acc);
            }
            if (cfg.edge_attention) {
                // (K_s W_{psi(e)} Q_t^T) * mu(psi(e)) / sqrt(d/h), batched
                // by edge kind.
                std::vector<Tn<T>> parts;
                for (int k = 0; k < kEdgeKindCount; ++k) {
                    const auto& idx = gi.edges_of_kind[k];
                    if (idx.empty()) continue;
                    Tn<T> bilinear = tensor::rowwise_dot(
                        tensor::matmul(
                            tensor::gather_rows(k_src, idx),
                            leaf(lay.edge_att[k][static_cast<std::size_t>(
                                head)])),
                        tensor::gather_rows(q_dst, idx));
                    Tn<T> scaled = tensor::smul(
                        tensor::scale(bilinear, leaf(lay.edge_mu[k])),
                        static_cast<T>(1.0 / std::sqrt(static_cast<double>(p))));
                    parts.push_back(tensor::scatter_vec(scaled, idx, e_count));
                }
                Tn<T> acc = parts[0];
                for (std::size_t i = 1; i < parts.size(); ++i)
                    acc = tensor::add(acc, parts[i]);
                logit_parts.push_back(acc);
            }
            Tn<T> logits;
            if (logit_parts.empty())
                logits = tape.zeros({e_count});  // both attentions ablated
            else if (logit_parts.size() == 1)
                logits = logit_parts[0];
            else
                logits = tensor::add(logit_parts[0], logit_parts[1]);

            Tn<T> att = tensor::segment_softmax(logits, gi.edge_dst);
            if (capture) result.final_attention.push_back(att);
            head_messages.push_back(tensor::segment_sum_rows(
                tensor::scale_rows(v_src, att), gi.edge_dst, n));
        }

        Tn<T> msg = cfg.heads == 1 ? head_messages[0]
                                   : tensor::concat(head_messages, 1);
        // Residual update; nodes with no retained in-edges keep their
        // previous representation bit-exactly.
        Tn<T> updated = tensor::add(
            detail::activate<T>(tensor::gather_rows(msg, gi.nodes_with_in),
                                cfg.update_activation),
            tensor::gather_rows(h, gi.nodes_with_in));
        if (gi.nodes_without_in.empty()) {
            h = tensor::gather_rows(updated, gi.update_perm_inv);
        } else {
            Tn<T> kept = tensor::gather_rows(h, gi.nodes_without_in);
            h = tensor::gather_rows(tensor::concat<T>({updated, kept}, 0),
                                    gi.update_perm_inv);
        }
    }

    // BiGRU over the canonical (source token) order.
    Tn<T> fwd = detail::bigru_direction<T>(tape, h, params.gru_fwd, false,
                                           leaf, cfg.gru_dim());
    Tn<T> bwd = detail::bigru_direction<T>(tape, h, params.gru_bwd, true,
                                           leaf, cfg.gru_dim());
    Tn<T> h_read = tensor::concat<T>({fwd, bwd}, 1);

    Tn<T> g_vec;
    if (cfg.readout == ReadoutMode::SumPool) {
        g_vec = tensor::sum_rows(h_read);
    } else {
        std::vector<Tn<T>> contribs;
        for (int g = 0; g < kGranularityCount; ++g) {
            if (gi.gran_nodes[g].empty()) {
                contribs.push_back(tape.zeros({d}));
                continue;
            }
            Tn<T> fg = tensor::gather_rows(h_read, gi.gran_nodes[g]);
            Tn<T> pooled = tensor::add(
                tensor::scale(tensor::mean_rows(fg), leaf(params.omega_avg[g])),
                tensor::scale(tensor::max_rows(fg), leaf(params.omega_max[g])));
            Tn<T> gate = tensor::sigmoid(detail::linear_vec<T>(
                tensor::relu(
                    detail::linear_vec<T>(pooled, params.readout_mlp1, leaf)),
                params.readout_mlp2, leaf));
            contribs.push_back(tensor::mul(gate, pooled));
        }
        g_vec = tensor::concat(contribs, 0);
    }

    Tn<T> hidden = tensor::relu(detail::linear_vec<T>(g_vec, params.cls1, leaf));
    result.logits = detail::linear_vec<T>(hidden, params.cls2, leaf);
    result.graph_vec = g_vec;
    return result;
}

/// Forward plus cross-entropy loss against a binary label.
template <class T>
tensor::Tensor<T> loss(tensor::Tape<T>& tape, ModelParams<T>& params,
                       const GraphTensors<T>& gt, long label,
                       std::vector<T> class_weights = {}) {
    auto out = forward(tape, params, gt);
    return tensor::cross_entropy(out.logits, label, std::move(class_weights));
}

}  // namespace magnet::mhagnn
