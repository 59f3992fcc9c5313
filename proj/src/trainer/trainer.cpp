#include "magnet/trainer/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "magnet/errors.hpp"
#include "magnet/tensor/adam.hpp"
#include "magnet/trainer/pipeline.hpp"

namespace magnet::trainer {

Preprocess fit_preprocess(const Dataset& ds,
                          std::span<const std::size_t> train_indices,
                          const mhagnn::ModelConfig& model_cfg,
                          const TrainConfig& cfg) {
    Preprocess pre;

    std::vector<const CodeGraph*> train_graphs;
    train_graphs.reserve(train_indices.size());
    for (std::size_t i : train_indices)
        train_graphs.push_back(&ds.samples[i].graph);

    pre.vocab = embed::build_vocab(train_graphs);
    if (cfg.embedding == embed::Provenance::Hashed) {
        pre.table = embed::hashed_table(pre.vocab, model_cfg.embed_dim);
    } else {
        std::vector<std::vector<std::string>> sequences;
        sequences.reserve(train_graphs.size());
        for (const CodeGraph* g : train_graphs)
            sequences.push_back(embed::token_sequence(*g));
        embed::SkipgramConfig sg;
        sg.dim = model_cfg.embed_dim;
        sg.epochs = cfg.skipgram_epochs;
        sg.window = cfg.skipgram_window;
        sg.negatives = cfg.skipgram_negatives;
        sg.seed = cfg.seed;
        pre.table = embed::train_skipgram(sequences, pre.vocab, sg).table;
    }

    metapath::MetaPathStats stats;
    for (const CodeGraph* g : train_graphs) {
        const auto annotated = metapath::annotate(*g);
        for (const auto& t : annotated.edge_type) ++stats.counts[t.index()];
    }
    pre.active = metapath::select_active(stats, cfg.min_metapath_count);
    return pre;
}

namespace {

template <class T>
struct PredOut {
    std::vector<int> predictions;
    std::vector<double> prob;
    std::vector<std::vector<double>> reps;
};

template <class T>
PredOut<T> predict_set(mhagnn::ModelParams<T>& params,
                       const std::vector<mhagnn::GraphTensors<T>>& gts,
                       std::span<const std::size_t> indices,
                       bool keep_reps) {
    PredOut<T> out;
    out.predictions.reserve(indices.size());
    for (std::size_t idx : indices) {
        tensor::Tape<T> tape;
        auto fwd = mhagnn::forward(tape, params, gts[idx]);
        const auto& z = fwd.logits.value();
        const double z0 = static_cast<double>(z[0]);
        const double z1 = static_cast<double>(z[1]);
        const double mx = std::max(z0, z1);
        const double p1 =
            std::exp(z1 - mx) / (std::exp(z0 - mx) + std::exp(z1 - mx));
        out.predictions.push_back(z1 > z0 ? 1 : 0);
        out.prob.push_back(p1);
        if (keep_reps) {
            std::vector<double> rep(fwd.graph_vec.value().size());
            for (std::size_t d = 0; d < rep.size(); ++d)
                rep[d] = static_cast<double>(fwd.graph_vec.value()[d]);
            out.reps.push_back(std::move(rep));
        }
    }
    return out;
}

template <class T>
TrainResult train_impl(const Dataset& ds, const mhagnn::ModelConfig& model_cfg,
                       const TrainConfig& cfg) {
    if (ds.train.empty() || ds.valid.empty())
        throw Error("train: train and valid splits must be non-empty");

    const Preprocess pre = fit_preprocess(ds, ds.train, model_cfg, cfg);

    std::vector<mhagnn::GraphTensors<T>> gts;
    gts.reserve(ds.samples.size());
    for (const auto& s : ds.samples)
        gts.push_back(prepare_graph<T>(s.graph, pre));

    mhagnn::ModelParams<T> params(model_cfg, cfg.seed);
    auto plist = params.all();
    tensor::AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;
    tensor::Adam<T> adam(plist, adam_cfg);

    std::vector<T> class_weights;
    if (cfg.class_weights)
        class_weights = {static_cast<T>(cfg.class_weights->first),
                         static_cast<T>(cfg.class_weights->second)};

    std::vector<int> valid_labels;
    for (std::size_t i : ds.valid) valid_labels.push_back(ds.samples[i].label);

    Rng shuffle_rng(cfg.seed ^ 0xA0761D6478BD642FULL);
    TrainResult result;
    result.checkpoint.history = nlohmann::json::array();
    std::vector<std::pair<std::string, std::vector<float>>> best_params;
    double best_f1 = -1.0;
    int stale_epochs = 0;

    std::vector<std::size_t> order(ds.train.begin(), ds.train.end());
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop = std::min(
                order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const T inv_batch = T(1) / static_cast<T>(stop - start);
            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t idx = order[k];
                tensor::Tape<T> tape;
                auto sample_loss =
                    mhagnn::loss(tape, params, gts[idx],
                                 ds.samples[idx].label, class_weights);
                loss_sum += static_cast<double>(sample_loss.item());
                tape.backward(tensor::smul(sample_loss, inv_batch));
            }
            adam.step();
        }
        const double train_loss = loss_sum / static_cast<double>(order.size());

        auto valid_out = predict_set<T>(params, gts, ds.valid, false);
        const Metrics valid_metrics =
            compute_metrics(valid_out.predictions, valid_labels);

        nlohmann::json row;
        row["epoch"] = epoch;
        row["train_loss"] = train_loss;
        row["valid"] = valid_metrics.to_json();
        result.checkpoint.history.push_back(std::move(row));
        if (!cfg.quiet)
            std::cerr << "epoch " << epoch << "  loss " << train_loss
                      << "  valid f1 " << valid_metrics.f1 << "\n";

        if (valid_metrics.f1 > best_f1) {
            best_f1 = valid_metrics.f1;
            result.best_epoch = epoch;
            best_params = mhagnn::Checkpoint::from_params(params).params;
            stale_epochs = 0;
        } else if (cfg.patience > 0 && ++stale_epochs >= cfg.patience) {
            break;
        }
    }

    auto ck = mhagnn::Checkpoint::from_params(params);
    ck.params = std::move(best_params);
    ck.vocab = pre.vocab;
    ck.table = pre.table;
    ck.active = pre.active;
    ck.seed = cfg.seed;
    ck.history = std::move(result.checkpoint.history);
    result.checkpoint = std::move(ck);
    result.best_valid_f1 = best_f1;
    return result;
}

}  // namespace

TrainResult train(const Dataset& ds, const mhagnn::ModelConfig& model_cfg,
                  const TrainConfig& cfg) {
    if (cfg.precision == Precision::F64)
        return train_impl<double>(ds, model_cfg, cfg);
    return train_impl<float>(ds, model_cfg, cfg);
}

EvalResult evaluate(const mhagnn::Checkpoint& ck, const Dataset& ds,
                    std::span<const std::size_t> indices) {
    if (indices.empty()) throw Error("evaluate: empty split");

    Preprocess pre{ck.vocab, ck.table, ck.active};
    auto params = ck.restore_params<float>();

    std::vector<mhagnn::GraphTensors<float>> gts;
    gts.reserve(indices.size());
    EvalResult out;
    for (std::size_t i : indices) {
        gts.push_back(prepare_graph<float>(ds.samples[i].graph, pre));
        out.ids.push_back(ds.samples[i].id);
        out.labels.push_back(ds.samples[i].label);
        out.node_counts.push_back(ds.samples[i].node_count);
    }
    std::vector<std::size_t> local(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k) local[k] = k;
    auto pred = predict_set<float>(params, gts, local, true);

    out.predictions = std::move(pred.predictions);
    out.prob_vulnerable = std::move(pred.prob);
    out.representations = std::move(pred.reps);
    out.metrics = compute_metrics(out.predictions, out.labels);
    const bool has_both =
        std::count(out.labels.begin(), out.labels.end(), 1) > 0 &&
        std::count(out.labels.begin(), out.labels.end(), 0) > 0;
    if (has_both)
        out.metrics.centroid_distance =
            centroid_distance(out.representations, out.labels);
    out.metrics.stratified =
        stratified_accuracy(out.node_counts, out.predictions, out.labels);
    return out;
}

}  // namespace magnet::trainer
