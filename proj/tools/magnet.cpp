// magnet: command-line surface for the vulnerability-detection pipeline.
// Subcommands: parse, stats, toygen, train, eval, predict, explain.
// Exit codes: 0 success, 1 usage, 2 input/parse error, 3 state/checkpoint.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magnet/cparse/lower.hpp"
#include "magnet/errors.hpp"
#include "magnet/graphio/graph_json.hpp"
#include "magnet/graphio/manifest.hpp"
#include "magnet/metapath/metapath.hpp"
#include "magnet/trainer/explain.hpp"
#include "magnet/trainer/toygen.hpp"
#include "magnet/trainer/trainer.hpp"

namespace fs = std::filesystem;
using namespace magnet;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitState = 3;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("MAGNET_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            std::cerr << "warning: ignoring non-numeric MAGNET_SEED\n";
        }
    }
    return 42;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

CodeGraph lower_file(const fs::path& path) {
    const std::string source = read_file(path);
    try {
        const auto tokens = cparse::tokenize(source);
        try {
            return cparse::lower(cparse::parse_function(tokens));
        } catch (const ParseError& err) {
            const int idx = err.token_index;
            const int line = idx < static_cast<int>(tokens.size())
                                 ? tokens[static_cast<std::size_t>(idx)].line
                                 : tokens.back().line;
            throw FormatError(path.string() + ":" + std::to_string(line) +
                              ": " + err.what());
        }
    } catch (const LexError& err) {
        throw FormatError(path.string() + ":" + std::to_string(err.line) +
                          ": " + err.what());
    }
}

// --- parse ---------------------------------------------------------------

int cmd_parse(const std::string& input, const std::string& outdir) {
    std::vector<fs::path> files;
    const fs::path in(input);
    if (fs::is_directory(in)) {
        for (const auto& entry : fs::directory_iterator(in))
            if (entry.is_regular_file() && entry.path().extension() == ".c")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(in);
    }
    fs::create_directories(outdir);
    for (const auto& file : files) {
        const CodeGraph g = lower_file(file);
        fs::path out = fs::path(outdir) / (file.stem().string() + ".csg.json");
        graphio::write_graph_file(g, out);
        std::cout << out.string() << "\n";
    }
    return 0;
}

// --- stats ---------------------------------------------------------------

int cmd_stats(const std::string& manifest, long min_count_flag) {
    const auto records = graphio::read_manifest(manifest);
    const fs::path base = fs::path(manifest).parent_path();

    metapath::MetaPathStats stats;
    for (const auto& r : records) {
        CodeGraph g;
        if (r.has_code()) {
            g = cparse::lower(r.code);
        } else {
            fs::path p(r.graph_path);
            if (p.is_relative()) p = base / p;
            g = graphio::read_graph_file(p);
        }
        const auto annotated = metapath::annotate(std::move(g));
        for (const auto& t : annotated.edge_type) ++stats.counts[t.index()];
    }
    const std::uint64_t min_count =
        min_count_flag >= 0
            ? static_cast<std::uint64_t>(min_count_flag)
            : (records.size() < 100 ? 0 : 3);
    const auto active = metapath::select_active(stats, min_count);

    struct Row {
        metapath::MetaPathType type;
        std::uint64_t count;
    };
    std::vector<Row> rows;
    for (int i = 0; i < metapath::kMetaPathTypeCount; ++i)
        if (stats.counts[i] > 0)
            rows.push_back({metapath::MetaPathType::from_index(i),
                            stats.counts[i]});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.type.index() < b.type.index();
    });

    std::cout << "meta-path       count  kept\n";
    for (const auto& row : rows)
        std::cout << row.type.label() << "  " << std::setw(10) << row.count
                  << "  " << (active.count(row.type) ? "yes" : "no") << "\n";
    std::cout << "total edges: " << stats.total() << "  (" << rows.size()
              << " of " << metapath::kMetaPathTypeCount
              << " meta-path types observed, min-count " << min_count << ")\n";
    return 0;
}

// --- toygen ---------------------------------------------------------------

int cmd_toygen(long n, double fraction, std::uint64_t seed,
               const std::string& outdir) {
    trainer::ToySpec spec;
    spec.n = n;
    spec.vulnerable_fraction = fraction;
    spec.seed = seed;
    const auto samples = trainer::generate_toy_corpus(spec);
    fs::create_directories(outdir);
    const fs::path manifest = fs::path(outdir) / "manifest.jsonl";
    graphio::write_manifest(trainer::to_manifest_records(samples), manifest);
    long vul = 0;
    for (const auto& s : samples) vul += s.label;
    std::cout << manifest.string() << ": " << samples.size() << " samples ("
              << vul << " vulnerable)\n";
    return 0;
}

// --- train ----------------------------------------------------------------

struct TrainArgs {
    std::string manifest;
    std::string out = "model.ckpt";
    std::string split_mode = "random";
    std::string valid_cutoff = "2018-01-04";
    std::string test_cutoff = "2019-01-15";
    long min_metapath_count = -1;  // -1: corpus-size default
    int layers = 2;
    int heads = 4;
    long hidden = 64;
    long embed_dim = 100;
    double lr = 5e-4;
    long batch_size = 32;
    int epochs = 100;
    int patience = 0;
    std::uint64_t seed = default_seed();
    std::string precision = "f32";
    std::string embedding = "skipgram";
    std::string activation = "sigmoid";
    std::vector<double> class_weights;
    bool no_edge_att = false;
    bool no_node_att = false;
    bool no_multi_att = false;
    bool quiet = false;
};

int cmd_train(const TrainArgs& args) {
    trainer::SplitSpec split;
    split.seed = args.seed;
    if (args.split_mode == "time") {
        split.mode = trainer::SplitSpec::Mode::Time;
        split.valid_cutoff = args.valid_cutoff;
        split.test_cutoff = args.test_cutoff;
    }
    const auto ds = trainer::load_dataset(args.manifest, split);

    mhagnn::ModelConfig model;
    model.embed_dim = args.embed_dim;
    model.hidden_dim = args.hidden;
    model.layers = args.layers;
    model.heads = args.heads;
    model.node_attention = !args.no_node_att;
    model.edge_attention = !args.no_edge_att;
    model.readout = args.no_multi_att ? mhagnn::ReadoutMode::SumPool
                                      : mhagnn::ReadoutMode::MultiGranularity;
    if (args.activation == "tanh")
        model.update_activation = mhagnn::Activation::Tanh;
    else if (args.activation == "relu")
        model.update_activation = mhagnn::Activation::Relu;
    model.validate();

    trainer::TrainConfig cfg;
    cfg.epochs = args.epochs;
    cfg.batch_size = args.batch_size;
    cfg.lr = args.lr;
    cfg.seed = args.seed;
    cfg.patience = args.patience;
    cfg.quiet = args.quiet;
    cfg.min_metapath_count =
        args.min_metapath_count >= 0
            ? static_cast<std::uint64_t>(args.min_metapath_count)
            : (ds.samples.size() < 100 ? 0 : 3);
    cfg.embedding = args.embedding == "hashed" ? embed::Provenance::Hashed
                                               : embed::Provenance::Skipgram;
    cfg.precision = args.precision == "f64" ? trainer::Precision::F64
                                            : trainer::Precision::F32;
    if (!args.class_weights.empty()) {
        if (args.class_weights.size() != 2)
            throw Error("--class-weights needs exactly two values");
        cfg.class_weights = {args.class_weights[0], args.class_weights[1]};
    }

    const auto result = trainer::train(ds, model, cfg);
    mhagnn::save_checkpoint(result.checkpoint, args.out);
    graphio::write_split_file(ds.split, args.manifest + ".split.json");
    std::cout << "checkpoint: " << args.out << "\n"
              << "split file: " << args.manifest << ".split.json\n"
              << "best epoch " << result.best_epoch << ", valid f1 "
              << result.best_valid_f1 << "\n";
    return 0;
}

// --- eval / predict ---------------------------------------------------------

std::vector<std::size_t> subset_indices(const trainer::Dataset& ds,
                                        const std::string& subset) {
    if (subset == "all") {
        std::vector<std::size_t> all(ds.samples.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
    }
    const auto s = graphio::split_from(subset);
    if (!s) throw Error("unknown subset '" + subset + "'");
    return ds.subset(*s);
}

trainer::Dataset load_for_eval(const std::string& manifest,
                               const std::string& split_file,
                               const std::string& subset) {
    if (subset == "all") {
        trainer::SplitSpec split;  // irrelevant: every sample evaluated
        return trainer::load_dataset(manifest, split);
    }
    fs::path sf = split_file.empty() ? fs::path(manifest + ".split.json")
                                     : fs::path(split_file);
    if (!fs::exists(sf))
        throw FormatError("split file '" + sf.string() +
                          "' not found (run train first or pass --subset all)");
    return trainer::load_dataset(manifest, graphio::read_split_file(sf));
}

int cmd_eval(const std::string& manifest, const std::string& ckpt_path,
             const std::string& split_file, const std::string& subset,
             const std::string& json_out) {
    if (!fs::exists(ckpt_path))
        throw CheckpointError("checkpoint '" + ckpt_path + "' not found");
    const auto ck = mhagnn::load_checkpoint(ckpt_path);
    const auto ds = load_for_eval(manifest, split_file, subset);
    const auto indices = subset_indices(ds, subset);
    const auto result = trainer::evaluate(ck, ds, indices);

    std::cout << "samples: " << indices.size() << " (" << subset << ")\n"
              << result.metrics.summary() << "\n";
    if (!result.metrics.stratified.empty()) {
        std::cout << "accuracy by node count:\n";
        for (const auto& [bucket, acc] : result.metrics.stratified)
            std::cout << "  " << bucket << "  " << acc << "\n";
    }
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        out << result.metrics.to_json().dump(2) << "\n";
    }
    return 0;
}

int cmd_predict(const std::string& input, const std::string& ckpt_path) {
    if (!fs::exists(ckpt_path))
        throw CheckpointError("checkpoint '" + ckpt_path + "' not found");
    const auto ck = mhagnn::load_checkpoint(ckpt_path);

    if (input.size() > 2 && input.substr(input.size() - 2) == ".c") {
        const auto graph = lower_file(input);
        const auto pred = trainer::predict_one(ck, graph);
        std::cout << input << "  label " << pred.label << "  p(vulnerable) "
                  << pred.prob_vulnerable << "\n";
        return 0;
    }
    const auto ds = load_for_eval(input, "", "all");
    for (const auto& s : ds.samples) {
        const auto pred = trainer::predict_one(ck, s.graph);
        std::cout << s.id << "  label " << pred.label << "  p(vulnerable) "
                  << pred.prob_vulnerable << "\n";
    }
    return 0;
}

int cmd_explain(const std::string& source_path, const std::string& ckpt_path,
                const std::string& html_out) {
    if (!fs::exists(ckpt_path))
        throw CheckpointError("checkpoint '" + ckpt_path + "' not found");
    const auto ck = mhagnn::load_checkpoint(ckpt_path);
    const std::string source = read_file(source_path);
    const auto report = trainer::explain(ck, source);
    std::cout << trainer::render_ansi(report, source);
    if (!html_out.empty()) {
        std::ofstream out(html_out);
        out << trainer::render_html(report, source, source_path);
        std::cout << "wrote " << html_out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MAGNET: meta-path attentional graph learning for "
                 "function-level vulnerability detection"};
    app.require_subcommand(1);

    // parse
    std::string parse_input, parse_out;
    auto* sc_parse = app.add_subcommand(
        "parse", "Lower C sources to code structure graph documents");
    sc_parse->add_option("input", parse_input, "source file or directory")
        ->required();
    sc_parse->add_option("-o,--out", parse_out, "output directory")->required();

    // stats
    std::string stats_manifest;
    long stats_min_count = -1;
    auto* sc_stats = app.add_subcommand(
        "stats", "Meta-path type distribution of a corpus");
    sc_stats->add_option("manifest", stats_manifest)->required();
    sc_stats->add_option("--min-metapath-count", stats_min_count,
                         "keep threshold (default 3; 0 for corpora with "
                         "fewer than 100 graphs)");

    // toygen
    long toy_n = 500;
    double toy_fraction = 0.5;
    std::uint64_t toy_seed = default_seed();
    std::string toy_out;
    auto* sc_toygen = app.add_subcommand(
        "toygen", "Generate a planted-vulnerability toy corpus");
    sc_toygen->add_option("-n,--samples", toy_n);
    sc_toygen->add_option("--fraction", toy_fraction, "vulnerable fraction");
    sc_toygen->add_option("--seed", toy_seed);
    sc_toygen->add_option("-o,--out", toy_out, "output directory")->required();

    // train
    TrainArgs train_args;
    auto* sc_train = app.add_subcommand("train", "Train MHAGNN on a manifest");
    sc_train->add_option("manifest", train_args.manifest)->required();
    sc_train->add_option("-o,--out", train_args.out, "checkpoint path");
    sc_train->add_option("--split", train_args.split_mode)
        ->check(CLI::IsMember({"random", "time"}));
    sc_train->add_option("--valid-cutoff", train_args.valid_cutoff);
    sc_train->add_option("--test-cutoff", train_args.test_cutoff);
    sc_train->add_option("--min-metapath-count",
                         train_args.min_metapath_count);
    sc_train->add_option("--layers", train_args.layers);
    sc_train->add_option("--heads", train_args.heads);
    sc_train->add_option("--hidden", train_args.hidden);
    sc_train->add_option("--embed-dim", train_args.embed_dim);
    sc_train->add_option("--lr", train_args.lr);
    sc_train->add_option("--batch-size", train_args.batch_size);
    sc_train->add_option("--epochs", train_args.epochs);
    sc_train->add_option("--patience", train_args.patience);
    sc_train->add_option("--seed", train_args.seed);
    sc_train->add_option("--precision", train_args.precision)
        ->check(CLI::IsMember({"f32", "f64"}));
    sc_train->add_option("--embed", train_args.embedding)
        ->check(CLI::IsMember({"skipgram", "hashed"}));
    sc_train->add_option("--activation", train_args.activation)
        ->check(CLI::IsMember({"sigmoid", "tanh", "relu"}));
    sc_train->add_option("--class-weights", train_args.class_weights)
        ->expected(2);
    sc_train->add_flag("--no-edge-att", train_args.no_edge_att,
                       "ablation: disable edge-based attention");
    sc_train->add_flag("--no-node-att", train_args.no_node_att,
                       "ablation: disable node-based attention");
    sc_train->add_flag("--no-multi-att", train_args.no_multi_att,
                       "ablation: sum-pool readout instead of "
                       "multi-granularity attention");
    sc_train->add_flag("--quiet", train_args.quiet);

    // eval
    std::string eval_manifest, eval_ckpt, eval_split_file, eval_json;
    std::string eval_subset = "test";
    auto* sc_eval = app.add_subcommand("eval", "Evaluate a checkpoint");
    sc_eval->add_option("manifest", eval_manifest)->required();
    sc_eval->add_option("-c,--checkpoint", eval_ckpt)->required();
    sc_eval->add_option("--split-file", eval_split_file);
    sc_eval->add_option("--subset", eval_subset)
        ->check(CLI::IsMember({"train", "valid", "test", "all"}));
    sc_eval->add_option("--json", eval_json, "write metrics JSON here");

    // predict
    std::string predict_input, predict_ckpt;
    auto* sc_predict = app.add_subcommand(
        "predict", "Per-sample label and probability");
    sc_predict->add_option("input", predict_input, "manifest or .c file")
        ->required();
    sc_predict->add_option("-c,--checkpoint", predict_ckpt)->required();

    // explain
    std::string explain_source, explain_ckpt, explain_html;
    auto* sc_explain = app.add_subcommand(
        "explain", "Per-statement attention heatmap for one function");
    sc_explain->add_option("source", explain_source)->required();
    sc_explain->add_option("-c,--checkpoint", explain_ckpt)->required();
    sc_explain->add_option("--html", explain_html, "write HTML heatmap here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sc_parse->parsed()) return cmd_parse(parse_input, parse_out);
        if (sc_stats->parsed()) return cmd_stats(stats_manifest, stats_min_count);
        if (sc_toygen->parsed())
            return cmd_toygen(toy_n, toy_fraction, toy_seed, toy_out);
        if (sc_train->parsed()) return cmd_train(train_args);
        if (sc_eval->parsed())
            return cmd_eval(eval_manifest, eval_ckpt, eval_split_file,
                            eval_subset, eval_json);
        if (sc_predict->parsed()) return cmd_predict(predict_input, predict_ckpt);
        if (sc_explain->parsed())
            return cmd_explain(explain_source, explain_ckpt, explain_html);
    } catch (const CheckpointError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitState;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    }
    return 0;
}
