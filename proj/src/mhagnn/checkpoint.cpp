#include "magnet/mhagnn/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace magnet::mhagnn {

using nlohmann::json;

const char* to_string(Activation a) {
    switch (a) {
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
    }
    return "?";
}

namespace {

constexpr char kMagic[8] = {'M', 'A', 'G', 'N', 'E', 'T', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

json config_to_json(const ModelConfig& c) {
    json j;
    j["embed_dim"] = c.embed_dim;
    j["hidden_dim"] = c.hidden_dim;
    j["layers"] = c.layers;
    j["heads"] = c.heads;
    j["readout_hidden"] = c.readout_hidden;
    j["classifier_hidden"] = c.classifier_hidden;
    j["update_activation"] = static_cast<int>(c.update_activation);
    j["readout"] = static_cast<int>(c.readout);
    j["node_attention"] = c.node_attention;
    j["edge_attention"] = c.edge_attention;
    return j;
}

ModelConfig config_from_json(const json& j) {
    ModelConfig c;
    c.embed_dim = j.at("embed_dim").get<long>();
    c.hidden_dim = j.at("hidden_dim").get<long>();
    c.layers = j.at("layers").get<int>();
    c.heads = j.at("heads").get<int>();
    c.readout_hidden = j.at("readout_hidden").get<long>();
    c.classifier_hidden = j.at("classifier_hidden").get<long>();
    c.update_activation =
        static_cast<Activation>(j.at("update_activation").get<int>());
    c.readout = static_cast<ReadoutMode>(j.at("readout").get<int>());
    c.node_attention = j.at("node_attention").get<bool>();
    c.edge_attention = j.at("edge_attention").get<bool>();
    return c;
}

}  // namespace

void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
    json meta;
    meta["config"] = config_to_json(ck.config);
    meta["seed"] = ck.seed;
    meta["history"] = ck.history;

    json vocab;
    vocab["tokens"] = ck.vocab.tokens;
    vocab["counts"] = ck.vocab.counts;
    meta["vocab"] = std::move(vocab);

    json active = json::array();
    for (const auto& t : ck.active) active.push_back(t.index());
    meta["active_metapaths"] = std::move(active);

    json embedding;
    embedding["dim"] = ck.table.dim;
    embedding["provenance"] = static_cast<int>(ck.table.provenance);
    embedding["count"] = ck.table.vocab_size();
    meta["embedding"] = std::move(embedding);

    json params = json::array();
    std::uint64_t offset = 0;
    for (std::size_t i = 0; i < ck.params.size(); ++i) {
        json p;
        p["name"] = ck.params[i].first;
        p["shape"] = ck.param_shapes[i];
        p["offset"] = offset;
        p["count"] = ck.params[i].second.size();
        offset += ck.params[i].second.size();
        params.push_back(std::move(p));
    }
    meta["params"] = std::move(params);

    const std::string meta_str = meta.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw CheckpointError("cannot open '" + path.string() +
                              "' for writing");
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(&kVersion), sizeof(kVersion));
    const std::uint64_t meta_len = meta_str.size();
    out.write(reinterpret_cast<const char*>(&meta_len), sizeof(meta_len));
    out.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));
    for (const auto& [name, data] : ck.params)
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size() * sizeof(float)));
    out.write(reinterpret_cast<const char*>(ck.table.rows.data()),
              static_cast<std::streamsize>(ck.table.rows.size() *
                                           sizeof(float)));
    if (!out) throw CheckpointError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw CheckpointError("not a checkpoint file: " + path.string());
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof(version));
    if (!in || version != kVersion)
        throw CheckpointError("unsupported checkpoint version " +
                              std::to_string(version));
    std::uint64_t meta_len = 0;
    in.read(reinterpret_cast<char*>(&meta_len), sizeof(meta_len));
    std::string meta_str(meta_len, '\0');
    in.read(meta_str.data(), static_cast<std::streamsize>(meta_len));
    if (!in) throw CheckpointError("truncated checkpoint metadata");

    json meta;
    try {
        meta = json::parse(meta_str);
    } catch (const json::parse_error& err) {
        throw CheckpointError(std::string("corrupt checkpoint metadata: ") +
                              err.what());
    }

    Checkpoint ck;
    try {
        ck.config = config_from_json(meta.at("config"));
        ck.seed = meta.at("seed").get<std::uint64_t>();
        ck.history = meta.value("history", json::array());

        ck.vocab.tokens = meta.at("vocab").at("tokens")
                              .get<std::vector<std::string>>();
        ck.vocab.counts = meta.at("vocab").at("counts")
                              .get<std::vector<std::uint64_t>>();
        ck.vocab.index.clear();
        for (std::size_t i = 0; i < ck.vocab.tokens.size(); ++i)
            ck.vocab.index.emplace(ck.vocab.tokens[i], static_cast<long>(i));

        for (const auto& idx : meta.at("active_metapaths"))
            ck.active.insert(
                metapath::MetaPathType::from_index(idx.get<int>()));

        ck.table.dim = meta.at("embedding").at("dim").get<long>();
        ck.table.provenance = static_cast<embed::Provenance>(
            meta.at("embedding").at("provenance").get<int>());
        const long embed_count = meta.at("embedding").at("count").get<long>();

        for (const auto& p : meta.at("params")) {
            ck.params.emplace_back(
                p.at("name").get<std::string>(),
                std::vector<float>(p.at("count").get<std::size_t>()));
            ck.param_shapes.push_back(p.at("shape").get<tensor::Shape>());
        }
        for (auto& [name, data] : ck.params) {
            in.read(reinterpret_cast<char*>(data.data()),
                    static_cast<std::streamsize>(data.size() * sizeof(float)));
        }
        ck.table.rows.resize(
            static_cast<std::size_t>(embed_count * ck.table.dim));
        in.read(reinterpret_cast<char*>(ck.table.rows.data()),
                static_cast<std::streamsize>(ck.table.rows.size() *
                                             sizeof(float)));
        if (!in) throw CheckpointError("truncated checkpoint payload");
    } catch (const json::exception& err) {
        throw CheckpointError(std::string("corrupt checkpoint metadata: ") +
                              err.what());
    }
    return ck;
}

}  // namespace magnet::mhagnn
