#include "magnet/embed/embedding.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "magnet/errors.hpp"
#include "magnet/rng.hpp"

namespace magnet::embed {

const char* to_string(Provenance p) {
    return p == Provenance::Skipgram ? "skipgram" : "hashed";
}

std::vector<float> hashed_embedding(std::string_view token, long dim) {
    Rng rng(fnv1a64(token));
    std::vector<float> v(static_cast<std::size_t>(dim));
    double norm_sq = 0.0;
    for (auto& x : v) {
        const double draw = rng.normal();
        x = static_cast<float>(draw);
        norm_sq += draw * draw;
    }
    const float inv = static_cast<float>(1.0 / std::sqrt(norm_sq));
    for (auto& x : v) x *= inv;
    return v;
}

EmbeddingTable hashed_table(const Vocab& vocab, long dim) {
    EmbeddingTable t;
    t.provenance = Provenance::Hashed;
    t.dim = dim;
    t.rows.reserve(static_cast<std::size_t>(vocab.size() * dim));
    for (const auto& token : vocab.tokens) {
        const auto row = hashed_embedding(token, dim);
        t.rows.insert(t.rows.end(), row.begin(), row.end());
    }
    return t;
}

std::vector<float> node_init(const CodeNode& node, const Vocab& vocab,
                             const EmbeddingTable& table) {
    std::vector<float> h(static_cast<std::size_t>(table.dim), 0.0f);
    const auto toks = value_tokens(node.value);
    if (toks.empty()) return h;
    for (const auto& t : toks) {
        const float* r = table.row(vocab.id_of(t));
        for (long d = 0; d < table.dim; ++d) h[d] += r[d];
    }
    const float inv = 1.0f / static_cast<float>(toks.size());
    for (auto& x : h) x *= inv;
    return h;
}

namespace {
constexpr char kEmbedMagic[8] = {'M', 'G', 'N', 'T', 'E', 'M', 'B', '1'};
}

void write_embedding_file(const EmbeddingTable& table, const Vocab& vocab,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw FormatError("cannot open '" + path.string() + "' for writing");
    out.write(kEmbedMagic, sizeof(kEmbedMagic));
    const std::uint32_t prov = static_cast<std::uint32_t>(table.provenance);
    const std::uint32_t dim = static_cast<std::uint32_t>(table.dim);
    const std::uint64_t n = static_cast<std::uint64_t>(vocab.size());
    out.write(reinterpret_cast<const char*>(&prov), sizeof(prov));
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (const auto& token : vocab.tokens) {
        const std::uint32_t len = static_cast<std::uint32_t>(token.size());
        out.write(reinterpret_cast<const char*>(&len), sizeof(len));
        out.write(token.data(), static_cast<std::streamsize>(len));
    }
    out.write(reinterpret_cast<const char*>(table.rows.data()),
              static_cast<std::streamsize>(table.rows.size() * sizeof(float)));
}

std::pair<EmbeddingTable, Vocab> read_embedding_file(
    const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open embedding file '" + path.string() + "'");
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kEmbedMagic, sizeof(magic)) != 0)
        throw FormatError("not an embedding file: " + path.string());
    std::uint32_t prov = 0, dim = 0;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&prov), sizeof(prov));
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in || prov > 1) throw FormatError("corrupt embedding header");

    Vocab vocab;
    vocab.tokens.clear();
    vocab.counts.clear();
    vocab.index.clear();
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint32_t len = 0;
        in.read(reinterpret_cast<char*>(&len), sizeof(len));
        std::string token(len, '\0');
        in.read(token.data(), static_cast<std::streamsize>(len));
        if (!in) throw FormatError("truncated embedding vocabulary");
        vocab.index.emplace(token, static_cast<long>(vocab.tokens.size()));
        vocab.tokens.push_back(std::move(token));
        vocab.counts.push_back(0);
    }
    EmbeddingTable table;
    table.provenance = static_cast<Provenance>(prov);
    table.dim = static_cast<long>(dim);
    table.rows.resize(n * dim);
    in.read(reinterpret_cast<char*>(table.rows.data()),
            static_cast<std::streamsize>(table.rows.size() * sizeof(float)));
    if (!in) throw FormatError("truncated embedding matrix");
    return {std::move(table), std::move(vocab)};
}

}  // namespace magnet::embed
