#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "magnet/code_graph.hpp"
#include "magnet/embed/vocab.hpp"

namespace magnet::embed {

enum class Provenance { Skipgram = 0, Hashed = 1 };

const char* to_string(Provenance p);

/// Dense |V| x dim embedding matrix aligned with a Vocab.
struct EmbeddingTable {
    Provenance provenance = Provenance::Hashed;
    long dim = 100;
    std::vector<float> rows;  // row-major, |V| * dim

    long vocab_size() const {
        return dim == 0 ? 0 : static_cast<long>(rows.size()) / dim;
    }
    const float* row(long idx) const { return rows.data() + idx * dim; }
};

/// Deterministic fallback embedding: a unit-norm vector seeded from a
/// stable hash of the token text.
std::vector<float> hashed_embedding(std::string_view token, long dim = 100);

/// Table with one hashed row per vocabulary token.
EmbeddingTable hashed_table(const Vocab& vocab, long dim = 100);

/// Initial node vector h0: mean of the value's token embeddings; the zero
/// vector for synthetic/empty-value nodes.
std::vector<float> node_init(const CodeNode& node, const Vocab& vocab,
                             const EmbeddingTable& table);

/// Standalone binary export (versioned header + row-major little-endian
/// 32-bit floats).
void write_embedding_file(const EmbeddingTable& table, const Vocab& vocab,
                          const std::filesystem::path& path);
std::pair<EmbeddingTable, Vocab> read_embedding_file(
    const std::filesystem::path& path);

}  // namespace magnet::embed
