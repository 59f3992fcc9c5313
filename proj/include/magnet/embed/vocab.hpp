#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "magnet/code_graph.hpp"

namespace magnet::embed {

/// Splits a node value string into code tokens (identifiers, numbers,
/// operators/punctuation). Lenient: never fails, skips whitespace.
std::vector<std::string> value_tokens(std::string_view value);

/// Token inventory with frequencies. Index 0 is always the OOV token.
struct Vocab {
    static constexpr const char* kOov = "<oov>";

    std::vector<std::string> tokens;  // index -> token, [0] == kOov
    std::vector<std::uint64_t> counts;
    std::unordered_map<std::string, long> index;

    Vocab();
    long size() const { return static_cast<long>(tokens.size()); }
    bool contains(std::string_view t) const;
    /// Index of a token; 0 (OOV) when unknown.
    long id_of(std::string_view t) const;
    /// Adds one observation of `t` (inserting it if new).
    void observe(const std::string& t);
};

/// Token sequence of one graph: tokens of AST-leaf node values in source
/// order (nodes without spans sorted after spanned ones, by id). This is
/// the corpus fed to embedding training.
std::vector<std::string> token_sequence(const CodeGraph& g);

/// Builds the vocabulary from node values of the given (training) graphs.
/// Tokens below min_freq are dropped; their occurrences count as OOV.
Vocab build_vocab(const std::vector<const CodeGraph*>& corpus,
                  std::uint64_t min_freq = 1);

}  // namespace magnet::embed
