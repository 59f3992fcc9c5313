#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace magnet {

/// Edge kinds of the code structure graph.
enum class EdgeKind { AST = 0, CFG = 1, DFG = 2, NCS = 3 };

inline constexpr int kEdgeKindCount = 4;

const char* to_string(EdgeKind k);
std::optional<EdgeKind> edge_kind_from(std::string_view name);

/// Inclusive range of token indices into the function's token stream.
struct TokenSpan {
    int first = 0;
    int last = 0;
    bool operator==(const TokenSpan&) const = default;
};

struct CodeNode {
    int id = 0;
    std::string type;   // member of the node-type vocabulary
    std::string value;  // source text; empty for synthetic nodes
    std::optional<TokenSpan> span;
    bool operator==(const CodeNode&) const = default;
};

struct CodeEdge {
    int src = 0;
    int dst = 0;
    EdgeKind kind = EdgeKind::AST;
    bool operator==(const CodeEdge&) const = default;
};

/// Typed directed multigraph of a single function: AST-derived nodes plus
/// synthetic entry/exit, with AST/CFG/DFG/NCS edge sets merged.
struct CodeGraph {
    std::string function_name;
    std::vector<CodeNode> nodes;
    std::vector<CodeEdge> edges;

    const CodeNode* find(int id) const;
    std::size_t edge_count(EdgeKind kind) const;
};

/// Same node set (by id, type, value, span) and same edge multiset.
bool structurally_equal(const CodeGraph& a, const CodeGraph& b);

/// Checks ids unique, node types in-vocabulary, and edge endpoints present.
/// Throws FormatError on violation.
void validate_graph(const CodeGraph& g);

}  // namespace magnet
