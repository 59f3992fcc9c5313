#include "magnet/code_graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "magnet/errors.hpp"
#include "magnet/node_types.hpp"

namespace magnet {

const char* to_string(EdgeKind k) {
    switch (k) {
        case EdgeKind::AST: return "AST";
        case EdgeKind::CFG: return "CFG";
        case EdgeKind::DFG: return "DFG";
        case EdgeKind::NCS: return "NCS";
    }
    return "?";
}

std::optional<EdgeKind> edge_kind_from(std::string_view name) {
    if (name == "AST") return EdgeKind::AST;
    if (name == "CFG") return EdgeKind::CFG;
    if (name == "DFG") return EdgeKind::DFG;
    if (name == "NCS") return EdgeKind::NCS;
    return std::nullopt;
}

const CodeNode* CodeGraph::find(int id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

std::size_t CodeGraph::edge_count(EdgeKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(edges.begin(), edges.end(),
                      [&](const CodeEdge& e) { return e.kind == kind; }));
}

bool structurally_equal(const CodeGraph& a, const CodeGraph& b) {
    if (a.function_name != b.function_name) return false;
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size())
        return false;

    auto node_key = [](const CodeNode& n) {
        return std::tuple(n.id, n.type, n.value,
                          n.span ? n.span->first : -1,
                          n.span ? n.span->last : -1);
    };
    std::multiset<decltype(node_key(a.nodes[0]))> na, nb;
    for (const auto& n : a.nodes) na.insert(node_key(n));
    for (const auto& n : b.nodes) nb.insert(node_key(n));
    if (na != nb) return false;

    auto edge_key = [](const CodeEdge& e) {
        return std::tuple(static_cast<int>(e.kind), e.src, e.dst);
    };
    std::multiset<std::tuple<int, int, int>> ea, eb;
    for (const auto& e : a.edges) ea.insert(edge_key(e));
    for (const auto& e : b.edges) eb.insert(edge_key(e));
    return ea == eb;
}

void validate_graph(const CodeGraph& g) {
    std::set<int> ids;
    for (const auto& n : g.nodes) {
        if (!ids.insert(n.id).second)
            throw FormatError("duplicate node id " + std::to_string(n.id) +
                              " in graph '" + g.function_name + "'");
        if (!is_known_node_type(n.type))
            throw FormatError("unknown node type '" + n.type + "' (node " +
                              std::to_string(n.id) + ")");
    }
    for (const auto& e : g.edges) {
        if (!ids.count(e.src) || !ids.count(e.dst))
            throw FormatError("edge " + std::to_string(e.src) + "->" +
                              std::to_string(e.dst) +
                              " references a missing node");
    }
}

}  // namespace magnet
