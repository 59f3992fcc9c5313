#include "magnet/cparse/lower.hpp"

namespace magnet::cparse {

namespace {

void preorder(const AstNode& n, std::vector<const AstNode*>& out) {
    out.push_back(&n);
    for (const auto& child : n.children) preorder(*child, out);
}

}  // namespace

AstIndex::AstIndex(const Ast& ast) {
    preorder(*ast.root, nodes);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        id_of.emplace(nodes[i], static_cast<int>(i));
    entry_id = static_cast<int>(nodes.size());
    exit_id = entry_id + 1;
}

CodeGraph lower(const Ast& ast) {
    const AstIndex index(ast);

    CodeGraph g;
    g.function_name = ast.function_name;
    g.nodes.reserve(index.nodes.size() + 2);
    for (std::size_t i = 0; i < index.nodes.size(); ++i) {
        const AstNode& n = *index.nodes[i];
        g.nodes.push_back({static_cast<int>(i), n.type, n.value, n.span});
    }
    g.nodes.push_back({index.entry_id, "CFGEntryNode", "", std::nullopt});
    g.nodes.push_back({index.exit_id, "CFGExitNode", "", std::nullopt});

    // AST edges: parent -> child, pre-order.
    for (std::size_t i = 0; i < index.nodes.size(); ++i)
        for (const auto& child : index.nodes[i]->children)
            g.edges.push_back({static_cast<int>(i),
                               index.id_of.at(child.get()), EdgeKind::AST});

    const auto cfg = build_cfg(ast, index);
    g.edges.insert(g.edges.end(), cfg.begin(), cfg.end());
    const auto dfg = build_dfg(ast, index, cfg);
    g.edges.insert(g.edges.end(), dfg.begin(), dfg.end());
    const auto ncs = build_ncs(ast, index);
    g.edges.insert(g.edges.end(), ncs.begin(), ncs.end());
    return g;
}

CodeGraph lower(std::string_view source) {
    return lower(parse_function(tokenize(source)));
}

}  // namespace magnet::cparse
