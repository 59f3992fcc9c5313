#include <algorithm>

#include "magnet/cparse/lower.hpp"

namespace magnet::cparse {

namespace {

void collect_leaves(const AstNode& n, std::vector<const AstNode*>& out) {
    if (n.is_leaf()) {
        if (n.span) out.push_back(&n);
        return;
    }
    for (const auto& child : n.children) collect_leaves(*child, out);
}

}  // namespace

std::vector<CodeEdge> build_ncs(const Ast& ast, const AstIndex& index) {
    std::vector<const AstNode*> leaves;
    collect_leaves(*ast.root, leaves);
    std::sort(leaves.begin(), leaves.end(),
              [](const AstNode* a, const AstNode* b) {
                  return a->span->first < b->span->first;
              });
    std::vector<CodeEdge> edges;
    for (std::size_t i = 1; i < leaves.size(); ++i)
        edges.push_back({index.id_of.at(leaves[i - 1]),
                         index.id_of.at(leaves[i]), EdgeKind::NCS});
    return edges;
}

}  // namespace magnet::cparse
