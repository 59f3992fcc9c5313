#pragma once

#include <string_view>
#include <unordered_map>
#include <vector>

#include "magnet/code_graph.hpp"
#include "magnet/cparse/ast.hpp"

namespace magnet::cparse {

/// Assigns node ids: AST nodes in pre-order, then CFGEntryNode and
/// CFGExitNode. The CFG/DFG/NCS builders and lower() share this indexing.
struct AstIndex {
    std::vector<const AstNode*> nodes;  // id -> AST node (synthetic ids absent)
    std::unordered_map<const AstNode*, int> id_of;
    int entry_id = 0;
    int exit_id = 0;

    explicit AstIndex(const Ast& ast);
};

/// Intra-procedural statement-level CFG, including the synthetic
/// entry/exit nodes. Structured control flow only (the parser guarantees
/// it), so this never fails.
std::vector<CodeEdge> build_cfg(const Ast& ast, const AstIndex& index);

/// Def-use edges by variable name via reaching definitions along the CFG.
/// No alias analysis; edges connect statement-level nodes.
std::vector<CodeEdge> build_dfg(const Ast& ast, const AstIndex& index,
                                const std::vector<CodeEdge>& cfg);

/// Chain over AST leaves in ascending first-token order.
std::vector<CodeEdge> build_ncs(const Ast& ast, const AstIndex& index);

/// Full lowering: tokenize, parse, and merge AST/CFG/DFG/NCS edge sets over
/// the shared node set. Throws LexError/ParseError; on error no partial
/// graph is produced.
CodeGraph lower(std::string_view source);

/// Lowers an already-parsed function.
CodeGraph lower(const Ast& ast);

}  // namespace magnet::cparse
