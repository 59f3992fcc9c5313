#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "magnet/cparse/lower.hpp"

namespace magnet::cparse {

namespace {

struct VarAccess {
    std::set<std::string> defs;
    std::set<std::string> uses;
};

// Base variable of an lvalue expression: x, a[i] (-> a), *p (-> none: stores
// through pointers define no named variable without alias analysis).
const AstNode* lvalue_identifier(const AstNode& lhs) {
    if (lhs.type == "Identifier") return &lhs;
    if (lhs.type == "ArrayIndexing" && !lhs.children.empty())
        return lvalue_identifier(*lhs.children.front());
    return nullptr;
}

void collect(const AstNode& n, VarAccess& acc);

void collect_children(const AstNode& n, VarAccess& acc) {
    for (const auto& child : n.children) collect(*child, acc);
}

void collect(const AstNode& n, VarAccess& acc) {
    if (n.type == "Identifier") {
        acc.uses.insert(n.value);
        return;
    }
    if (n.type == "AssignmentExpression" && n.children.size() == 2) {
        const AstNode& lhs = *n.children[0];
        const AstNode& rhs = *n.children[1];
        if (const AstNode* var = lvalue_identifier(lhs)) {
            acc.defs.insert(var->value);
            // Compound assignments (x += e) and array stores (a[i] = e)
            // also read their target; detect via the value text.
            const bool plain =
                lhs.type == "Identifier" &&
                n.value.find(lhs.value + " = ") == 0;
            if (!plain) acc.uses.insert(var->value);
            // Index expressions of an array store are reads.
            if (lhs.type == "ArrayIndexing")
                for (std::size_t i = 1; i < lhs.children.size(); ++i)
                    collect(*lhs.children[i], acc);
        } else {
            collect(lhs, acc);  // *p = e reads p
        }
        collect(rhs, acc);
        return;
    }
    if (n.type == "IncDec") {
        if (!n.children.empty())
            if (const AstNode* var = lvalue_identifier(*n.children.front())) {
                acc.defs.insert(var->value);
                acc.uses.insert(var->value);
                return;
            }
        collect_children(n, acc);
        return;
    }
    if (n.type == "IdentifierDecl") {
        // Children: IdentifierDeclType, then either AssignmentExpression
        // (initialized) or Identifier (plain), plus an optional array size.
        for (const auto& child : n.children) {
            if (child->type == "IdentifierDeclType") continue;
            if (child->type == "Identifier") {
                acc.defs.insert(child->value);
            } else if (child->type == "AssignmentExpression" &&
                       child->children.size() == 2) {
                acc.defs.insert(child->children[0]->value);
                collect(*child->children[1], acc);
            } else {
                collect(*child, acc);  // array size expression
            }
        }
        return;
    }
    if (n.type == "Callee") return;  // function names are not variables
    collect_children(n, acc);
}

bool is_statement_like(const AstNode& n) {
    return n.type == "ExpressionStatement" ||
           n.type == "IdentifierDeclStatement" || n.type == "IfStatement" ||
           n.type == "WhileStatement" || n.type == "ForStatement" ||
           n.type == "ReturnStatement" || n.type == "BreakStatement" ||
           n.type == "ContinueStatement" || n.type == "CompoundStatement";
}

// Defs/uses attributed to one CFG node. For branch/loop headers only the
// header expressions count; nested statements are their own CFG nodes.
VarAccess node_access(const AstNode& stmt) {
    VarAccess acc;
    if (stmt.type == "ExpressionStatement" ||
        stmt.type == "IdentifierDeclStatement" ||
        stmt.type == "ReturnStatement") {
        collect_children(stmt, acc);
    } else if (stmt.type == "IfStatement" || stmt.type == "WhileStatement") {
        for (const auto& child : stmt.children)
            if (child->type == "Condition") collect(*child, acc);
    } else if (stmt.type == "ForStatement") {
        for (const auto& child : stmt.children)
            if (!is_statement_like(*child)) collect(*child, acc);
    }
    return acc;
}

void collect_cfg_statements(const AstNode& n,
                            std::vector<const AstNode*>& out) {
    if (n.type != "CompoundStatement" && is_statement_like(n)) out.push_back(&n);
    for (const auto& child : n.children) collect_cfg_statements(*child, out);
}

}  // namespace

std::vector<CodeEdge> build_dfg(const Ast& ast, const AstIndex& index,
                                const std::vector<CodeEdge>& cfg) {
    std::vector<const AstNode*> stmts;
    collect_cfg_statements(*ast.root, stmts);

    std::map<int, VarAccess> access;
    for (const AstNode* s : stmts) access[index.id_of.at(s)] = node_access(*s);

    // Definition sites per variable.
    std::map<std::string, std::set<int>> def_sites;
    for (const auto& [id, acc] : access)
        for (const auto& var : acc.defs) def_sites[var].insert(id);

    std::map<int, std::vector<int>> preds;
    std::set<int> cfg_nodes = {index.entry_id, index.exit_id};
    for (const auto& e : cfg) {
        preds[e.dst].push_back(e.src);
        cfg_nodes.insert(e.src);
        cfg_nodes.insert(e.dst);
    }

    // Reaching definitions: IN/OUT as var -> set of defining node ids.
    using DefMap = std::map<std::string, std::set<int>>;
    std::map<int, DefMap> out_state;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int node : cfg_nodes) {
            DefMap in_state;
            for (int p : preds[node])
                for (const auto& [var, defs] : out_state[p])
                    in_state[var].insert(defs.begin(), defs.end());
            DefMap next = in_state;
            auto it = access.find(node);
            if (it != access.end())
                for (const auto& var : it->second.defs)
                    next[var] = {node};  // gen kills all other defs of var
            if (next != out_state[node]) {
                out_state[node] = std::move(next);
                changed = true;
            }
        }
    }

    // Def-use edges: defs reaching a node's entry feed its uses.
    std::set<std::pair<int, int>> emitted;
    for (int node : cfg_nodes) {
        auto it = access.find(node);
        if (it == access.end()) continue;
        DefMap in_state;
        for (int p : preds[node])
            for (const auto& [var, defs] : out_state[p])
                in_state[var].insert(defs.begin(), defs.end());
        for (const auto& var : it->second.uses) {
            auto defs = in_state.find(var);
            if (defs == in_state.end()) continue;
            for (int def_node : defs->second) emitted.insert({def_node, node});
        }
    }

    std::vector<CodeEdge> edges;
    edges.reserve(emitted.size());
    for (const auto& [src, dst] : emitted)
        edges.push_back({src, dst, EdgeKind::DFG});
    return edges;
}

}  // namespace magnet::cparse
