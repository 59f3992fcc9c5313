#include <set>

#include "magnet/cparse/lower.hpp"

namespace magnet::cparse {

namespace {

bool is_cfg_statement(const AstNode& n) {
    return n.type == "ExpressionStatement" ||
           n.type == "IdentifierDeclStatement" || n.type == "IfStatement" ||
           n.type == "WhileStatement" || n.type == "ForStatement" ||
           n.type == "ReturnStatement" || n.type == "BreakStatement" ||
           n.type == "ContinueStatement";
}

bool is_statement_like(const AstNode& n) {
    return is_cfg_statement(n) || n.type == "CompoundStatement";
}

// Loop body of a While/For node: the trailing child when it is a statement.
const AstNode* loop_body(const AstNode& n) {
    if (n.children.empty()) return nullptr;
    const AstNode* tail = n.children.back().get();
    return is_statement_like(*tail) ? tail : nullptr;
}

class CfgBuilder {
public:
    CfgBuilder(const AstIndex& index) : index_(index) {}

    std::vector<CodeEdge> build(const AstNode& body) {
        std::vector<int> incoming = {index_.entry_id};
        incoming = chain(body, incoming);
        for (int id : incoming) emit(id, index_.exit_id);
        std::vector<CodeEdge> out;
        out.reserve(edges_.size());
        for (const auto& [src, dst] : edges_)
            out.push_back({src, dst, EdgeKind::CFG});
        return out;
    }

private:
    const AstIndex& index_;
    // Ordered set keeps output deterministic and deduplicates parallel
    // same-kind edges created by branch joins.
    std::set<std::pair<int, int>> edges_;

    struct LoopCtx {
        int header;
        std::vector<int>* breaks;
    };
    std::vector<LoopCtx> loops_;

    void emit(int src, int dst) { edges_.insert({src, dst}); }

    int id(const AstNode& n) const { return index_.id_of.at(&n); }

    // Wires `incoming` into the statement sequence of a compound (or a
    // single statement) and returns the live exits after it.
    std::vector<int> chain(const AstNode& stmt, std::vector<int> incoming) {
        if (stmt.type == "CompoundStatement") {
            for (const auto& child : stmt.children)
                if (is_statement_like(*child))
                    incoming = chain(*child, std::move(incoming));
            return incoming;
        }
        return statement(stmt, std::move(incoming));
    }

    std::vector<int> statement(const AstNode& stmt, std::vector<int> incoming) {
        const int self = id(stmt);
        for (int pred : incoming) emit(pred, self);

        if (stmt.type == "ExpressionStatement" ||
            stmt.type == "IdentifierDeclStatement")
            return {self};

        if (stmt.type == "ReturnStatement") {
            emit(self, index_.exit_id);
            return {};
        }
        if (stmt.type == "BreakStatement") {
            if (!loops_.empty()) loops_.back().breaks->push_back(self);
            return {};
        }
        if (stmt.type == "ContinueStatement") {
            if (!loops_.empty()) emit(self, loops_.back().header);
            return {};
        }
        if (stmt.type == "IfStatement") {
            const AstNode* then_stmt = nullptr;
            const AstNode* else_node = nullptr;
            for (const auto& child : stmt.children) {
                if (child->type == "ElseStatement")
                    else_node = child.get();
                else if (is_statement_like(*child))
                    then_stmt = child.get();
            }
            std::vector<int> exits;
            if (then_stmt) {
                auto branch = chain(*then_stmt, {self});
                exits.insert(exits.end(), branch.begin(), branch.end());
            } else {
                exits.push_back(self);
            }
            if (else_node) {
                const AstNode* else_stmt = nullptr;
                for (const auto& child : else_node->children)
                    if (is_statement_like(*child)) else_stmt = child.get();
                if (else_stmt) {
                    auto branch = chain(*else_stmt, {self});
                    exits.insert(exits.end(), branch.begin(), branch.end());
                } else {
                    exits.push_back(self);
                }
            } else if (then_stmt) {
                exits.push_back(self);  // condition-false fallthrough
            }
            return exits;
        }
        if (stmt.type == "WhileStatement" || stmt.type == "ForStatement") {
            std::vector<int> breaks;
            loops_.push_back({self, &breaks});
            if (const AstNode* body = loop_body(stmt)) {
                auto body_exits = chain(*body, {self});
                for (int e : body_exits) emit(e, self);
            } else {
                emit(self, self);  // empty loop body spins on the header
            }
            loops_.pop_back();
            std::vector<int> exits = {self};
            exits.insert(exits.end(), breaks.begin(), breaks.end());
            return exits;
        }
        // CompoundStatement handled by chain(); nothing else reaches here.
        return {self};
    }
};

}  // namespace

std::vector<CodeEdge> build_cfg(const Ast& ast, const AstIndex& index) {
    const AstNode* body = nullptr;
    for (const auto& child : ast.root->children)
        if (child->type == "CompoundStatement") body = child.get();
    CfgBuilder builder(index);
    return builder.build(*body);
}

}  // namespace magnet::cparse
