#pragma once

#include <memory>
#include <string>
#include <vector>

#include "magnet/code_graph.hpp"
#include "magnet/cparse/lexer.hpp"

namespace magnet::cparse {

/// One node of the function AST. `type` is a vocabulary name, `value` the
/// (whitespace-normalized) source text, `span` the inclusive token range.
struct AstNode {
    std::string type;
    std::string value;
    std::optional<TokenSpan> span;
    std::vector<std::unique_ptr<AstNode>> children;

    AstNode() = default;
    AstNode(std::string type, std::string value, TokenSpan span)
        : type(std::move(type)), value(std::move(value)), span(span) {}

    AstNode* add_child(std::unique_ptr<AstNode> child) {
        children.push_back(std::move(child));
        return children.back().get();
    }
    bool is_leaf() const { return children.empty(); }
};

struct Ast {
    std::unique_ptr<AstNode> root;  // Function node
    std::vector<Token> tokens;
    std::string function_name;
};

/// Parses one complete C function (supported subset) into an Ast whose node
/// types are drawn from the node-type vocabulary. Throws ParseError.
Ast parse_function(std::vector<Token> tokens);

}  // namespace magnet::cparse
