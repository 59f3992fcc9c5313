#include <memory>
#include <string>
#include <utility>

#include "magnet/cparse/ast.hpp"
#include "magnet/errors.hpp"

namespace magnet::cparse {

namespace {

bool is_type_keyword(const Token& t) {
    if (t.kind != TokenKind::Keyword) return false;
    return t.text == "void" || t.text == "char" || t.text == "short" ||
           t.text == "int" || t.text == "long" || t.text == "float" ||
           t.text == "double" || t.text == "signed" || t.text == "unsigned" ||
           t.text == "const" || t.text == "static";
}

bool is_assign_op(std::string_view s) {
    return s == "=" || s == "+=" || s == "-=" || s == "*=" || s == "/=" ||
           s == "%=" || s == "&=" || s == "|=" || s == "^=" || s == "<<=" ||
           s == ">>=";
}

struct BinaryLevel {
    const char* node_type;
    std::initializer_list<std::string_view> ops;
};

// Lowest precedence first; unary binds tighter than all of these.
constexpr int kBinaryLevels = 10;
const BinaryLevel kLevels[kBinaryLevels] = {
    {"OrExpression", {"||"}},
    {"AndExpression", {"&&"}},
    {"InclusiveOrExpression", {"|"}},
    {"ExclusiveOrExpression", {"^"}},
    {"BitAndExpression", {"&"}},
    {"EqualityExpression", {"==", "!="}},
    {"RelationalExpression", {"<", ">", "<=", ">="}},
    {"ShiftExpression", {"<<", ">>"}},
    {"AdditiveExpression", {"+", "-"}},
    {"MultiplicativeExpression", {"*", "/", "%"}},
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Ast run() {
        Ast ast;
        ast.root = parse_function_def();
        if (pos_ != toks_.size())
            fail("trailing tokens after function body");
        ast.function_name = function_name_;
        ast.tokens = std::move(toks_);
        return ast;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int loop_depth_ = 0;
    std::string function_name_;

    using NodePtr = std::unique_ptr<AstNode>;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, static_cast<int>(
                                  pos_ < toks_.size() ? pos_ : toks_.size()));
    }
    bool done() const { return pos_ >= toks_.size(); }
    const Token& peek() const {
        if (done()) throw ParseError("unexpected end of input",
                                     static_cast<int>(toks_.size()));
        return toks_[pos_];
    }
    bool at(std::string_view text) const {
        return !done() && toks_[pos_].text == text;
    }
    bool accept(std::string_view text) {
        if (!at(text)) return false;
        ++pos_;
        return true;
    }
    void expect(std::string_view text) {
        if (!accept(text)) fail("expected '" + std::string(text) + "'");
    }
    int last() const { return static_cast<int>(pos_) - 1; }

    NodePtr make(std::string type, int first, int last_tok) {
        return std::make_unique<AstNode>(std::move(type),
                                         join_tokens(toks_, first, last_tok),
                                         TokenSpan{first, last_tok});
    }

    // type-spec: one or more type keywords followed by pointer stars.
    // Returns [first, last] token range, or fails.
    TokenSpan parse_type_spec() {
        const int first = static_cast<int>(pos_);
        if (done() || !is_type_keyword(peek())) fail("expected type specifier");
        while (!done() && is_type_keyword(peek())) ++pos_;
        while (at("*")) ++pos_;
        return {first, last()};
    }

    NodePtr parse_function_def() {
        const TokenSpan ret_span = parse_type_spec();
        if (done() || peek().kind != TokenKind::Identifier)
            fail("expected function name");
        function_name_ = peek().text;
        ++pos_;

        auto fn = std::make_unique<AstNode>();
        fn->type = "Function";
        fn->value = function_name_;

        fn->add_child(make("ReturnType", ret_span.first, ret_span.last));

        const int plist_first = static_cast<int>(pos_);
        expect("(");
        auto plist = std::make_unique<AstNode>();
        plist->type = "ParameterList";
        if (!at(")")) {
            if (at("void") && pos_ + 1 < toks_.size() &&
                toks_[pos_ + 1].text == ")") {
                ++pos_;  // (void) parameter list
            } else {
                do {
                    plist->add_child(parse_parameter());
                } while (accept(","));
            }
        }
        expect(")");
        plist->span = TokenSpan{plist_first, last()};
        plist->value = join_tokens(toks_, plist_first, last());
        fn->add_child(std::move(plist));

        if (!at("{")) fail("expected function body");
        fn->add_child(parse_compound());

        fn->span = TokenSpan{0, last()};
        return fn;
    }

    NodePtr parse_parameter() {
        const int first = static_cast<int>(pos_);
        const TokenSpan type_span = parse_type_spec();
        if (done() || peek().kind != TokenKind::Identifier)
            fail("expected parameter name");
        const int name_tok = static_cast<int>(pos_);
        ++pos_;
        if (accept("[")) expect("]");
        auto param = make("Parameter", first, last());
        param->add_child(make("ParameterType", type_span.first, type_span.last));
        param->add_child(make("Identifier", name_tok, name_tok));
        return param;
    }

    NodePtr parse_compound() {
        const int first = static_cast<int>(pos_);
        expect("{");
        auto node = std::make_unique<AstNode>();
        node->type = "CompoundStatement";
        while (!at("}")) {
            if (done()) fail("unterminated block");
            if (auto stmt = parse_statement()) node->add_child(std::move(stmt));
        }
        expect("}");
        node->span = TokenSpan{first, last()};
        node->value = join_tokens(toks_, first, last());
        return node;
    }

    // Returns nullptr for the empty statement ';'.
    NodePtr parse_statement() {
        if (accept(";")) return nullptr;
        if (at("{")) return parse_compound();
        if (at("if")) return parse_if();
        if (at("while")) return parse_while();
        if (at("for")) return parse_for();
        if (at("return")) return parse_return();
        if (at("break") || at("continue")) return parse_jump();
        if (at("do") || at("switch") || at("goto") || at("typedef") ||
            at("struct") || at("union") || at("enum") || at("case") ||
            at("default"))
            fail("unsupported statement '" + peek().text + "'");
        if (!done() && is_type_keyword(peek())) return parse_declaration();
        return parse_expression_statement();
    }

    NodePtr parse_if() {
        const int first = static_cast<int>(pos_);
        expect("if");
        expect("(");
        auto cond = parse_condition();
        expect(")");
        auto node = std::make_unique<AstNode>();
        node->type = "IfStatement";
        node->add_child(std::move(cond));
        if (auto then_stmt = parse_statement())
            node->add_child(std::move(then_stmt));
        if (at("else")) {
            const int else_first = static_cast<int>(pos_);
            ++pos_;
            auto else_node = std::make_unique<AstNode>();
            else_node->type = "ElseStatement";
            if (auto else_stmt = parse_statement())
                else_node->add_child(std::move(else_stmt));
            else_node->span = TokenSpan{else_first, last()};
            else_node->value = join_tokens(toks_, else_first, last());
            node->add_child(std::move(else_node));
        }
        node->span = TokenSpan{first, last()};
        node->value = join_tokens(toks_, first, last());
        return node;
    }

    NodePtr parse_condition() {
        auto expr = parse_expression();
        auto cond = std::make_unique<AstNode>();
        cond->type = "Condition";
        cond->span = expr->span;
        cond->value = expr->value;
        cond->add_child(std::move(expr));
        return cond;
    }

    NodePtr parse_while() {
        const int first = static_cast<int>(pos_);
        expect("while");
        expect("(");
        auto cond = parse_condition();
        expect(")");
        auto node = std::make_unique<AstNode>();
        node->type = "WhileStatement";
        node->add_child(std::move(cond));
        ++loop_depth_;
        auto body = parse_statement();
        --loop_depth_;
        if (body) node->add_child(std::move(body));
        node->span = TokenSpan{first, last()};
        node->value = join_tokens(toks_, first, last());
        return node;
    }

    NodePtr parse_for() {
        const int first = static_cast<int>(pos_);
        expect("for");
        expect("(");
        auto node = std::make_unique<AstNode>();
        node->type = "ForStatement";

        if (!accept(";")) {
            const int init_first = static_cast<int>(pos_);
            NodePtr init;
            if (!done() && is_type_keyword(peek())) {
                init = parse_declaration();  // consumes ';'
            } else {
                init = parse_expression();
                expect(";");
            }
            auto fi = std::make_unique<AstNode>();
            fi->type = "ForInit";
            fi->span = TokenSpan{init_first, init->span->last};
            fi->value = join_tokens(toks_, init_first, init->span->last);
            fi->add_child(std::move(init));
            node->add_child(std::move(fi));
        }
        if (!accept(";")) {
            node->add_child(parse_condition());
            expect(";");
        }
        if (!at(")")) node->add_child(parse_expression());
        expect(")");
        ++loop_depth_;
        auto body = parse_statement();
        --loop_depth_;
        if (body) node->add_child(std::move(body));
        node->span = TokenSpan{first, last()};
        node->value = join_tokens(toks_, first, last());
        return node;
    }

    NodePtr parse_return() {
        const int first = static_cast<int>(pos_);
        expect("return");
        NodePtr expr;
        if (!at(";")) expr = parse_expression();
        expect(";");
        auto node = make("ReturnStatement", first, last() - 1);  // drop ';'
        if (expr) node->add_child(std::move(expr));
        return node;
    }

    NodePtr parse_jump() {
        const int first = static_cast<int>(pos_);
        const bool is_break = at("break");
        ++pos_;
        if (loop_depth_ == 0)
            fail(std::string(is_break ? "break" : "continue") +
                 " outside loop");
        expect(";");
        return make(is_break ? "BreakStatement" : "ContinueStatement", first,
                    first);
    }

    NodePtr parse_declaration() {
        const int first = static_cast<int>(pos_);
        const TokenSpan type_span = parse_type_spec();
        auto node = std::make_unique<AstNode>();
        node->type = "IdentifierDeclStatement";
        do {
            node->add_child(parse_declarator(type_span));
        } while (accept(","));
        expect(";");
        node->span = TokenSpan{first, last() - 1};  // drop ';'
        node->value = join_tokens(toks_, first, last() - 1);
        return node;
    }

    NodePtr parse_declarator(TokenSpan type_span) {
        const int first = static_cast<int>(pos_);
        while (at("*")) ++pos_;
        if (done() || peek().kind != TokenKind::Identifier)
            fail("expected declarator name");
        const int name_tok = static_cast<int>(pos_);
        ++pos_;

        NodePtr array_size;
        bool is_array = false;
        if (accept("[")) {
            is_array = true;
            if (!at("]")) array_size = parse_expression();
            expect("]");
        }
        NodePtr init;
        if (accept("=")) {
            if (is_array) fail("array initializers unsupported");
            init = parse_assignment_expr();
        }
        auto decl = make("IdentifierDecl", first, last());
        decl->add_child(make("IdentifierDeclType", type_span.first,
                             type_span.last));
        if (init) {
            auto asgn = make("AssignmentExpression", first, last());
            asgn->add_child(make("Identifier", name_tok, name_tok));
            asgn->add_child(std::move(init));
            decl->add_child(std::move(asgn));
        } else {
            decl->add_child(make("Identifier", name_tok, name_tok));
            if (array_size) decl->add_child(std::move(array_size));
        }
        return decl;
    }

    NodePtr parse_expression_statement() {
        auto expr = parse_expression();
        expect(";");
        auto node = std::make_unique<AstNode>();
        node->type = "ExpressionStatement";
        node->span = expr->span;
        node->value = expr->value;
        node->add_child(std::move(expr));
        return node;
    }

    NodePtr parse_expression() { return parse_assignment_expr(); }

    NodePtr parse_assignment_expr() {
        const int first = static_cast<int>(pos_);
        auto lhs = parse_binary(0);
        if (done() || peek().kind != TokenKind::Operator ||
            !is_assign_op(peek().text))
            return lhs;
        if (lhs->type != "Identifier" && lhs->type != "ArrayIndexing" &&
            lhs->type != "UnaryExpression")
            fail("assignment target is not an lvalue");
        ++pos_;  // assignment operator
        auto rhs = parse_assignment_expr();
        auto node = make("AssignmentExpression", first, last());
        node->add_child(std::move(lhs));
        node->add_child(std::move(rhs));
        return node;
    }

    NodePtr parse_binary(int level) {
        if (level == kBinaryLevels) return parse_unary();
        const int first = static_cast<int>(pos_);
        auto lhs = parse_binary(level + 1);
        for (;;) {
            if (done() || peek().kind != TokenKind::Operator) return lhs;
            bool matched = false;
            for (std::string_view op : kLevels[level].ops)
                if (peek().text == op) matched = true;
            if (!matched) return lhs;
            // Leave assignment-shaped operators to the caller (e.g. "=" after
            // "<" never happens, but "&" vs "&=" does differ by token).
            ++pos_;
            auto rhs = parse_binary(level + 1);
            auto node = make(kLevels[level].node_type, first, last());
            node->add_child(std::move(lhs));
            node->add_child(std::move(rhs));
            lhs = std::move(node);
        }
    }

    NodePtr parse_unary() {
        const int first = static_cast<int>(pos_);
        if (at("-") || at("!") || at("~")) {
            ++pos_;
            auto operand = parse_unary();
            auto node = make("UnaryOperationExpression", first, last());
            node->add_child(std::move(operand));
            return node;
        }
        if (at("*") || at("&")) {
            ++pos_;
            auto operand = parse_unary();
            auto node = make("UnaryExpression", first, last());
            node->add_child(std::move(operand));
            return node;
        }
        if (at("++") || at("--")) {
            ++pos_;
            auto operand = parse_unary();
            auto node = make("IncDec", first, last());
            node->add_child(std::move(operand));
            return node;
        }
        return parse_postfix();
    }

    NodePtr parse_postfix() {
        const int first = static_cast<int>(pos_);
        auto node = parse_primary();
        for (;;) {
            if (at("[")) {
                ++pos_;
                auto index = parse_expression();
                expect("]");
                auto arr = make("ArrayIndexing", first, last());
                arr->add_child(std::move(node));
                arr->add_child(std::move(index));
                node = std::move(arr);
            } else if (at("(")) {
                auto callee = std::make_unique<AstNode>();
                callee->type = "Callee";
                callee->span = node->span;
                callee->value = node->value;
                callee->add_child(std::move(node));

                const int args_first = static_cast<int>(pos_);
                ++pos_;
                auto args = std::make_unique<AstNode>();
                args->type = "ArgumentList";
                if (!at(")")) {
                    do {
                        auto expr = parse_assignment_expr();
                        auto arg = std::make_unique<AstNode>();
                        arg->type = "Argument";
                        arg->span = expr->span;
                        arg->value = expr->value;
                        arg->add_child(std::move(expr));
                        args->add_child(std::move(arg));
                    } while (accept(","));
                }
                expect(")");
                args->span = TokenSpan{args_first, last()};
                args->value = join_tokens(toks_, args_first, last());

                auto call = make("CallExpression", first, last());
                call->add_child(std::move(callee));
                call->add_child(std::move(args));
                node = std::move(call);
            } else if (at("++") || at("--")) {
                ++pos_;
                auto incdec = make("IncDec", first, last());
                incdec->add_child(std::move(node));
                node = std::move(incdec);
            } else {
                return node;
            }
        }
    }

    NodePtr parse_primary() {
        if (done()) fail("expected expression");
        const Token& t = peek();
        if (t.kind == TokenKind::Identifier) {
            ++pos_;
            return make("Identifier", last(), last());
        }
        if (t.kind == TokenKind::Literal) {
            ++pos_;
            return make("PrimaryExpression", last(), last());
        }
        if (at("(")) {
            ++pos_;
            auto inner = parse_expression();
            expect(")");
            return inner;
        }
        fail("unexpected token '" + t.text + "'");
    }
};

}  // namespace

Ast parse_function(std::vector<Token> tokens) {
    return Parser(std::move(tokens)).run();
}

}  // namespace magnet::cparse
