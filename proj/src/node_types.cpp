#include "magnet/node_types.hpp"

#include <unordered_map>

#include "magnet/errors.hpp"

namespace magnet {

const char* to_string(Granularity g) {
    switch (g) {
        case Granularity::Statement: return "Statement";
        case Granularity::Expression: return "Expression";
        case Granularity::Symbol: return "Symbol";
    }
    return "?";
}

const char* short_code(Granularity g) {
    switch (g) {
        case Granularity::Statement: return "St";
        case Granularity::Expression: return "Ex";
        case Granularity::Symbol: return "Sy";
    }
    return "?";
}

const std::vector<std::pair<std::string_view, Granularity>>& node_type_table() {
    static const std::vector<std::pair<std::string_view, Granularity>> table = {
        // Statement granularity (17)
        {"Statement", Granularity::Statement},
        {"SwitchStatement", Granularity::Statement},
        {"DoStatement", Granularity::Statement},
        {"GotoStatement", Granularity::Statement},
        {"WhileStatement", Granularity::Statement},
        {"BreakStatement", Granularity::Statement},
        {"CompoundStatement", Granularity::Statement},
        {"ForStatement", Granularity::Statement},
        {"ReturnStatement", Granularity::Statement},
        {"IdentifierDeclStatement", Granularity::Statement},
        {"TryStatement", Granularity::Statement},
        {"ClassDefStatement", Granularity::Statement},
        {"ContinueStatement", Granularity::Statement},
        {"IfStatement", Granularity::Statement},
        {"ExpressionStatement", Granularity::Statement},
        {"ElseStatement", Granularity::Statement},
        {"DeclStatement", Granularity::Statement},
        // Expression granularity (20)
        {"Expression", Granularity::Expression},
        {"InclusiveOrExpression", Granularity::Expression},
        {"MultiplicativeExpression", Granularity::Expression},
        {"AssignmentExpression", Granularity::Expression},
        {"UnaryOperationExpression", Granularity::Expression},
        {"SizeofExpression", Granularity::Expression},
        {"OrExpression", Granularity::Expression},
        {"ShiftExpression", Granularity::Expression},
        {"RelationalExpression", Granularity::Expression},
        {"CallExpression", Granularity::Expression},
        {"CastExpression", Granularity::Expression},
        {"ConditionalExpression", Granularity::Expression},
        {"OperationExpression", Granularity::Expression},
        {"EqualityExpression", Granularity::Expression},
        {"AdditiveExpression", Granularity::Expression},
        {"PrimaryExpression", Granularity::Expression},
        {"AndExpression", Granularity::Expression},
        {"ExclusiveOrExpression", Granularity::Expression},
        {"BitAndExpression", Granularity::Expression},
        {"UnaryExpression", Granularity::Expression},
        // Symbol granularity (32)
        {"Symbol", Granularity::Symbol},
        {"File", Granularity::Symbol},
        {"IncDec", Granularity::Symbol},
        {"ForInit", Granularity::Symbol},
        {"SizeofOperand", Granularity::Symbol},
        {"PtrMemberAccess", Granularity::Symbol},
        {"Sizeof", Granularity::Symbol},
        {"IdentifierDeclType", Granularity::Symbol},
        {"IdentifierDecl", Granularity::Symbol},
        {"ClassDef", Granularity::Symbol},
        {"ParameterList", Granularity::Symbol},
        {"Callee", Granularity::Symbol},
        {"Condition", Granularity::Symbol},
        {"ArrayIndexing", Granularity::Symbol},
        {"ArgumentList", Granularity::Symbol},
        {"Parameter", Granularity::Symbol},
        {"Argument", Granularity::Symbol},
        {"ParameterType", Granularity::Symbol},
        {"CastTarget", Granularity::Symbol},
        {"Function", Granularity::Symbol},
        {"ReturnType", Granularity::Symbol},
        {"Label", Granularity::Symbol},
        {"FunctionDef", Granularity::Symbol},
        {"MemberAccess", Granularity::Symbol},
        {"InitializerList", Granularity::Symbol},
        {"UnaryOperator", Granularity::Symbol},
        {"CFGErrorNode", Granularity::Symbol},
        {"InfiniteForNode", Granularity::Symbol},
        {"CFGExitNode", Granularity::Symbol},
        {"CFGEntryNode", Granularity::Symbol},
        {"Identifier", Granularity::Symbol},
        {"Decl", Granularity::Symbol},
    };
    return table;
}

namespace {

const std::unordered_map<std::string_view, Granularity>& type_index() {
    static const std::unordered_map<std::string_view, Granularity> index = [] {
        std::unordered_map<std::string_view, Granularity> m;
        for (const auto& [name, gran] : node_type_table()) m.emplace(name, gran);
        return m;
    }();
    return index;
}

}  // namespace

bool is_known_node_type(std::string_view name) {
    return type_index().count(name) != 0;
}

Granularity granularity_of(std::string_view name) {
    const auto& index = type_index();
    auto it = index.find(name);
    if (it == index.end())
        throw UnknownTypeError("unknown node type: " + std::string(name));
    return it->second;
}

}  // namespace magnet
