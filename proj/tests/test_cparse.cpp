#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "magnet/cparse/lower.hpp"
#include "magnet/errors.hpp"
#include "magnet/node_types.hpp"
#include "magnet/trainer/toygen.hpp"

using namespace magnet;
using namespace magnet::cparse;

namespace {

const CodeNode& node_of_type(const CodeGraph& g, const std::string& type,
                             int occurrence = 0) {
    int seen = 0;
    for (const auto& n : g.nodes)
        if (n.type == type && seen++ == occurrence) return n;
    FAIL("no node of type ", type, " (occurrence ", occurrence, ")");
    static CodeNode dummy;
    return dummy;
}

int count_type(const CodeGraph& g, const std::string& type) {
    return static_cast<int>(
        std::count_if(g.nodes.begin(), g.nodes.end(),
                      [&](const CodeNode& n) { return n.type == type; }));
}

bool has_edge(const CodeGraph& g, int src, int dst, EdgeKind kind) {
    return std::any_of(g.edges.begin(), g.edges.end(), [&](const CodeEdge& e) {
        return e.src == src && e.dst == dst && e.kind == kind;
    });
}

std::vector<CodeEdge> edges_of(const CodeGraph& g, EdgeKind kind) {
    std::vector<CodeEdge> out;
    for (const auto& e : g.edges)
        if (e.kind == kind) out.push_back(e);
    return out;
}

const CodeNode& node_by_value(const CodeGraph& g, const std::string& type,
                              const std::string& value) {
    for (const auto& n : g.nodes)
        if (n.type == type && n.value == value) return n;
    FAIL("no ", type, " node with value '", value, "'");
    static CodeNode dummy;
    return dummy;
}

}  // namespace

TEST_CASE("tokenize: minimal function") {
    const auto toks = tokenize("int f(){return 0;}");
    REQUIRE(toks.size() == 9);
    const char* expected[] = {"int", "f", "(", ")", "{", "return", "0", ";", "}"};
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(toks[i].text == expected[i]);
        CHECK(toks[i].index == static_cast<int>(i));
    }
    CHECK(toks[0].kind == TokenKind::Keyword);
    CHECK(toks[1].kind == TokenKind::Identifier);
    CHECK(toks[6].kind == TokenKind::Literal);
}

TEST_CASE("tokenize: empty input raises LexError") {
    CHECK_THROWS_AS(tokenize(""), LexError);
    CHECK_THROWS_AS(tokenize("   \n\t "), LexError);
}

TEST_CASE("tokenize: comments stripped") {
    const auto toks = tokenize("a /*c*/ b");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].text == "a");
    CHECK(toks[1].text == "b");

    const auto toks2 = tokenize("x // line comment\ny");
    REQUIRE(toks2.size() == 2);
    CHECK(toks2[1].line == 2);
}

TEST_CASE("tokenize: diagnostics carry line and column") {
    try {
        tokenize("int f(){\n  int a = 1 @ 2;\n}");
        FAIL("expected LexError");
    } catch (const LexError& err) {
        CHECK(err.line == 2);
        CHECK(err.column == 13);
    }
    CHECK_THROWS_AS(tokenize("char* s = \"abc"), LexError);
    CHECK_THROWS_AS(tokenize("/* never closed"), LexError);
}

TEST_CASE("tokenize: maximal munch and literals") {
    const auto toks = tokenize("a <<= b >> 0x1f && c != 1.5e-3");
    std::vector<std::string> texts;
    for (const auto& t : toks) texts.push_back(t.text);
    CHECK(texts == std::vector<std::string>{"a", "<<=", "b", ">>", "0x1f",
                                            "&&", "c", "!=", "1.5e-3"});
}

TEST_CASE("parse: assignment with additive rhs") {
    const auto g = lower("void f(int x, int a, int b){ x = a + b; }");
    const auto& stmt = node_of_type(g, "ExpressionStatement");
    CHECK(stmt.value == "x = a + b");

    const auto& asgn = node_of_type(g, "AssignmentExpression");
    CHECK(asgn.value == "x = a + b");
    const auto& addexpr = node_of_type(g, "AdditiveExpression");
    CHECK(addexpr.value == "a + b");

    // ExpressionStatement -> AssignmentExpression -> {Identifier, Additive}
    CHECK(has_edge(g, stmt.id, asgn.id, EdgeKind::AST));
    CHECK(has_edge(g, asgn.id, addexpr.id, EdgeKind::AST));
    int ident_children = 0;
    for (const auto& e : g.edges)
        if (e.kind == EdgeKind::AST && e.src == addexpr.id &&
            g.find(e.dst)->type == "Identifier")
            ++ident_children;
    CHECK(ident_children == 2);
}

TEST_CASE("parse: empty function body") {
    const auto g = lower("int f(){}");
    CHECK(count_type(g, "Function") == 1);
    CHECK(count_type(g, "CompoundStatement") == 1);
    const auto& fn = node_of_type(g, "Function");
    const auto& body = node_of_type(g, "CompoundStatement");
    CHECK(has_edge(g, fn.id, body.id, EdgeKind::AST));
    CHECK(g.function_name == "f");
}

TEST_CASE("parse: if with relational condition and return") {
    const auto g = lower("int f(int a, int b){ if (a < b) return a; return b; }");
    const auto& ifstmt = node_of_type(g, "IfStatement");
    const auto& cond = node_of_type(g, "Condition");
    const auto& rel = node_of_type(g, "RelationalExpression");
    CHECK(has_edge(g, ifstmt.id, cond.id, EdgeKind::AST));
    CHECK(has_edge(g, cond.id, rel.id, EdgeKind::AST));
    CHECK(rel.value == "a < b");
    const auto& ret = node_of_type(g, "ReturnStatement");
    CHECK(has_edge(g, ifstmt.id, ret.id, EdgeKind::AST));
    CHECK(ret.value == "return a");
}

TEST_CASE("parse: subset violations raise ParseError") {
    CHECK_THROWS_AS(lower("int f(){ goto end; end: return 0; }"), ParseError);
    CHECK_THROWS_AS(lower("int f(){ switch (1) {} }"), ParseError);
    CHECK_THROWS_AS(lower("struct s { int a; };"), ParseError);
    CHECK_THROWS_AS(lower("int f(){ do {} while (1); }"), ParseError);
    CHECK_THROWS_AS(lower("int f(){ break; }"), ParseError);
    CHECK_THROWS_AS(lower("int f(){ return 0; } int g(){ return 1; }"),
                    ParseError);
    CHECK_THROWS_AS(lower("int f(){ return 0 }"), ParseError);
    try {
        lower("int f(){ return $; }");
        FAIL("expected an error");
    } catch (const LexError&) {
    }
}

TEST_CASE("parse: token index in ParseError") {
    try {
        parse_function(tokenize("int f(){ int 5 = 1; }"));
        FAIL("expected ParseError");
    } catch (const ParseError& err) {
        CHECK(err.token_index == 6);  // the literal where a name should be
    }
}

TEST_CASE("cfg: empty body gives single entry->exit edge") {
    const auto g = lower("int f(){}");
    const auto cfg = edges_of(g, EdgeKind::CFG);
    REQUIRE(cfg.size() == 1);
    CHECK(g.find(cfg[0].src)->type == "CFGEntryNode");
    CHECK(g.find(cfg[0].dst)->type == "CFGExitNode");
}

TEST_CASE("cfg: straight-line chain") {
    const auto g = lower("void f(){ int a = 1; a = 2; }");
    const auto& s1 = node_of_type(g, "IdentifierDeclStatement");
    const auto& s2 = node_of_type(g, "ExpressionStatement");
    const auto& entry = node_of_type(g, "CFGEntryNode");
    const auto& exit = node_of_type(g, "CFGExitNode");
    const auto cfg = edges_of(g, EdgeKind::CFG);
    CHECK(cfg.size() == 3);
    CHECK(has_edge(g, entry.id, s1.id, EdgeKind::CFG));
    CHECK(has_edge(g, s1.id, s2.id, EdgeKind::CFG));
    CHECK(has_edge(g, s2.id, exit.id, EdgeKind::CFG));
}

TEST_CASE("cfg: if/else with join") {
    // Hand-drawn: Entry->If, If->s1, If->s2, s1->s3, s2->s3, s3->Exit.
    const auto g =
        lower("void g(int c){ if (c) c = 1; else c = 2; c = 3; }");
    const auto& ifstmt = node_of_type(g, "IfStatement");
    const auto& s1 = node_by_value(g, "ExpressionStatement", "c = 1");
    const auto& s2 = node_by_value(g, "ExpressionStatement", "c = 2");
    const auto& s3 = node_by_value(g, "ExpressionStatement", "c = 3");
    const auto& entry = node_of_type(g, "CFGEntryNode");
    const auto& exit = node_of_type(g, "CFGExitNode");

    CHECK(has_edge(g, ifstmt.id, s1.id, EdgeKind::CFG));
    CHECK(has_edge(g, ifstmt.id, s2.id, EdgeKind::CFG));
    CHECK(has_edge(g, s1.id, s3.id, EdgeKind::CFG));
    CHECK(has_edge(g, s2.id, s3.id, EdgeKind::CFG));
    CHECK(has_edge(g, entry.id, ifstmt.id, EdgeKind::CFG));
    CHECK(has_edge(g, s3.id, exit.id, EdgeKind::CFG));
    CHECK(edges_of(g, EdgeKind::CFG).size() == 6);
}

TEST_CASE("cfg: if without else falls through the condition") {
    const auto g = lower("void f(int c){ if (c) c = 1; c = 2; }");
    const auto& ifstmt = node_of_type(g, "IfStatement");
    const auto& s2 = node_by_value(g, "ExpressionStatement", "c = 2");
    CHECK(has_edge(g, ifstmt.id, s2.id, EdgeKind::CFG));
}

TEST_CASE("cfg: while loop with break and continue") {
    const auto g = lower(
        "void f(int n){"
        "  while (n > 0) {"
        "    if (n == 5) break;"
        "    if (n == 7) continue;"
        "    n = n - 1;"
        "  }"
        "  n = 0;"
        "}");
    const auto& loop = node_of_type(g, "WhileStatement");
    const auto& brk = node_of_type(g, "BreakStatement");
    const auto& cont = node_of_type(g, "ContinueStatement");
    const auto& dec = node_by_value(g, "ExpressionStatement", "n = n - 1");
    const auto& after = node_by_value(g, "ExpressionStatement", "n = 0");
    CHECK(has_edge(g, brk.id, after.id, EdgeKind::CFG));   // break exits loop
    CHECK(has_edge(g, cont.id, loop.id, EdgeKind::CFG));   // continue to header
    CHECK(has_edge(g, dec.id, loop.id, EdgeKind::CFG));    // back edge
    CHECK(has_edge(g, loop.id, after.id, EdgeKind::CFG));  // condition false
}

TEST_CASE("cfg: for loop header wiring") {
    const auto g = lower(
        "int f(int n){ int s = 0; for (int i = 0; i < n; i++) { s = s + i; } "
        "return s; }");
    const auto& loop = node_of_type(g, "ForStatement");
    const auto& body = node_by_value(g, "ExpressionStatement", "s = s + i");
    const auto& ret = node_of_type(g, "ReturnStatement");
    CHECK(has_edge(g, loop.id, body.id, EdgeKind::CFG));
    CHECK(has_edge(g, body.id, loop.id, EdgeKind::CFG));
    CHECK(has_edge(g, loop.id, ret.id, EdgeKind::CFG));
}

TEST_CASE("cfg: entry in-degree 0, exit out-degree 0") {
    const auto g = lower(
        "int f(int n){ if (n) { while (n > 1) n = n - 1; return n; } return 0; }");
    const auto& entry = node_of_type(g, "CFGEntryNode");
    const auto& exit = node_of_type(g, "CFGExitNode");
    for (const auto& e : edges_of(g, EdgeKind::CFG)) {
        CHECK(e.dst != entry.id);
        CHECK(e.src != exit.id);
    }
}

TEST_CASE("dfg: decl def feeds use") {
    const auto g = lower("void f(){ int a = 1; b = a; }");
    const auto& decl = node_of_type(g, "IdentifierDeclStatement");
    const auto& use = node_by_value(g, "ExpressionStatement", "b = a");
    const auto dfg = edges_of(g, EdgeKind::DFG);
    REQUIRE(dfg.size() == 1);
    CHECK(dfg[0].src == decl.id);
    CHECK(dfg[0].dst == use.id);
}

TEST_CASE("dfg: no variables, no edges") {
    const auto g = lower("int f(){ return 0; }");
    CHECK(edges_of(g, EdgeKind::DFG).empty());
}

TEST_CASE("dfg: killed definition does not reach") {
    const auto g = lower("void f(){ int a = 1; a = 2; int c = 0; c = a; }");
    const auto& kill = node_by_value(g, "ExpressionStatement", "a = 2");
    const auto& use = node_by_value(g, "ExpressionStatement", "c = a");
    const auto& first = node_by_value(g, "IdentifierDeclStatement", "int a = 1");
    const auto dfg = edges_of(g, EdgeKind::DFG);
    CHECK(has_edge(g, kill.id, use.id, EdgeKind::DFG));
    for (const auto& e : dfg) CHECK(e.src != first.id);  // killed everywhere
}

TEST_CASE("dfg: both branch definitions reach the join") {
    const auto g = lower(
        "void f(int c){ int x = 0; if (c) x = 1; else x = 2; c = x; }");
    const auto& s1 = node_by_value(g, "ExpressionStatement", "x = 1");
    const auto& s2 = node_by_value(g, "ExpressionStatement", "x = 2");
    const auto& use = node_by_value(g, "ExpressionStatement", "c = x");
    const auto& decl = node_of_type(g, "IdentifierDeclStatement");
    CHECK(has_edge(g, s1.id, use.id, EdgeKind::DFG));
    CHECK(has_edge(g, s2.id, use.id, EdgeKind::DFG));
    CHECK_FALSE(has_edge(g, decl.id, use.id, EdgeKind::DFG));
    CHECK(edges_of(g, EdgeKind::DFG).size() == 2);
}

TEST_CASE("dfg: loop-carried definition reaches the loop header use") {
    const auto g = lower("void f(){ int n = 3; while (n > 0) { n = n - 1; } }");
    const auto& decl = node_of_type(g, "IdentifierDeclStatement");
    const auto& loop = node_of_type(g, "WhileStatement");
    const auto& dec = node_by_value(g, "ExpressionStatement", "n = n - 1");
    CHECK(has_edge(g, decl.id, loop.id, EdgeKind::DFG));
    CHECK(has_edge(g, dec.id, loop.id, EdgeKind::DFG));
    CHECK(has_edge(g, dec.id, dec.id, EdgeKind::DFG));  // via the back edge
}

TEST_CASE("ncs: chain over leaves in token order") {
    const auto g = lower("void f(int x, int a, int b){ x = a + b; }");
    const auto ncs = edges_of(g, EdgeKind::NCS);
    // Leaves: ReturnType, 3x(ParameterType, Identifier), then x, a, b.
    CHECK(ncs.size() == 9);

    // Statement identifiers are separate nodes from parameter scaffolding.
    std::vector<const CodeNode*> stmt_idents;
    for (const auto& n : g.nodes)
        if (n.type == "Identifier" && n.span && n.span->first >= 12)
            stmt_idents.push_back(&n);
    REQUIRE(stmt_idents.size() == 3);
    std::sort(stmt_idents.begin(), stmt_idents.end(),
              [](const CodeNode* a, const CodeNode* b) {
                  return a->span->first < b->span->first;
              });
    CHECK(stmt_idents[0]->value == "x");
    CHECK(stmt_idents[1]->value == "a");
    CHECK(stmt_idents[2]->value == "b");
    CHECK(has_edge(g, stmt_idents[0]->id, stmt_idents[1]->id, EdgeKind::NCS));
    CHECK(has_edge(g, stmt_idents[1]->id, stmt_idents[2]->id, EdgeKind::NCS));

    // Single path: NCS in/out degree <= 1 everywhere.
    std::map<int, int> in_deg, out_deg;
    for (const auto& e : ncs) {
        CHECK(++out_deg[e.src] <= 1);
        CHECK(++in_deg[e.dst] <= 1);
    }
}

TEST_CASE("ncs: synthetic nodes never participate") {
    const auto g = lower("int f(){ return 0; }");
    const auto& entry = node_of_type(g, "CFGEntryNode");
    const auto& exit = node_of_type(g, "CFGExitNode");
    for (const auto& e : edges_of(g, EdgeKind::NCS)) {
        CHECK(e.src != entry.id);
        CHECK(e.src != exit.id);
        CHECK(e.dst != entry.id);
        CHECK(e.dst != exit.id);
    }
}

TEST_CASE("lower: minimal fixture node inventory") {
    const auto g = lower("int f(){return 0;}");
    CHECK(g.nodes.size() == 8);
    CHECK(count_type(g, "Function") == 1);
    CHECK(count_type(g, "ReturnType") == 1);
    CHECK(count_type(g, "ParameterList") == 1);
    CHECK(count_type(g, "CompoundStatement") == 1);
    CHECK(count_type(g, "ReturnStatement") == 1);
    CHECK(count_type(g, "PrimaryExpression") == 1);
    CHECK(count_type(g, "CFGEntryNode") == 1);
    CHECK(count_type(g, "CFGExitNode") == 1);
    CHECK(edges_of(g, EdgeKind::AST).size() == 5);
    CHECK(edges_of(g, EdgeKind::CFG).size() == 2);
    CHECK(edges_of(g, EdgeKind::DFG).empty());
    CHECK(edges_of(g, EdgeKind::NCS).size() == 2);
}

TEST_CASE("lower: statement and expression share a value") {
    // The statement node and its expression child carry the same source
    // text, with distinct node types, joined by an AST edge.
    const auto g = lower("void f(int s, int i){ s = i; }");
    const auto& stmt = node_of_type(g, "ExpressionStatement");
    const auto& expr = node_of_type(g, "AssignmentExpression");
    CHECK(stmt.value == "s = i");
    CHECK(expr.value == "s = i");
    CHECK(has_edge(g, stmt.id, expr.id, EdgeKind::AST));
}

TEST_CASE("lower: malformed source leaves no partial graph") {
    CHECK_THROWS_AS(lower("int f(){ int a = ; }"), ParseError);
    CHECK_THROWS_AS(lower(""), LexError);
}

TEST_CASE("lower: deterministic across calls") {
    const char* src =
        "int f(int n){ int s = 0; for (int i = 0; i < n; i++) s = s + i; "
        "return s; }";
    const auto a = lower(src);
    const auto b = lower(src);
    REQUIRE(a.nodes.size() == b.nodes.size());
    REQUIRE(a.edges.size() == b.edges.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) CHECK(a.nodes[i] == b.nodes[i]);
    for (std::size_t i = 0; i < a.edges.size(); ++i) CHECK(a.edges[i] == b.edges[i]);
}

namespace {

void check_invariants(const CodeGraph& g) {
    for (const auto& n : g.nodes) REQUIRE(is_known_node_type(n.type));

    // AST edges form a spanning tree over non-synthetic nodes.
    long non_synth = 0;
    for (const auto& n : g.nodes)
        if (n.type != "CFGEntryNode" && n.type != "CFGExitNode") ++non_synth;
    const auto ast = edges_of(g, EdgeKind::AST);
    CHECK(static_cast<long>(ast.size()) == non_synth - 1);
    std::map<int, int> ast_in;
    for (const auto& e : ast) ++ast_in[e.dst];
    for (const auto& [id, deg] : ast_in) CHECK(deg == 1);

    const auto& entry = node_of_type(g, "CFGEntryNode");
    const auto& exit = node_of_type(g, "CFGExitNode");
    for (const auto& e : edges_of(g, EdgeKind::CFG)) {
        CHECK(e.dst != entry.id);
        CHECK(e.src != exit.id);
    }

    std::map<int, int> in_deg, out_deg;
    for (const auto& e : edges_of(g, EdgeKind::NCS)) {
        CHECK(++in_deg[e.dst] <= 1);
        CHECK(++out_deg[e.src] <= 1);
    }
}

}  // namespace

TEST_CASE("lower: invariants hold across a generated corpus") {
    trainer::ToySpec spec;
    spec.n = 60;
    spec.seed = 99;
    for (const auto& s : trainer::generate_toy_corpus(spec)) {
        const auto g = lower(s.source);
        check_invariants(g);
    }
}

TEST_CASE("lower: expression variety round trip") {
    const auto g = lower(
        "int f(int n, int m){"
        "  int a[4];"
        "  a[0] = -n;"
        "  a[1] = n & m | m ^ 2;"
        "  a[2] = n << 1;"
        "  a[3] = !n + ~m;"
        "  int* p = &a[0];"
        "  *p = g(n, a[1] % 3) / 2;"
        "  return a[0] * a[1] - a[2];"
        "}");
    CHECK(count_type(g, "ArrayIndexing") >= 6);
    CHECK(count_type(g, "UnaryOperationExpression") == 3);  // -n, !n, ~m
    CHECK(count_type(g, "UnaryExpression") == 2);           // &a[0], *p
    CHECK(count_type(g, "CallExpression") == 1);
    CHECK(count_type(g, "Callee") == 1);
    CHECK(count_type(g, "ArgumentList") == 1);
    CHECK(count_type(g, "Argument") == 2);
    CHECK(count_type(g, "BitAndExpression") == 1);
    CHECK(count_type(g, "InclusiveOrExpression") == 1);
    CHECK(count_type(g, "ExclusiveOrExpression") == 1);
    CHECK(count_type(g, "ShiftExpression") == 1);
    CHECK(count_type(g, "MultiplicativeExpression") == 3);  // %, /, *
    check_invariants(g);
}
