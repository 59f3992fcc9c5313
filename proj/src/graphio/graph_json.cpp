#include "magnet/graphio/graph_json.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <json.hpp>

#include "magnet/errors.hpp"
#include "magnet/node_types.hpp"

namespace magnet::graphio {

using nlohmann::json;
using nlohmann::ordered_json;

std::string write_graph(const CodeGraph& g) {
    ordered_json doc;
    doc["version"] = kGraphFormatVersion;
    doc["function"] = g.function_name;

    std::vector<const CodeNode*> nodes;
    nodes.reserve(g.nodes.size());
    for (const auto& n : g.nodes) nodes.push_back(&n);
    std::sort(nodes.begin(), nodes.end(),
              [](const CodeNode* a, const CodeNode* b) { return a->id < b->id; });

    doc["nodes"] = ordered_json::array();
    for (const CodeNode* n : nodes) {
        ordered_json jn;
        jn["id"] = n->id;
        jn["type"] = n->type;
        jn["value"] = n->value;
        if (n->span) jn["span"] = {n->span->first, n->span->last};
        doc["nodes"].push_back(std::move(jn));
    }

    std::vector<CodeEdge> edges = g.edges;
    std::sort(edges.begin(), edges.end(),
              [](const CodeEdge& a, const CodeEdge& b) {
                  return std::tuple(static_cast<int>(a.kind), a.src, a.dst) <
                         std::tuple(static_cast<int>(b.kind), b.src, b.dst);
              });
    doc["edges"] = ordered_json::array();
    for (const auto& e : edges) {
        ordered_json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["etype"] = to_string(e.kind);
        doc["edges"].push_back(std::move(je));
    }
    return doc.dump(2) + "\n";
}

CodeGraph read_graph(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw FormatError(std::string("graph document is not valid JSON: ") +
                          err.what());
    }
    if (!doc.is_object()) throw FormatError("graph document must be an object");
    if (!doc.contains("version") || !doc["version"].is_string())
        throw FormatError("graph document missing version");
    if (doc["version"].get<std::string>() != kGraphFormatVersion)
        throw FormatError("unsupported graph format version '" +
                          doc["version"].get<std::string>() + "'");
    if (!doc.contains("function") || !doc["function"].is_string())
        throw FormatError("graph document missing function name");
    if (!doc.contains("nodes") || !doc["nodes"].is_array() ||
        !doc.contains("edges") || !doc["edges"].is_array())
        throw FormatError("graph document missing nodes/edges arrays");

    CodeGraph g;
    g.function_name = doc["function"].get<std::string>();
    std::set<int> ids;
    for (const auto& jn : doc["nodes"]) {
        if (!jn.is_object() || !jn.contains("id") ||
            !jn["id"].is_number_integer() || !jn.contains("type") ||
            !jn["type"].is_string())
            throw FormatError("malformed node entry");
        CodeNode n;
        n.id = jn["id"].get<int>();
        n.type = jn["type"].get<std::string>();
        if (!is_known_node_type(n.type))
            throw FormatError("unknown node type '" + n.type + "'");
        if (!ids.insert(n.id).second)
            throw FormatError("duplicate node id " + std::to_string(n.id));
        if (jn.contains("value")) {
            if (!jn["value"].is_string())
                throw FormatError("node value must be a string");
            n.value = jn["value"].get<std::string>();
        }
        if (jn.contains("span")) {
            const auto& js = jn["span"];
            if (!js.is_array() || js.size() != 2 ||
                !js[0].is_number_integer() || !js[1].is_number_integer())
                throw FormatError("node span must be [first, last]");
            TokenSpan span{js[0].get<int>(), js[1].get<int>()};
            if (span.first < 0 || span.last < span.first)
                throw FormatError("node span out of order");
            n.span = span;
        }
        g.nodes.push_back(std::move(n));
    }
    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const CodeNode& a, const CodeNode& b) { return a.id < b.id; });

    for (const auto& je : doc["edges"]) {
        if (!je.is_object() || !je.contains("src") ||
            !je["src"].is_number_integer() || !je.contains("dst") ||
            !je["dst"].is_number_integer() || !je.contains("etype") ||
            !je["etype"].is_string())
            throw FormatError("malformed edge entry");
        const std::string etype = je["etype"].get<std::string>();
        const auto kind = edge_kind_from(etype);
        if (!kind) throw FormatError("unknown etype '" + etype + "'");
        CodeEdge e{je["src"].get<int>(), je["dst"].get<int>(), *kind};
        if (!ids.count(e.src) || !ids.count(e.dst))
            throw FormatError("edge " + std::to_string(e.src) + "->" +
                              std::to_string(e.dst) +
                              " references a missing node");
        g.edges.push_back(e);
    }
    return g;
}

void write_graph_file(const CodeGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    out << write_graph(g);
}

CodeGraph read_graph_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open graph file '" + path.string() + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return read_graph(text);
}

}  // namespace magnet::graphio
