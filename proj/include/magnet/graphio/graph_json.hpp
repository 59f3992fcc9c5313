#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "magnet/code_graph.hpp"

namespace magnet::graphio {

inline constexpr std::string_view kGraphFormatVersion = "magnet-csg/1";
inline constexpr std::string_view kGraphFileExtension = ".csg.json";

/// Canonical serialization: stable key order, nodes sorted by id, edges
/// sorted by (etype, src, dst). Writing the same graph twice is
/// byte-identical.
std::string write_graph(const CodeGraph& g);

/// Parses and validates a graph document. Throws FormatError on schema
/// violations, unknown node types, unknown etype, or dangling endpoints.
CodeGraph read_graph(std::string_view text);

void write_graph_file(const CodeGraph& g, const std::filesystem::path& path);
CodeGraph read_graph_file(const std::filesystem::path& path);

}  // namespace magnet::graphio
