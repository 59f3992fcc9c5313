#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "magnet/code_graph.hpp"
#include "magnet/node_types.hpp"

namespace magnet::metapath {

using magnet::Granularity;
using magnet::granularity_of;

/// One heterogeneous relation: (source granularity, edge kind, target
/// granularity). Member of the 36-element product space.
struct MetaPathType {
    Granularity src = Granularity::Statement;
    EdgeKind edge = EdgeKind::AST;
    Granularity dst = Granularity::Statement;

    auto operator<=>(const MetaPathType&) const = default;

    /// Canonical index in [0, 36).
    int index() const {
        return (static_cast<int>(src) * kEdgeKindCount +
                static_cast<int>(edge)) *
                   kGranularityCount +
               static_cast<int>(dst);
    }
    static MetaPathType from_index(int idx);

    /// Display label "(St,0,Ex)" with edge codes 0..3 standing for
    /// AST, DFG, CFG, NCS respectively.
    std::string label() const;
};

inline constexpr int kMetaPathTypeCount =
    kGranularityCount * kGranularityCount * kEdgeKindCount;

/// Maximum number of meta-path types for t_n node granularities and t_e
/// edge types: t_n^2 * t_e.
long long max_metapath_types(long long t_n, long long t_e);

/// A CodeGraph re-annotated with per-node granularities and per-edge
/// meta-path triplets. Parallel edges between a node pair are preserved.
struct MetaPathGraph {
    CodeGraph graph;
    std::vector<Granularity> node_gran;   // parallel to graph.nodes
    std::vector<MetaPathType> edge_type;  // parallel to graph.edges
    std::set<MetaPathType> active_types;  // empty set means "unfiltered"
};

/// Per-type edge counts aggregated over a corpus. Merging partial counts is
/// associative and commutative.
struct MetaPathStats {
    std::array<std::uint64_t, kMetaPathTypeCount> counts{};

    std::uint64_t total() const;
    std::uint64_t count(const MetaPathType& t) const { return counts[t.index()]; }
    void merge(const MetaPathStats& other);
};

/// Annotates every node with its granularity and every edge with its
/// triplet. Topology is unchanged. Throws UnknownTypeError for nodes with
/// out-of-vocabulary types.
MetaPathGraph annotate(CodeGraph g);

MetaPathStats collect_stats(std::span<const MetaPathGraph> corpus);

/// Types observed at least `min_count` times. With min_count 0 this is the
/// full 36-type space.
std::set<MetaPathType> select_active(const MetaPathStats& stats,
                                     std::uint64_t min_count = 3);

/// Removes edges whose type is not active; nodes are untouched.
MetaPathGraph apply_filter(MetaPathGraph g,
                           const std::set<MetaPathType>& active);

}  // namespace magnet::metapath
