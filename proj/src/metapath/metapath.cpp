#include "magnet/metapath/metapath.hpp"

#include <numeric>
#include <unordered_map>

namespace magnet::metapath {

MetaPathType MetaPathType::from_index(int idx) {
    MetaPathType t;
    t.dst = static_cast<Granularity>(idx % kGranularityCount);
    idx /= kGranularityCount;
    t.edge = static_cast<EdgeKind>(idx % kEdgeKindCount);
    t.src = static_cast<Granularity>(idx / kEdgeKindCount);
    return t;
}

namespace {

// Edge display codes follow the distribution-plot convention:
// 0 AST, 1 DFG, 2 CFG, 3 NCS.
int display_code(EdgeKind k) {
    switch (k) {
        case EdgeKind::AST: return 0;
        case EdgeKind::DFG: return 1;
        case EdgeKind::CFG: return 2;
        case EdgeKind::NCS: return 3;
    }
    return -1;
}

}  // namespace

std::string MetaPathType::label() const {
    return std::string("(") + short_code(src) + "," +
           std::to_string(display_code(edge)) + "," + short_code(dst) + ")";
}

long long max_metapath_types(long long t_n, long long t_e) {
    return t_n * t_n * t_e;
}

std::uint64_t MetaPathStats::total() const {
    return std::accumulate(counts.begin(), counts.end(),
                           std::uint64_t{0});
}

void MetaPathStats::merge(const MetaPathStats& other) {
    for (int i = 0; i < kMetaPathTypeCount; ++i) counts[i] += other.counts[i];
}

MetaPathGraph annotate(CodeGraph g) {
    MetaPathGraph mg;
    mg.node_gran.reserve(g.nodes.size());
    std::unordered_map<int, Granularity> gran_of_id;
    for (const auto& n : g.nodes) {
        const Granularity gran = granularity_of(n.type);
        mg.node_gran.push_back(gran);
        gran_of_id.emplace(n.id, gran);
    }
    mg.edge_type.reserve(g.edges.size());
    for (const auto& e : g.edges)
        mg.edge_type.push_back(MetaPathType{gran_of_id.at(e.src), e.kind,
                                            gran_of_id.at(e.dst)});
    mg.graph = std::move(g);
    return mg;
}

MetaPathStats collect_stats(std::span<const MetaPathGraph> corpus) {
    MetaPathStats stats;
    for (const auto& g : corpus)
        for (const auto& t : g.edge_type) ++stats.counts[t.index()];
    return stats;
}

std::set<MetaPathType> select_active(const MetaPathStats& stats,
                                     std::uint64_t min_count) {
    std::set<MetaPathType> active;
    for (int i = 0; i < kMetaPathTypeCount; ++i)
        if (stats.counts[i] >= min_count)
            active.insert(MetaPathType::from_index(i));
    return active;
}

MetaPathGraph apply_filter(MetaPathGraph g,
                           const std::set<MetaPathType>& active) {
    std::vector<CodeEdge> edges;
    std::vector<MetaPathType> types;
    edges.reserve(g.graph.edges.size());
    types.reserve(g.edge_type.size());
    for (std::size_t i = 0; i < g.graph.edges.size(); ++i) {
        if (active.count(g.edge_type[i])) {
            edges.push_back(g.graph.edges[i]);
            types.push_back(g.edge_type[i]);
        }
    }
    g.graph.edges = std::move(edges);
    g.edge_type = std::move(types);
    g.active_types = active;
    return g;
}

}  // namespace magnet::metapath
