#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "magnet/mhagnn/model.hpp"

namespace magnet::mhagnn {

GraphIndex build_graph_index(const metapath::MetaPathGraph& g) {
    const auto& nodes = g.graph.nodes;
    const long n = static_cast<long>(nodes.size());

    // Canonical order: spanned nodes by (first asc, last desc, type), which
    // puts parents ahead of their children at the same start token; nodes
    // without spans (synthetic entry/exit) follow, ordered by id.
    std::vector<long> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](long a, long b) {
        const CodeNode& na = nodes[static_cast<std::size_t>(a)];
        const CodeNode& nb = nodes[static_cast<std::size_t>(b)];
        if (na.span.has_value() != nb.span.has_value())
            return na.span.has_value();
        if (na.span) {
            if (na.span->first != nb.span->first)
                return na.span->first < nb.span->first;
            if (na.span->last != nb.span->last)
                return na.span->last > nb.span->last;
            if (na.type != nb.type) return na.type < nb.type;
        }
        return na.id < nb.id;
    });

    GraphIndex gi;
    gi.n_nodes = n;
    gi.node_ids.resize(static_cast<std::size_t>(n));
    gi.gran.resize(static_cast<std::size_t>(n));
    std::unordered_map<int, long> pos_of_id;
    for (long c = 0; c < n; ++c) {
        const long orig = order[static_cast<std::size_t>(c)];
        gi.node_ids[static_cast<std::size_t>(c)] =
            nodes[static_cast<std::size_t>(orig)].id;
        gi.gran[static_cast<std::size_t>(c)] =
            g.node_gran[static_cast<std::size_t>(orig)];
        pos_of_id[nodes[static_cast<std::size_t>(orig)].id] = c;
    }

    gi.gran_nodes.assign(kGranularityCount, {});
    for (long c = 0; c < n; ++c)
        gi.gran_nodes[static_cast<int>(gi.gran[static_cast<std::size_t>(c)])]
            .push_back(c);
    // gran_perm_inv[c] = row of node c inside the concatenated-by-granularity
    // matrix, so gather_rows(packed, gran_perm_inv) restores node order.
    gi.gran_perm_inv.resize(static_cast<std::size_t>(n));
    long row = 0;
    for (int gr = 0; gr < kGranularityCount; ++gr)
        for (long c : gi.gran_nodes[gr])
            gi.gran_perm_inv[static_cast<std::size_t>(c)] = row++;

    // Edges in canonical (dst, kind, src) order.
    struct E {
        long src, dst;
        EdgeKind kind;
    };
    std::vector<E> edges;
    edges.reserve(g.graph.edges.size());
    for (const auto& e : g.graph.edges)
        edges.push_back({pos_of_id.at(e.src), pos_of_id.at(e.dst), e.kind});
    std::sort(edges.begin(), edges.end(), [](const E& a, const E& b) {
        if (a.dst != b.dst) return a.dst < b.dst;
        if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
        return a.src < b.src;
    });

    gi.edges_of_kind.assign(kEdgeKindCount, {});
    gi.edges_of_dst_gran.assign(kGranularityCount, {});
    std::vector<bool> has_in(static_cast<std::size_t>(n), false);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        gi.edge_src.push_back(edges[i].src);
        gi.edge_dst.push_back(edges[i].dst);
        gi.edge_kind.push_back(edges[i].kind);
        gi.edges_of_kind[static_cast<int>(edges[i].kind)].push_back(
            static_cast<long>(i));
        gi.edges_of_dst_gran[static_cast<int>(
                                 gi.gran[static_cast<std::size_t>(
                                     edges[i].dst)])]
            .push_back(static_cast<long>(i));
        has_in[static_cast<std::size_t>(edges[i].dst)] = true;
    }

    for (long c = 0; c < n; ++c)
        (has_in[static_cast<std::size_t>(c)] ? gi.nodes_with_in
                                             : gi.nodes_without_in)
            .push_back(c);
    gi.update_perm_inv.resize(static_cast<std::size_t>(n));
    row = 0;
    for (long c : gi.nodes_with_in)
        gi.update_perm_inv[static_cast<std::size_t>(c)] = row++;
    for (long c : gi.nodes_without_in)
        gi.update_perm_inv[static_cast<std::size_t>(c)] = row++;

    return gi;
}

}  // namespace magnet::mhagnn
