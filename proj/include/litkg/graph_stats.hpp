#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "litkg/graph.hpp"

namespace litkg {

/// Histogram of undirected entity degree, counted over triplets whose
/// relation is not excluded. Isolated entities appear at degree 0.
inline std::map<long, long> degree_distribution(const PropertyGraph& graph,
                                                const std::set<Relation>& excluded = {}) {
    std::vector<long> degree(graph.entity_count(), 0);
    for (const auto& t : graph.triplets()) {
        if (excluded.count(t.relation)) continue;
        ++degree[static_cast<size_t>(t.head)];
        ++degree[static_cast<size_t>(t.tail)];
    }
    std::map<long, long> hist;
    for (long d : degree) ++hist[d];
    return hist;
}

namespace detail {

/// Undirected adjacency (CSR) over all relations.
struct UndirectedView {
    std::vector<std::int64_t> offsets;
    std::vector<EntityId> neighbors;

    explicit UndirectedView(const PropertyGraph& graph) {
        const size_t n = graph.entity_count();
        offsets.assign(n + 1, 0);
        for (const auto& t : graph.triplets()) {
            ++offsets[static_cast<size_t>(t.head) + 1];
            ++offsets[static_cast<size_t>(t.tail) + 1];
        }
        for (size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
        neighbors.resize(static_cast<size_t>(offsets[n]));
        std::vector<std::int64_t> cur = offsets;
        for (const auto& t : graph.triplets()) {
            neighbors[static_cast<size_t>(cur[static_cast<size_t>(t.head)]++)] = t.tail;
            neighbors[static_cast<size_t>(cur[static_cast<size_t>(t.tail)]++)] = t.head;
        }
    }

    std::span<const EntityId> operator[](EntityId v) const {
        auto i = static_cast<size_t>(v);
        return {neighbors.data() + offsets[i],
                static_cast<size_t>(offsets[i + 1] - offsets[i])};
    }
};

} // namespace detail

struct ComponentLabeling {
    std::vector<EntityId> labels; // component index per entity, 0-based
    long count = 0;
    std::vector<long> sizes;      // indexed by component label
    long largest = 0;             // label of the largest component (ties: lowest label)
};

/// Connected components of the undirected view over all relations.
/// Labels are assigned in order of the lowest entity id in each component.
inline ComponentLabeling connected_components(const PropertyGraph& graph) {
    const size_t n = graph.entity_count();
    detail::UndirectedView adj(graph);
    ComponentLabeling out;
    out.labels.assign(n, -1);
    std::vector<EntityId> queue;
    for (size_t start = 0; start < n; ++start) {
        if (out.labels[start] != -1) continue;
        EntityId label = static_cast<EntityId>(out.count++);
        long size = 0;
        queue.clear();
        queue.push_back(static_cast<EntityId>(start));
        out.labels[start] = label;
        while (!queue.empty()) {
            EntityId v = queue.back();
            queue.pop_back();
            ++size;
            for (EntityId w : adj[v]) {
                if (out.labels[static_cast<size_t>(w)] == -1) {
                    out.labels[static_cast<size_t>(w)] = label;
                    queue.push_back(w);
                }
            }
        }
        out.sizes.push_back(size);
    }
    for (size_t i = 0; i < out.sizes.size(); ++i)
        if (out.sizes[i] > out.sizes[static_cast<size_t>(out.largest)])
            out.largest = static_cast<long>(i);
    return out;
}

namespace detail {

inline long bfs_eccentricity(const UndirectedView& adj, EntityId source,
                             std::vector<long>& dist, EntityId* farthest = nullptr) {
    std::fill(dist.begin(), dist.end(), -1L);
    std::queue<EntityId> q;
    dist[static_cast<size_t>(source)] = 0;
    q.push(source);
    long ecc = 0;
    EntityId far = source;
    while (!q.empty()) {
        EntityId v = q.front();
        q.pop();
        long dv = dist[static_cast<size_t>(v)];
        if (dv > ecc || (dv == ecc && v < far)) {
            ecc = dv;
            far = v;
        }
        for (EntityId w : adj[v]) {
            if (dist[static_cast<size_t>(w)] == -1) {
                dist[static_cast<size_t>(w)] = dv + 1;
                q.push(w);
            }
        }
    }
    if (farthest) *farthest = far;
    return ecc;
}

} // namespace detail

/// Exact diameter (max eccentricity) of the largest connected component on
/// the undirected unweighted view, by BFS from every node of that
/// component. Components larger than `exact_node_limit` switch to the
/// double-sweep lower bound (two BFS passes); 0 for a singleton.
inline long largest_cc_diameter(const PropertyGraph& graph, size_t exact_node_limit = 200000) {
    if (graph.entity_count() == 0) throw InputError("largest_cc_diameter: empty graph");
    auto cc = connected_components(graph);
    detail::UndirectedView adj(graph);
    std::vector<EntityId> members;
    for (size_t i = 0; i < cc.labels.size(); ++i)
        if (cc.labels[i] == cc.largest) members.push_back(static_cast<EntityId>(i));
    if (members.size() <= 1) return 0;

    std::vector<long> dist(graph.entity_count());
    if (members.size() <= exact_node_limit) {
        long diameter = 0;
        for (EntityId v : members)
            diameter = std::max(diameter, detail::bfs_eccentricity(adj, v, dist));
        return diameter;
    }
    // double-sweep lower bound for very large components
    EntityId far = members.front();
    detail::bfs_eccentricity(adj, members.front(), dist, &far);
    return detail::bfs_eccentricity(adj, far, dist);
}

struct GraphStats {
    std::map<std::string, long> entity_counts;   // by kind name
    std::map<std::string, long> relation_counts; // by relation name
    std::map<std::string, double> mean_out_degree; // relation count / head-kind entities
    long component_count = 0;
    long largest_cc_size = 0;
    long largest_cc_diameter = 0;
};

/// Summary statistics. Mean out-degrees are computed over all entities of
/// the relation's head kind, zeros included.
inline GraphStats compute_stats(const PropertyGraph& graph,
                                size_t diameter_exact_node_limit = 200000) {
    GraphStats s;
    for (EntityKind k : kAllEntityKinds)
        s.entity_counts[kind_name(k)] = static_cast<long>(graph.count_of(k));
    for (Relation r : kAllRelations) {
        long count = static_cast<long>(graph.relation_count(r));
        s.relation_counts[relation_name(r)] = count;
        long heads = static_cast<long>(graph.count_of(head_kind(r)));
        s.mean_out_degree[relation_name(r)] =
            heads == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(heads);
    }
    if (graph.entity_count() > 0) {
        auto cc = connected_components(graph);
        s.component_count = cc.count;
        s.largest_cc_size = cc.sizes[static_cast<size_t>(cc.largest)];
        s.largest_cc_diameter = largest_cc_diameter(graph, diameter_exact_node_limit);
    }
    return s;
}

} // namespace litkg
