#include "sfnet/fpp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace sfnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HeapItem {
    double dist;
    std::uint32_t vertex;
    bool operator>(const HeapItem& o) const { return dist > o.dist; }
};

using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>>;

void check_lengths(const SpatialGraph& g) {
    if (!g.has_lengths()) throw std::logic_error("weighted search requires assigned edge lengths");
}

} // namespace

SpatialGraph assign_edge_lengths(const SpatialGraph& g, const EdgeLengthDistribution& dist,
                                 std::uint64_t seed, bool overwrite,
                                 const std::vector<std::uint32_t>* key_ids) {
    if (g.has_lengths() && !overwrite)
        throw std::logic_error("assign_edge_lengths: graph already has lengths");
    std::vector<double> lengths(g.edge_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edges()[i];
        const std::uint32_t ku = key_ids ? (*key_ids)[e.u] : e.u;
        const std::uint32_t kv = key_ids ? (*key_ids)[e.v] : e.v;
        RngStream rng(seed, StreamKind::edge_length, pair_key(ku, kv));
        lengths[i] = dist.sample(rng);
    }
    SpatialGraph out = g;
    out.set_edge_lengths(std::move(lengths), dist.spec());
    return out;
}

std::vector<std::optional<double>> weighted_distances(const SpatialGraph& g, std::uint32_t source,
                                                      double cutoff) {
    check_lengths(g);
    std::vector<double> dist(g.vertex_count(), kInf);
    std::vector<bool> settled(g.vertex_count(), false);
    MinHeap heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (settled[v]) continue;
        settled[v] = true;
        for (const auto* arc = g.arcs_begin(v); arc != g.arcs_end(v); ++arc) {
            const double l = g.edge_length(arc->edge);
            if (l < 0.0) throw std::logic_error("negative edge length");
            const double nd = d + l;
            if (nd < dist[arc->to] && nd <= cutoff) {
                dist[arc->to] = nd;
                heap.push({nd, arc->to});
            }
        }
    }
    std::vector<std::optional<double>> out(g.vertex_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (settled[v]) out[v] = dist[v];
    return out;
}

namespace {

PathResult dijkstra_until(const SpatialGraph& g, std::uint32_t source,
                          const std::vector<bool>& is_target) {
    check_lengths(g);
    std::vector<double> dist(g.vertex_count(), kInf);
    std::vector<std::uint32_t> parent(g.vertex_count(), UINT32_MAX);
    std::vector<bool> settled(g.vertex_count(), false);
    MinHeap heap;
    dist[source] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (settled[v]) continue;
        settled[v] = true;
        if (is_target[v]) {
            PathResult res;
            res.reachable = true;
            res.distance = d;
            std::uint32_t cur = v;
            while (cur != UINT32_MAX) {
                res.path.push_back(cur);
                if (cur == source) break;
                cur = parent[cur];
            }
            std::reverse(res.path.begin(), res.path.end());
            return res;
        }
        for (const auto* arc = g.arcs_begin(v); arc != g.arcs_end(v); ++arc) {
            const double l = g.edge_length(arc->edge);
            if (l < 0.0) throw std::logic_error("negative edge length");
            const double nd = d + l;
            if (nd < dist[arc->to]) {
                dist[arc->to] = nd;
                parent[arc->to] = v;
                heap.push({nd, arc->to});
            }
        }
    }
    return {};
}

} // namespace

PathResult shortest_weighted(const SpatialGraph& g, std::uint32_t source, std::uint32_t target) {
    std::vector<bool> is_target(g.vertex_count(), false);
    is_target[target] = true;
    return dijkstra_until(g, source, is_target);
}

PathResult shortest_weighted_to_set(const SpatialGraph& g, std::uint32_t source,
                                    const std::vector<std::uint32_t>& targets) {
    std::vector<bool> is_target(g.vertex_count(), false);
    for (std::uint32_t t : targets) is_target[t] = true;
    if (targets.empty()) return {};
    return dijkstra_until(g, source, is_target);
}

std::vector<std::int64_t> hop_distances(const SpatialGraph& g, std::uint32_t source,
                                        std::int64_t cutoff) {
    std::vector<std::int64_t> dist(g.vertex_count(), -1);
    std::vector<std::uint32_t> frontier{source};
    dist[source] = 0;
    std::int64_t level = 0;
    while (!frontier.empty() && (cutoff < 0 || level < cutoff)) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t v : frontier) {
            for (const auto* arc = g.arcs_begin(v); arc != g.arcs_end(v); ++arc) {
                if (dist[arc->to] < 0) {
                    dist[arc->to] = level + 1;
                    next.push_back(arc->to);
                }
            }
        }
        frontier = std::move(next);
        ++level;
    }
    return dist;
}

GraphBall graph_ball(const SpatialGraph& g, std::uint32_t v, std::int64_t k) {
    if (k < 0) throw std::domain_error("graph_ball: k must be >= 0");
    const auto dist = hop_distances(g, v, k);
    GraphBall out;
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) {
        if (dist[u] >= 0 && dist[u] <= k) out.ball.push_back(u);
        if (dist[u] == k) out.boundary.push_back(u);
    }
    return out;
}

std::vector<std::uint32_t> weighted_ball(const SpatialGraph& g, std::uint32_t v, double t) {
    if (!(t >= 0.0)) throw std::domain_error("weighted_ball: t must be >= 0");
    const auto dist = weighted_distances(g, v, t);
    std::vector<std::uint32_t> out;
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u)
        if (dist[u] && *dist[u] <= t) out.push_back(u);
    return out;
}

std::vector<std::uint32_t> hop_weighted_ball(const SpatialGraph& g, std::uint32_t v, double t,
                                             std::int64_t k) {
    check_lengths(g);
    if (!(t >= 0.0) || k < 0) throw std::domain_error("hop_weighted_ball: need t >= 0 and k >= 0");
    // label-correcting over (vertex, hops): dist[v][h] = best length using <= h edges
    std::vector<double> best(g.vertex_count(), kInf);
    best[v] = 0.0;
    std::vector<std::uint32_t> inset{v};
    std::vector<double> frontier(g.vertex_count(), kInf);
    frontier[v] = 0.0;
    std::vector<std::uint32_t> active{v};
    for (std::int64_t hop = 0; hop < k; ++hop) {
        std::vector<double> next(g.vertex_count(), kInf);
        std::vector<std::uint32_t> next_active;
        for (std::uint32_t u : active) {
            const double du = frontier[u];
            for (const auto* arc = g.arcs_begin(u); arc != g.arcs_end(u); ++arc) {
                const double nd = du + g.edge_length(arc->edge);
                if (nd <= t && nd < next[arc->to]) {
                    if (next[arc->to] == kInf) next_active.push_back(arc->to);
                    next[arc->to] = nd;
                }
            }
        }
        for (std::uint32_t u : next_active) {
            if (next[u] < best[u]) {
                if (best[u] == kInf) inset.push_back(u);
                best[u] = next[u];
            }
        }
        frontier = std::move(next);
        active = std::move(next_active);
        if (active.empty()) break;
    }
    std::sort(inset.begin(), inset.end());
    return inset;
}

ExplosionProxy explosion_proxy(const SpatialGraph& g, std::uint32_t v, std::size_t K,
                               std::int64_t k_max) {
    check_lengths(g);
    if (K < 1 || k_max < 1) throw std::domain_error("explosion_proxy: K and k_max must be >= 1");
    ExplosionProxy out;

    // tau(v, k): settle order of the label-setting search
    {
        std::vector<double> dist(g.vertex_count(), kInf);
        std::vector<bool> settled(g.vertex_count(), false);
        MinHeap heap;
        dist[v] = 0.0;
        heap.push({0.0, v});
        while (!heap.empty() && out.tau_values.size() < K) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (settled[u]) continue;
            settled[u] = true;
            out.tau_values.push_back(d);
            for (const auto* arc = g.arcs_begin(u); arc != g.arcs_end(u); ++arc) {
                const double nd = d + g.edge_length(arc->edge);
                if (nd < dist[arc->to]) {
                    dist[arc->to] = nd;
                    heap.push({nd, arc->to});
                }
            }
        }
    }

    // X_k = d_L(v, boundary of B^G(v,k))
    const auto hops = hop_distances(g, v, -1);
    const auto wdist = weighted_distances(g, v);
    out.x_values.resize(static_cast<std::size_t>(k_max));
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) {
        if (hops[u] >= 1 && hops[u] <= k_max && wdist[u]) {
            auto& slot = out.x_values[static_cast<std::size_t>(hops[u] - 1)];
            if (!slot || *wdist[u] < *slot) slot = *wdist[u];
        }
    }
    return out;
}

WeightTargetResult t_k_proxy(const SpatialGraph& g, std::uint32_t v, double k_weight) {
    check_lengths(g);
    WeightTargetResult out;
    std::vector<bool> is_target(g.vertex_count(), false);
    bool any = false;
    for (std::uint32_t u = 0; u < g.vertex_count(); ++u) {
        if (g.weight(u) >= k_weight) {
            is_target[u] = true;
            any = true;
        }
    }
    if (!any) return out;
    PathResult res = dijkstra_until(g, v, is_target);
    if (!res.reachable) return out;
    out.reachable = true;
    out.distance = res.distance;
    out.witness = res.path.back();
    return out;
}

} // namespace sfnet
