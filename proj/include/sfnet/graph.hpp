#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sfnet/spatial.hpp"

namespace sfnet {

struct Edge {
    std::uint32_t u, v; // u < v
    bool operator<(const Edge& o) const { return u != o.u ? u < o.u : v < o.v; }
    bool operator==(const Edge& o) const { return u == o.u && v == o.v; }
};

// Model/parameter/seed record carried by every generated graph.
struct Provenance {
    std::string model;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;
    std::string length_law; // set once lengths are assigned
    // hyperbolic coordinates, present for HRG graphs
    std::vector<double> hyp_phi;
    std::vector<double> hyp_r;
    double hyp_radius = 0.0; // R_n
};

// Immutable vertex positions + weights + adjacency with optional per-edge
// lengths. Neighbor lists are sorted; the edge list is canonical (u < v,
// sorted), so the edge set is a deterministic function of (params, seed).
class SpatialGraph {
public:
    SpatialGraph() = default;
    SpatialGraph(PointSet points, std::vector<double> weights, std::vector<Edge> edges,
                 Provenance prov);

    std::size_t vertex_count() const { return weights_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const PointSet& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::uint32_t v) const { return weights_[v]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Provenance& provenance() const { return prov_; }
    Provenance& provenance() { return prov_; }

    bool has_lengths() const { return lengths_assigned_; }
    const std::vector<double>& edge_lengths() const { return edge_lengths_; }
    double edge_length(std::size_t edge_index) const { return edge_lengths_[edge_index]; }

    // neighbors of v as (neighbor id, edge index) pairs, sorted by id
    struct Arc {
        std::uint32_t to;
        std::uint32_t edge;
    };
    const Arc* arcs_begin(std::uint32_t v) const { return arcs_.data() + offsets_[v]; }
    const Arc* arcs_end(std::uint32_t v) const { return arcs_.data() + offsets_[v + 1]; }
    std::size_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }

    bool has_edge(std::uint32_t u, std::uint32_t v) const;
    // index into edges() / edge_lengths(), or nothing when absent
    std::optional<std::uint32_t> edge_index(std::uint32_t u, std::uint32_t v) const;

    void set_edge_lengths(std::vector<double> lengths, const std::string& law);

    // Same vertices, subset of edges (by edge index); lengths carried over.
    SpatialGraph edge_subgraph(const std::vector<std::uint32_t>& keep_edges,
                               Provenance prov) const;

private:
    PointSet points_;
    std::vector<double> weights_;
    std::vector<Edge> edges_;
    std::vector<double> edge_lengths_;
    bool lengths_assigned_ = false;
    std::vector<std::size_t> offsets_;
    std::vector<Arc> arcs_;
    Provenance prov_;

    void build_adjacency();
};

struct ComponentLabeling {
    // label[v] = smallest vertex id in v's component
    std::vector<std::uint32_t> label;
    std::uint32_t giant_label = 0;
    std::size_t giant_size = 0;
};

// Disjoint-set labeling; the largest component, ties broken by the
// smallest contained vertex id.
ComponentLabeling giant_component(const SpatialGraph& g);

// "SGX v1" text format; round-trips losslessly.
void write_sgx(std::ostream& out, const SpatialGraph& g);
SpatialGraph read_sgx(std::istream& in);

} // namespace sfnet
