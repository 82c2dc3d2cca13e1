#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "sfnet/dist.hpp"
#include "sfnet/graph.hpp"

namespace sfnet {

// i.i.d. edge lengths, keyed by the unordered vertex pair so that coupled
// graphs sharing a seed agree on the lengths of shared edges. Vertex ids
// used for keying can be remapped via key_ids (base ids of an ensemble).
SpatialGraph assign_edge_lengths(const SpatialGraph& g, const EdgeLengthDistribution& dist,
                                 std::uint64_t seed, bool overwrite = false,
                                 const std::vector<std::uint32_t>* key_ids = nullptr);

// Search result; unreachable is an explicit state, never a sentinel value.
struct PathResult {
    bool reachable = false;
    double distance = std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> path; // source..target when reachable
};

// Exact weighted distance via label-setting search. Target may be a single
// vertex or any member of a target set.
PathResult shortest_weighted(const SpatialGraph& g, std::uint32_t source, std::uint32_t target);
PathResult shortest_weighted_to_set(const SpatialGraph& g, std::uint32_t source,
                                    const std::vector<std::uint32_t>& targets);

// Single-source weighted distances; unreachable entries are unset.
std::vector<std::optional<double>> weighted_distances(const SpatialGraph& g, std::uint32_t source,
                                                      double cutoff = std::numeric_limits<double>::infinity());

// Hop distances by breadth-first search; -1 when unreachable.
std::vector<std::int64_t> hop_distances(const SpatialGraph& g, std::uint32_t source,
                                        std::int64_t cutoff = -1);

struct GraphBall {
    std::vector<std::uint32_t> ball;     // d_G <= k, ascending ids
    std::vector<std::uint32_t> boundary; // d_G == k exactly
};

GraphBall graph_ball(const SpatialGraph& g, std::uint32_t v, std::int64_t k);

// Vertices with d_L <= t (the zero-length cluster when t = 0).
std::vector<std::uint32_t> weighted_ball(const SpatialGraph& g, std::uint32_t v, double t);

// Hop-constrained weighted ball B^{L,G}(v, t, k): vertices whose weighted
// distance using at most k edges is <= t.
std::vector<std::uint32_t> hop_weighted_ball(const SpatialGraph& g, std::uint32_t v, double t,
                                             std::int64_t k);

struct ExplosionProxy {
    // tau_values[k-1] = d_L to the k-th closest vertex, k = 1..K (tau(v,1)=0)
    std::vector<double> tau_values;
    // x_values[k-1] = d_L(v, boundary of B^G(v,k)), k = 1..k_max; unset when
    // the boundary is empty
    std::vector<std::optional<double>> x_values;
};

ExplosionProxy explosion_proxy(const SpatialGraph& g, std::uint32_t v, std::size_t K,
                               std::int64_t k_max);

struct WeightTargetResult {
    bool reachable = false;
    double distance = std::numeric_limits<double>::infinity();
    std::optional<std::uint32_t> witness;
};

// Minimal weighted distance from v to any vertex of weight >= k_weight.
WeightTargetResult t_k_proxy(const SpatialGraph& g, std::uint32_t v, double k_weight);

} // namespace sfnet
