#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sfnet/genmodel.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/spatial.hpp"

namespace sfnet {

// Bernoulli branching random walk on a fixed point environment: every
// individual independently spawns, at each environment point other than its
// own location, a Bernoulli(C1_bar * g_bar) child. Individuals at the same
// location reproduce independently.
struct BrwRun {
    PointSet environment;
    std::vector<double> weights;
    std::uint32_t root = 0;
    // generations[g] = environment ids of the individuals of generation g
    // (with multiplicity); generations[0] = {root}
    std::vector<std::vector<std::uint32_t>> generations;
    std::size_t cap = 0;
    bool truncated = false;

    std::size_t generation_size(std::size_t g) const { return generations[g].size(); }
    double max_displacement(std::size_t g) const; // from the root location
};

// The child coin of a location pair reuses the pair's edge coin the first
// time the pair is examined; repeated trials draw fresh coins.
BrwRun simulate_berbrw(const PointSet& env, const std::vector<double>& weights,
                       std::uint32_t root, int max_gen, std::size_t cap, const GirgParams& params,
                       std::uint64_t seed);

// c_k = 2 exp(i (1+eps) ((1+eps)/(tau-2))^k), S_k = exp(i zeta ((1+eps)/(tau-2))^k)
struct GrowthEnvelope {
    double epsilon = 0.1;
    int i = 1;
    double zeta = 1.0;
    double tau = 2.5;
    std::vector<double> c_k;
    std::vector<double> s_k;
};

GrowthEnvelope growth_envelope(double epsilon, int i, double zeta, double tau, int k_max);

// smallest admissible zeta for the envelope statement
double zeta_floor(double epsilon, double tau, double alpha, int d);

struct EnvelopeCheckResult {
    bool admissible = false; // some i <= i_max passes
    int smallest_i = 0;      // valid when admissible
};

// Smallest i such that every simulated generation k satisfies
// Z_k <= c_k(eps, i) and max displacement <= S_k(eps, i).
EnvelopeCheckResult envelope_check(const BrwRun& run, double epsilon, double zeta, double tau,
                                   int i_max);

struct DominationReport {
    bool contained = false;   // boundary of B^G(v,j) inside generation j locations, all j <= depth
    int checked_depth = 0;
    bool brw_truncated = false;
    std::vector<std::size_t> boundary_sizes;
    std::vector<std::size_t> generation_sizes;
};

// Couples the exploration of the upper-model graph (edge probability
// C1_bar * g_bar, pair-keyed coins) to a BerBRW over the same environment:
// the first exploration of a location pair reuses the pair's edge coin,
// later trials are fresh. Under this coupling the graph-distance boundaries
// are contained in the BRW generations.
DominationReport domination_check(const PointSet& env, const std::vector<double>& weights,
                                  std::uint32_t root, int depth, const GirgParams& params,
                                  std::uint64_t seed, std::size_t cap = 200000);

// Same coupling with a forced upper-graph edge set (for exhaustive
// small-instance coin enumeration); fresh coins come from fresh_seed.
DominationReport domination_check_forced(const PointSet& env, const std::vector<double>& weights,
                                         std::uint32_t root, int depth, const GirgParams& params,
                                         const std::vector<Edge>& upper_edges,
                                         std::uint64_t fresh_seed, std::size_t cap = 200000);

} // namespace sfnet
