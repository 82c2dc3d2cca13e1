#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sfnet/dist.hpp"
#include "sfnet/graph.hpp"

namespace sfnet {

struct BoxingConstants {
    double epsilon = 0.1;
    double tau = 2.5;
    double delta = 0.0; // (tau-2) eps / (2 (tau-1))
    double C = 0.0;     // (1-eps)/(tau-2), > 1
    double D = 0.0;     // (1-delta)(1-eps/(tau-1))/(1-eps) - delta/2, >= 1
};

// The three constants from (epsilon, tau); requires 0 < eps < 3-tau so that
// C > 1, and validates D >= 1.
BoxingConstants boxing_constants(double epsilon, double tau);

struct Subbox {
    std::vector<double> lo;               // low corner of the grid cell, side = annulus R_k
    std::vector<std::uint32_t> members;   // vertices in cell ∩ annulus ∩ window
    std::optional<std::uint32_t> centre;  // max weight, ties to the smallest id
};

struct Annulus {
    int k = 0;
    double d_k = 0.0;       // outer box side
    double r_k = 0.0;       // subbox side
    double outer_half = 0.0;
    double hole_half = 0.0; // inner box side / 2 (0 for k = 0)
    std::vector<double> centre_point; // of the outer box
    std::vector<Subbox> subboxes;     // kept cells: >= half their volume inside the annulus
    std::vector<std::uint32_t> vertices; // all graph vertices inside the annulus
    std::size_t empty_subboxes = 0;

    std::size_t b_k() const { return subboxes.size(); }
    std::vector<std::uint32_t> centres() const;
};

struct BoxingSystem {
    std::vector<double> center;
    double mu = 1.0;
    int d = 1;
    BoxingConstants constants;
    int k_max = 0;
    std::vector<Annulus> annuli; // k = 0..k_max
    std::size_t graph_vertices = 0;
};

// Annuli in the infinity norm with D_k = mu^(D C^k / d), R_k = mu^(C^k / d),
// tiled by grid cells of side R_k anchored at the outer box corner; a cell
// becomes a subbox when at least half its volume lies in annulus ∩ window.
// k_max = max{ k : D_k^d <= vertex count }; throws when k_max < 1.
BoxingSystem build_boxing(const SpatialGraph& g, std::vector<double> center, double mu,
                          const BoxingConstants& constants);

// Subbox counts b_k of the unclipped tiling (pure geometry, no window);
// this is the quantity bounded by the annulus/subbox volume ratio.
std::vector<std::size_t> boxing_subbox_counts(int d, double mu, const BoxingConstants& constants,
                                              int k_hi);

struct AnnulusEventReport {
    int k = 0;
    bool f1 = false; // all centre weights within the mu^(C^k (1 +- delta)/(tau-1)) band
    bool f2 = false; // every centre sees enough centres in annuli k and k+1
    double weight_lo = 0.0, weight_hi = 0.0;   // required band
    double min_centre_weight = 0.0, max_centre_weight = 0.0;
    double required_n = 0.0;                   // exp(C^k (D-1) log(mu) / 2) / 2
    std::size_t min_n_same = 0, min_n_next = 0;
    std::size_t empty_subboxes = 0;
    bool has_next = true; // false on the last annulus, where N_{k+1} is undefined
};

std::vector<AnnulusEventReport> verify_events(const SpatialGraph& g, const BoxingSystem& sys,
                                              double delta);

struct GreedyPathResult {
    std::vector<std::uint32_t> path;
    double total_length = 0.0;
    bool truncated = false;
    int reached_k = -1;
};

// From the max-weight vertex of annulus 0, repeatedly follow the
// minimum-length edge into a centre of the next annulus.
GreedyPathResult greedy_centre_path(const SpatialGraph& g, const BoxingSystem& sys);

struct BridgeResult {
    bool found = false;
    std::vector<std::uint32_t> path;
    double total_length = 0.0;
    int k_star = 0;
    int r = 0; // rebase index of the smaller system
};

// Merge two boxing systems (sysA.mu <= sysB.mu): rebase A's annuli >= r to
// base mu_B, grow both to the enclosing box of index k_star + 1, and join
// the two greedy centre paths by a bridge of at most 2 edges.
BridgeResult bridge_systems(const SpatialGraph& g, const BoxingSystem& sysA,
                            const BoxingSystem& sysB);

// 3 sum_k F_L^{-1}(exp(-c C^(gamma_tilde k) ((1-delta) log(K)/(tau-1))^gamma_tilde)),
// the deterministic bound on a greedy boxing path in the percolated graph;
// +infinity when the series does not converge.
double epsilon_k_bound(const EdgeLengthDistribution& dist, double K,
                       const BoxingConstants& constants, double gamma_tilde, double c);

} // namespace sfnet
