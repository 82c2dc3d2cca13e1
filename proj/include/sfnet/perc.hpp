#pragma once

#include "sfnet/dist.hpp"
#include "sfnet/graph.hpp"

namespace sfnet {

// Edge-length threshold percolation: keep edge e = (u,v) iff
// L_e <= thr(W_u, W_v) with thr = F_L^{-1}(exp(-c (log w_u)^g - c (log w_v)^g)).
struct PercolationRule {
    double c = 0.5;            // in (0, alpha)
    double gamma_tilde = 0.5;  // in (0,1)
    double alpha = 1.95;       // of the underlying graph; bounds c
    EdgeLengthDistribution dist = EdgeLengthDistribution::exponential(1.0);

    void validate() const;
};

// thr(w1, w2); +infinity encodes "keep always" (w = 1 endpoints with
// unbounded-support L), compared with <= semantics.
double percolation_threshold(const PercolationRule& rule, double w1, double w2);

// Subgraph keeping exactly the edges with L_e <= thr(W_u, W_v); vertex set
// unchanged. The rule's length law must match the graph's.
SpatialGraph percolate(const SpatialGraph& g, const PercolationRule& rule);

// m(w) = w exp(-(c/alpha) (log w)^gamma_tilde), the weight of a vertex in
// the percolated graph viewed as a member of the same graph class.
double mapped_weight(double w, double c, double alpha, double gamma_tilde);

} // namespace sfnet
