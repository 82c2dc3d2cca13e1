#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sfnet/dist.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/spatial.hpp"

namespace sfnet {

// Thrown when a generator exceeds its configured edge or vertex budget.
struct ResourceCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GChoice { canonical, lower_bound, upper_bound, threshold };

struct GirgParams {
    int d = 2;
    double tau = 2.5;     // headline experiments need (2,3); others warn
    double alpha = 1.95;  // > 1
    double a1_under = 1.0;
    double a1_over = 1.0;
    double a2 = 1.0;
    double gamma = 0.5;  // in (0,1)
    double c1 = 1.0;
    double C1 = 1.0;
    GChoice g_choice = GChoice::canonical;

    void validate() const;
    bool headline_regime() const { return tau > 2.0 && tau < 3.0; }
};

struct SfpParams {
    int d = 1;
    double alpha_tilde = 2.0; // > d
    double tau_tilde = 2.0;   // > 1
    double lambda = 1.0;      // > 0
    std::int64_t m = 100;     // window radius, vertices with ||v||_inf <= m

    double gamma_sfp() const { return alpha_tilde * (tau_tilde - 1.0) / d; }
    bool headline_regime() const { return gamma_sfp() > 1.0 && gamma_sfp() < 2.0; }
    void validate() const;
};

struct HrgParams {
    double alpha_h = 0.75;          // in (1/2, 1)
    double c_h = 1.0;
    std::optional<double> t_h = {}; // absent: threshold variant
    std::uint64_t n = 1000;

    double radius() const; // R_n = 2 log n + C_H, recomputed
    void validate() const;
};

struct GenOptions {
    enum class Mode { automatic, naive, layered };
    Mode mode = Mode::automatic;         // automatic: naive for n <= 3000
    std::size_t max_edges = 100'000'000; // resource cap
    double p_min = 1e-7;                 // floor below which pairs go to the long-range pass
    int ring_cap = 12;                   // cell-ring horizon of the near enumeration
};

// The bounding pair functions of the GIRG class, on blown-up coordinates.
double g_upper_bar(const GirgParams& p, double dist, double w1, double w2);
double g_lower_bar(const GirgParams& p, double dist, double w1, double w2);

// Edge probability between vertices at (unscaled) displacement delta with
// weights w1, w2 in the n-vertex model; delta is scaled by n^(1/d).
double connection_prob(const GirgParams& p, const std::vector<double>& delta, double w1, double w2,
                       std::uint64_t n);

// Same, already on blown-up coordinates (pairwise distance dist).
double connection_prob_blown(const GirgParams& p, double dist, double w1, double w2);

// Edge set over an explicit environment with the blown-coordinate pair
// function of `params`. The naive path keys every pair coin by
// (key_ids[u], key_ids[v]) (identity by default), which is what couples
// nested models; the layered path is exact in distribution and near-linear.
std::vector<Edge> sample_pair_edges(const PointSet& ps, const std::vector<double>& weights,
                                    const GirgParams& params, std::uint64_t seed,
                                    const GenOptions& opt = {},
                                    const std::vector<std::uint32_t>* key_ids = nullptr);

// GIRG on n vertices; positions uniform on the unit cube, blown up to the
// volume-n box. Exact in distribution in both the naive and the layered
// sampling path.
SpatialGraph generate_girg(const GirgParams& params, std::uint64_t n, const VertexWeightModel& wm,
                           std::uint64_t seed, const GenOptions& opt = {});

// Extended-model window: PPP(lambda) vertices on the volume-`volume` box,
// edges by the limit function h (the blown-coordinate kernel of `params`).
// Realized through the shared coupling, so windows with the same seed are
// nested across lambda. Requires lambda <= 1 + xi(3).
SpatialGraph generate_egirg_window(const GirgParams& params, const VertexWeightModel& wm,
                                   double lambda, std::uint64_t volume, std::uint64_t seed,
                                   const GenOptions& opt = {});

// The same window realized from an existing ensemble.
SpatialGraph realize_egirg(const CoupledEnsemble& ens, const GirgParams& params,
                           const VertexWeightModel& wm, double lambda, const GenOptions& opt = {});

// The exactly-n model coupled inside the ensemble; throws if the ensemble
// is flagged (caller may resample with a different seed).
SpatialGraph realize_bgirg(const CoupledEnsemble& ens, const GirgParams& params,
                           const VertexWeightModel& wm, const GenOptions& opt = {});

SpatialGraph generate_sfp(const SfpParams& params, const VertexWeightModel& wm, std::uint64_t seed,
                          const GenOptions& opt = {});

// Hyperbolic random graph; temperature rule when t_h is set, threshold
// d_H <= R_n otherwise. Positions are stored mapped to the d=1 torus
// [-1/2,1/2] with weights exp((R_n - r)/2); the raw (phi, r) coordinates
// are retained in the provenance.
SpatialGraph generate_hrg(const HrgParams& params, std::uint64_t seed, const GenOptions& opt = {});

double hyperbolic_distance(double phi_u, double r_u, double phi_v, double r_v);

// Rebuilds positions and weights from the hyperbolic provenance via
// x = (phi - pi) / 2 pi, W = exp((R_n - r)/2); edges unchanged.
SpatialGraph hrg_to_girg(const SpatialGraph& hrg);

// Limit connection functions of the HRG: the temperature limit when t_h is
// given, the threshold limit otherwise.
double hrg_limit_h(double delta, double w1, double w2, double c_h, std::optional<double> t_h);

struct LimitConvergenceReport {
    int samples = 0;
    // temperature: max relative error |p_n - h| / h over in-window samples;
    // threshold: max |delta - delta*| / (w1 w2) over disagreeing samples,
    // where delta* is the limit threshold radius.
    double max_error = 0.0;
    double reported_constant = 0.0; // max_error * n
    bool pass = false;
};

LimitConvergenceReport verify_limit_convergence(const HrgParams& params, int samples,
                                                std::uint64_t seed, double constant_cap = 100.0);

// beta(alpha) of the temperature admissibility window.
double admissibility_beta(double alpha);

} // namespace sfnet
