#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sfnet/rng.hpp"

namespace sfnet {

// Nonnegative edge-length law L with CDF, generalized inverse
// F^{-1}(q) = inf{t : F(t) >= q}, and an inversion sampler.
// Immutable after construction; safe for shared concurrent reads.
class EdgeLengthDistribution {
public:
    enum class Kind { deterministic, exponential, uniform, shifted, table };

    static EdgeLengthDistribution deterministic(double value);
    static EdgeLengthDistribution exponential(double rate);
    static EdgeLengthDistribution uniform(double a, double b);
    static EdgeLengthDistribution shifted(EdgeLengthDistribution base, double offset);
    // Points (q_i, v_i), strictly increasing in q, v nonnegative nondecreasing.
    // The quantile function is the right-continuous step through the points.
    static EdgeLengthDistribution quantile_table(std::vector<std::pair<double, double>> points,
                                                 std::string origin = "");

    // Grammar: "det:v", "exp:rate", "unif:a:b", "shift:offset:<inner>", "table:<path>".
    static EdgeLengthDistribution parse(const std::string& text);
    std::string spec() const;

    Kind kind() const { return kind_; }

    double cdf(double t) const;

    // Generalized inverse for q in (0,1); throws std::domain_error outside.
    double quantile(double q) const;

    // Extension to q = 1: the essential supremum (may be +infinity).
    double quantile_sup() const;

    // F^{-1}(exp(log_q)) evaluated without forming exp(log_q) when it would
    // underflow; log_q <= 0. Terms whose true value underflows come out as 0.
    double quantile_log(double log_q) const;

    double sample(RngStream& rng) const;

    bool has_atom_at_zero() const;

    bool operator==(const EdgeLengthDistribution& other) const { return spec() == other.spec(); }

private:
    EdgeLengthDistribution() = default;

    Kind kind_ = Kind::deterministic;
    double a_ = 0.0, b_ = 0.0; // value / rate / (a,b) / offset
    std::shared_ptr<const EdgeLengthDistribution> base_;
    std::vector<std::pair<double, double>> points_;
    std::string origin_;
};

// Power-law vertex-weight law with support [1, inf).
// constant slowly-varying part: P(W > x) = x^{-(tau-1)} exactly;
// hrg_induced: the n-dependent law of exp((R_n - r)/2) with r sampled from
// the hyperbolic radial density, which has tail exponent 2*alpha_h.
struct VertexWeightModel {
    enum class Ell { constant_one, hrg_induced };

    double tau = 2.5;
    Ell ell = Ell::constant_one;
    double alpha_h = 0.0;
    double c_h = 0.0;
    std::uint64_t n = 0;

    static VertexWeightModel pareto(double tau);
    static VertexWeightModel hrg_induced(double alpha_h, double c_h, std::uint64_t n);

    // W as a function of one uniform U in (0,1]; nonincreasing in U, W(1) = 1.
    double from_unit(double u) const;
    double sample(RngStream& rng) const;
    // P(W > x) for x >= 1.
    double tail(double x) const;
};

enum class ExplosionVerdict { explosive, conservative, inconclusive };

struct CriterionReport {
    double partial_sum = 0.0;
    int terms_used = 0;
    // Upper bound on the unsummed tail of the criterion series, obtained by
    // adaptive quadrature of F^{-1}(exp(-e^y)) over [max(1,k_max), 40];
    // beyond y = 40 the quantile argument underflows to zero.
    double tail_bound_estimate = 0.0;
    ExplosionVerdict verdict = ExplosionVerdict::inconclusive;
    // tau outside (2,3) means the criterion is applied outside the regime
    // for which it characterises explosion.
    bool regime_warning = false;
};

const char* to_string(ExplosionVerdict v);

// Generalized inverse of the CDF at q, precondition q in (0,1).
double quantile(const EdgeLengthDistribution& dist, double q);

// Partial sum of F^{-1}(exp(-e^k)) for k = 1..k_max together with the
// verdict of the explosion criterion. tau, when given, only drives the
// regime warning flag.
CriterionReport explosion_sum(const EdgeLengthDistribution& dist, int k_max, double tau = 2.5);

// One weight draw.
double sample_weight(const VertexWeightModel& model, RngStream& rng);

} // namespace sfnet
