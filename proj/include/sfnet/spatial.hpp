#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sfnet/rng.hpp"

namespace sfnet {

enum class Metric { euclidean_box, torus };

// Immutable set of points in an axis-aligned box [-side/2, side/2]^d,
// ids dense 0..N-1. Under Metric::torus opposite faces are identified.
struct PointSet {
    int dim = 1;
    double side = 1.0;
    Metric metric = Metric::euclidean_box;
    std::vector<double> coords; // row-major, dim per point

    std::size_t size() const { return coords.size() / static_cast<std::size_t>(dim); }
    const double* point(std::size_t id) const { return coords.data() + id * static_cast<std::size_t>(dim); }

    double distance2(std::size_t a, std::size_t b) const;
    double distance2_to(const double* p, std::size_t b) const;
    double distance(std::size_t a, std::size_t b) const;
};

double metric_delta(double diff, double side, Metric metric);

// "PTS v1" text format.
void write_points(std::ostream& out, const PointSet& ps);
PointSet read_points(std::istream& in);

// xi_n = sqrt(4 log n / n); n >= 3 so that the sequence is decreasing.
double xi(std::uint64_t n);

// n i.i.d. uniform points on [-1/2,1/2]^d, position of vertex i keyed by i.
PointSet sample_binomial_points(std::uint64_t n, int dim, std::uint64_t seed);

// Map every coordinate x to n^(1/d) x; requires the unit window.
PointSet blow_up(const PointSet& ps, std::uint64_t n);

// Shared realization of nested Poisson point processes on the volume-n box
// [-n^(1/d)/2, n^(1/d)/2]^d. The base process has intensity 1 + xi_3; each
// base point carries a retention uniform U_v, and
// retained(lambda) = { v : U_v <= lambda / (1 + xi_3) }.
struct CoupledEnsemble {
    PointSet base_points;
    std::vector<double> retention; // U_v per base point
    std::uint64_t n = 0;
    int dim = 1;
    std::uint64_t seed = 0;
    // set when the Poisson counts fail V_{1-xi_n} <= n <= V_{1+xi_n}; the
    // ensemble is still usable for the extended models but cannot realize
    // the exactly-n vertex set faithfully.
    bool straddle_failed = false;

    double base_intensity() const;
    std::vector<std::uint32_t> retained(double lambda) const;
    // The exactly-n vertex set: retained(1-xi_n) plus a uniform subset of
    // retained(1+xi_n) \ retained(1-xi_n); empty when straddle_failed.
    std::vector<std::uint32_t> bgirg_vertices() const;
};

CoupledEnsemble sample_coupled_ppp(std::uint64_t n, int dim, std::uint64_t seed);

// Uniform grid over the window of a PointSet for radius queries.
class CellIndex {
public:
    CellIndex(const PointSet& ps, double cell_side);

    double cell_side() const { return cell_; }

    // Exactly the ids at metric distance <= r from center.
    std::vector<std::uint32_t> neighbors_within(const PointSet& ps, const double* center,
                                                double r) const;

private:
    int dim_;
    double cell_;
    double lo_;
    std::int64_t cells_per_axis_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets_;

    std::uint64_t cell_hash(const std::int64_t* c) const;
};

std::vector<std::uint32_t> neighbors_within(const CellIndex& index, const PointSet& ps,
                                            const double* center, double r);

} // namespace sfnet
