#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sfnet/fpp.hpp"
#include "sfnet/harness.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/stats.hpp"

using namespace sfnet;

namespace {

ExperimentConfig small_girg_config() {
    std::istringstream in(R"(
[experiment]
model = girg
n = 512,1024
pairs = 40
seed = 9
workers = 1

[girg]
d = 2
tau = 2.5
alpha = 1.95

[lengths]
law = exp:1
)");
    return ExperimentConfig::from_config(parse_config(in));
}

} // namespace

TEST_CASE("config parsing") {
    std::istringstream in(R"(
# comment
[experiment]
model = sfp
n = 10,20,40
pairs = 7
seed = 3

[sfp]
d = 1
alpha_tilde = 1.5
tau_tilde = 2.2
lambda = 0.8
)");
    const ExperimentConfig cfg = ExperimentConfig::from_config(parse_config(in));
    CHECK(cfg.model == "sfp");
    CHECK(cfg.n_grid == std::vector<std::uint64_t>{10, 20, 40});
    CHECK(cfg.pairs == 7);
    CHECK(cfg.sfp.alpha_tilde == doctest::Approx(1.5));
    CHECK(cfg.sfp.gamma_sfp() == doctest::Approx(1.8));
    CHECK(cfg.sfp.headline_regime());
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_girg_config();
    cfg.n_grid = {100, 100};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.n_grid = {100};
    cfg.pairs = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("distance experiment emits positive weighted distances within the giant") {
    const ExperimentConfig cfg = small_girg_config();
    const DistanceSampleSet set = run_distance_experiment(cfg);
    REQUIRE(set.samples.size() == 2);
    CHECK(set.rows.size() == 80);
    for (const DistanceRow& row : set.rows) {
        CHECK(row.u < row.v);
        CHECK(row.in_giant);
        CHECK(row.d_l_reachable);
        CHECK(row.d_l > 0.0);
        CHECK(row.d_g >= 1);
    }
}

TEST_CASE("identical csv bytes across worker counts") {
    ExperimentConfig cfg = small_girg_config();
    cfg.workers = 1;
    const DistanceSampleSet one = run_distance_experiment(cfg);
    cfg.workers = 8;
    const DistanceSampleSet eight = run_distance_experiment(cfg);
    std::ostringstream a, b;
    write_distance_csv(a, one.rows);
    write_distance_csv(b, eight.rows);
    CHECK(a.str() == b.str());
}

TEST_CASE("sfp experiment pairs the origin with the far lattice vertex") {
    std::istringstream in(R"(
[experiment]
model = sfp
n = 8,16
pairs = 10
seed = 5

[sfp]
d = 1
alpha_tilde = 1.5
tau_tilde = 2.2
lambda = 1

[lengths]
law = exp:1
)");
    const ExperimentConfig cfg = ExperimentConfig::from_config(parse_config(in));
    const DistanceSampleSet set = run_distance_experiment(cfg);
    for (const DistanceRow& row : set.rows) {
        const std::uint64_t m = row.n;
        CHECK(row.u == m);         // origin of the 1d window: index m
        CHECK(row.v == 2 * m);     // lattice point m * e
        CHECK(row.d_l_reachable);  // nearest-neighbour edges connect everything
    }
}

TEST_CASE("hill estimator on the exact pareto quantile grid") {
    std::vector<double> grid;
    const std::size_t n = 200000;
    for (std::size_t i = 1; i <= n; ++i)
        grid.push_back(std::pow(static_cast<double>(i) / (n + 1.0), -1.0 / 1.5));
    const auto hill = hill_estimator(grid, 2000);
    REQUIRE(hill.has_value());
    CHECK(std::abs(*hill - 1.5) < 0.01);

    // degenerate data is flagged
    const std::vector<double> flat(100, 3.0);
    CHECK_FALSE(hill_estimator(flat, 10).has_value());
    CHECK_THROWS_AS((void)hill_estimator(grid, 1), std::domain_error);

    // plateau: present for the pareto grid, absent for exponential spacings
    CHECK(hill_plateau(grid).has_value());
    std::vector<double> expgrid;
    for (std::size_t i = 1; i <= n; ++i)
        expgrid.push_back(-std::log(static_cast<double>(i) / (n + 1.0)));
    CHECK_FALSE(hill_plateau(expgrid).has_value());
}

TEST_CASE("ks distance") {
    const std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
    CHECK(ks_distance(a, a) == 0.0);
    const std::vector<double> b = {10.0, 11.0, 12.0};
    CHECK(ks_distance(a, b) == 1.0);

    // brute-force sup check on small random lists
    RngStream rng(3, StreamKind::generic, 0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x, y;
        for (int i = 0; i < 13; ++i) x.push_back(rng.next_unit());
        for (int i = 0; i < 9; ++i) y.push_back(rng.next_unit());
        double expect = 0.0;
        for (double t : x) {
            double fa = 0.0, fb = 0.0;
            for (double v : x) fa += v <= t ? 1.0 : 0.0;
            for (double v : y) fb += v <= t ? 1.0 : 0.0;
            expect = std::max(expect, std::abs(fa / x.size() - fb / y.size()));
        }
        for (double t : y) {
            double fa = 0.0, fb = 0.0;
            for (double v : x) fa += v <= t ? 1.0 : 0.0;
            for (double v : y) fb += v <= t ? 1.0 : 0.0;
            expect = std::max(expect, std::abs(fa / x.size() - fb / y.size()));
        }
        CHECK(ks_distance(x, y) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("ecdf is a step to one") {
    const EcdfTable t = ecdf({3.0, 1.0, 2.0, 2.0});
    CHECK(t.x == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(t.f == std::vector<double>{0.25, 0.75, 1.0});
}

TEST_CASE("proxy csv encodes missing boundaries as inf") {
    std::ostringstream out;
    write_proxy_csv(out, {0.0, 0.5}, {std::optional<double>(0.5), std::nullopt});
    CHECK(out.str() == "k,tau_k,x_k\n1,0,0.5\n2,0.5,inf\n");
}

TEST_CASE("sgx round-trip keeps hyperbolic provenance") {
    HrgParams p;
    p.alpha_h = 0.8;
    p.c_h = 0.5;
    p.n = 200;
    const SpatialGraph g = generate_hrg(p, 6);
    std::stringstream buffer;
    write_sgx(buffer, g);
    const SpatialGraph back = read_sgx(buffer);
    CHECK(back.edges() == g.edges());
    CHECK(back.provenance().hyp_phi == g.provenance().hyp_phi);
    CHECK(back.provenance().hyp_r == g.provenance().hyp_r);
    CHECK(back.provenance().hyp_radius == g.provenance().hyp_radius);
    // the mapping still works on the reread graph
    const SpatialGraph mapped = hrg_to_girg(back);
    CHECK(mapped.weights() == hrg_to_girg(g).weights());
}

TEST_CASE("sgx round-trip through the harness graph path") {
    const ExperimentConfig cfg = small_girg_config();
    const VertexWeightModel wm = VertexWeightModel::pareto(cfg.weight_tau);
    SpatialGraph g = generate_girg(cfg.girg, 300, wm, 4);
    g = assign_edge_lengths(g, cfg.lengths, 4);
    std::stringstream buffer;
    write_sgx(buffer, g);
    const SpatialGraph back = read_sgx(buffer);
    CHECK(back.vertex_count() == g.vertex_count());
    CHECK(back.edges() == g.edges());
    CHECK(back.edge_lengths() == g.edge_lengths());
    CHECK(back.weights() == g.weights());
    CHECK(back.points().coords == g.points().coords);
    CHECK(back.provenance().model == g.provenance().model);
    CHECK(back.provenance().length_law == g.provenance().length_law);
}
