#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "sfnet/fpp.hpp"
#include "sfnet/genmodel.hpp"

using namespace sfnet;

namespace {

SpatialGraph line_graph(const std::vector<double>& lengths) {
    PointSet ps;
    ps.dim = 1;
    ps.side = 100.0;
    std::vector<Edge> edges;
    std::vector<double> weights;
    for (std::size_t i = 0; i <= lengths.size(); ++i) {
        ps.coords.push_back(static_cast<double>(i));
        weights.push_back(1.0);
        if (i > 0) edges.push_back({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(i)});
    }
    SpatialGraph g(ps, weights, edges, {});
    g.set_edge_lengths(lengths, "explicit");
    return g;
}

SpatialGraph random_weighted_graph(std::uint64_t seed, std::uint64_t n, double edge_prob) {
    PointSet ps;
    ps.dim = 1;
    ps.side = 1000.0;
    std::vector<double> weights;
    RngStream rng(seed, StreamKind::generic, 3);
    for (std::uint64_t i = 0; i < n; ++i) {
        ps.coords.push_back(rng.next_unit() * 900.0 - 450.0);
        weights.push_back(1.0 + 5.0 * rng.next_unit());
    }
    std::vector<Edge> edges;
    std::vector<double> lengths;
    for (std::uint32_t u = 0; u < n; ++u)
        for (std::uint32_t v = u + 1; v < n; ++v)
            if (rng.next_unit() < edge_prob) {
                edges.push_back({u, v});
                lengths.push_back(rng.next_unit() * 3.0);
            }
    SpatialGraph g(ps, weights, edges, {});
    g.set_edge_lengths(lengths, "explicit");
    return g;
}

// exhaustive min over all simple paths (pruned)
double exhaustive_best(const SpatialGraph& g, std::uint32_t u, std::uint32_t v,
                       std::vector<bool>& used, double acc, double best) {
    if (acc >= best) return best;
    if (u == v) return acc;
    used[u] = true;
    for (const auto* arc = g.arcs_begin(u); arc != g.arcs_end(u); ++arc)
        if (!used[arc->to])
            best = exhaustive_best(g, arc->to, v, used, acc + g.edge_length(arc->edge), best);
    used[u] = false;
    return best;
}

// Bellman-Ford style relaxation oracle
std::vector<double> relaxation_oracle(const SpatialGraph& g, std::uint32_t source) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.vertex_count(), inf);
    dist[source] = 0.0;
    for (std::size_t round = 0; round + 1 < g.vertex_count(); ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < g.edge_count(); ++i) {
            const Edge& e = g.edges()[i];
            const double l = g.edge_length(i);
            if (dist[e.u] + l < dist[e.v]) dist[e.v] = dist[e.u] + l, changed = true;
            if (dist[e.v] + l < dist[e.u]) dist[e.u] = dist[e.v] + l, changed = true;
        }
        if (!changed) break;
    }
    return dist;
}

} // namespace

TEST_CASE("deterministic lengths are all one and keyed lengths agree on shared pairs") {
    const GirgParams params;
    const VertexWeightModel wm = VertexWeightModel::pareto(2.5);
    const SpatialGraph g = generate_girg(params, 300, wm, 5);
    const SpatialGraph det = assign_edge_lengths(g, EdgeLengthDistribution::deterministic(1.0), 9);
    for (std::size_t i = 0; i < det.edge_count(); ++i) CHECK(det.edge_length(i) == 1.0);
    CHECK_THROWS_AS(
        (void)assign_edge_lengths(det, EdgeLengthDistribution::deterministic(1.0), 9),
        std::logic_error);

    // same seed, nested edge sets: lengths agree on shared pairs
    const CoupledEnsemble ens = sample_coupled_ppp(300, 2, 4);
    GenOptions naive;
    naive.mode = GenOptions::Mode::naive;
    const double x = xi(300);
    const auto lo_ids = ens.retained(1.0 - x);
    const auto hi_ids = ens.retained(1.0 + x);
    SpatialGraph lo = realize_egirg(ens, params, wm, 1.0 - x, naive);
    SpatialGraph hi = realize_egirg(ens, params, wm, 1.0 + x, naive);
    const auto law = EdgeLengthDistribution::exponential(1.0);
    lo = assign_edge_lengths(lo, law, ens.seed, false, &lo_ids);
    hi = assign_edge_lengths(hi, law, ens.seed, false, &hi_ids);
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> hi_lengths;
    for (std::size_t i = 0; i < hi.edge_count(); ++i)
        hi_lengths[{hi_ids[hi.edges()[i].u], hi_ids[hi.edges()[i].v]}] = hi.edge_length(i);
    REQUIRE(lo.edge_count() > 10);
    for (std::size_t i = 0; i < lo.edge_count(); ++i) {
        const auto key = std::make_pair(lo_ids[lo.edges()[i].u], lo_ids[lo.edges()[i].v]);
        REQUIRE(hi_lengths.count(key) == 1);
        CHECK(hi_lengths[key] == lo.edge_length(i));
    }
}

TEST_CASE("exponential lengths have the right mean") {
    const GirgParams params;
    const VertexWeightModel wm = VertexWeightModel::pareto(2.5);
    GenOptions layered;
    layered.mode = GenOptions::Mode::layered;
    const SpatialGraph g = generate_girg(params, 20000, wm, 6, layered);
    const SpatialGraph ex = assign_edge_lengths(g, EdgeLengthDistribution::exponential(1.0), 10);
    REQUIRE(ex.edge_count() > 100000);
    double mean = 0.0;
    for (std::size_t i = 0; i < ex.edge_count(); ++i) mean += ex.edge_length(i);
    mean /= static_cast<double>(ex.edge_count());
    CHECK(std::abs(mean - 1.0) < 0.02);
}

TEST_CASE("shortest path basics") {
    // triangle 0-1-2 with direct edge 0-2 of length 3
    PointSet ps;
    ps.dim = 1;
    ps.side = 10.0;
    ps.coords = {0.0, 1.0, 2.0};
    SpatialGraph g(ps, {1, 1, 1}, {{0, 1}, {0, 2}, {1, 2}}, {});
    g.set_edge_lengths({1.0, 3.0, 1.0}, "explicit");

    const PathResult self = shortest_weighted(g, 1, 1);
    CHECK(self.reachable);
    CHECK(self.distance == 0.0);
    CHECK(self.path == std::vector<std::uint32_t>{1});

    const PathResult via = shortest_weighted(g, 0, 2);
    CHECK(via.reachable);
    CHECK(via.distance == doctest::Approx(2.0));
    CHECK(via.path == std::vector<std::uint32_t>{0, 1, 2});

    PointSet two;
    two.dim = 1;
    two.side = 10.0;
    two.coords = {0.0, 1.0};
    SpatialGraph disconnected(two, {1, 1}, {}, {});
    disconnected.set_edge_lengths({}, "explicit");
    const PathResult none = shortest_weighted(disconnected, 0, 1);
    CHECK_FALSE(none.reachable);
    CHECK(none.path.empty());
}

TEST_CASE("dijkstra equals exhaustive enumeration and the relaxation oracle") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const SpatialGraph g = random_weighted_graph(seed, 10, 0.3);
        std::vector<bool> used(g.vertex_count(), false);
        for (std::uint32_t v = 1; v < g.vertex_count(); ++v) {
            const PathResult res = shortest_weighted(g, 0, v);
            const double oracle =
                exhaustive_best(g, 0, v, used, 0.0, std::numeric_limits<double>::infinity());
            if (res.reachable) {
                CHECK(res.distance == doctest::Approx(oracle).epsilon(1e-12));
                // the returned path realizes the distance
                double along = 0.0;
                for (std::size_t i = 0; i + 1 < res.path.size(); ++i) {
                    const auto ei = g.edge_index(res.path[i], res.path[i + 1]);
                    REQUIRE(ei.has_value());
                    along += g.edge_length(*ei);
                }
                CHECK(along == doctest::Approx(res.distance).epsilon(1e-12));
            } else {
                CHECK(std::isinf(oracle));
            }
        }
    }
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const SpatialGraph g = random_weighted_graph(seed, 50, 0.1);
        const auto oracle = relaxation_oracle(g, 0);
        const auto dist = weighted_distances(g, 0);
        for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
            if (dist[v]) CHECK(*dist[v] == doctest::Approx(oracle[v]).epsilon(1e-12));
            else CHECK(std::isinf(oracle[v]));
        }
    }
}

TEST_CASE("graph balls by layer") {
    const SpatialGraph g = line_graph({1.0, 1.0});
    const GraphBall b0 = graph_ball(g, 0, 0);
    CHECK(b0.ball == std::vector<std::uint32_t>{0});
    CHECK(b0.boundary == std::vector<std::uint32_t>{0});
    const GraphBall b1 = graph_ball(g, 0, 1);
    CHECK(b1.ball == std::vector<std::uint32_t>{0, 1});
    CHECK(b1.boundary == std::vector<std::uint32_t>{1});
}

TEST_CASE("graph balls match the repeated closure oracle") {
    const SpatialGraph g = random_weighted_graph(7, 40, 0.08);
    std::set<std::uint32_t> closure{0};
    for (std::int64_t k = 0; k < 6; ++k) {
        const GraphBall ball = graph_ball(g, 0, k);
        CHECK(std::vector<std::uint32_t>(closure.begin(), closure.end()) == ball.ball);
        std::set<std::uint32_t> next = closure;
        for (std::uint32_t v : closure)
            for (const auto* arc = g.arcs_begin(v); arc != g.arcs_end(v); ++arc)
                next.insert(arc->to);
        closure = next;
    }
}

TEST_CASE("weighted balls") {
    // star with leaf lengths .1 .2 .3
    PointSet ps;
    ps.dim = 1;
    ps.side = 10.0;
    ps.coords = {0.0, 1.0, 2.0, 3.0};
    SpatialGraph g(ps, {1, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}}, {});
    g.set_edge_lengths({0.1, 0.2, 0.3}, "explicit");
    CHECK(weighted_ball(g, 0, 0.0) == std::vector<std::uint32_t>{0});
    CHECK(weighted_ball(g, 0, 0.2) == std::vector<std::uint32_t>{0, 1, 2});

    const SpatialGraph r = random_weighted_graph(19, 60, 0.07);
    const auto dist = weighted_distances(r, 4);
    for (double t : {0.5, 1.5, 4.0}) {
        const auto ball = weighted_ball(r, 4, t);
        std::vector<std::uint32_t> expect;
        for (std::uint32_t v = 0; v < r.vertex_count(); ++v)
            if (dist[v] && *dist[v] <= t) expect.push_back(v);
        CHECK(ball == expect);
    }
}

TEST_CASE("zero-length edges put the zero cluster in the ball at t=0") {
    SpatialGraph g = line_graph({0.0, 1.0});
    CHECK(weighted_ball(g, 0, 0.0) == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("hop-constrained weighted balls") {
    // line 0-1-2-3 with lengths .25 each: budget 0.75 reaches 3 only with
    // three hops
    SpatialGraph g = line_graph({0.25, 0.25, 0.25});
    CHECK(hop_weighted_ball(g, 0, 0.75, 1) == std::vector<std::uint32_t>{0, 1});
    CHECK(hop_weighted_ball(g, 0, 0.75, 2) == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(hop_weighted_ball(g, 0, 0.75, 3) == std::vector<std::uint32_t>{0, 1, 2, 3});
    CHECK(hop_weighted_ball(g, 0, 0.375, 3) == std::vector<std::uint32_t>{0, 1});

    // unconstrained hops agree with the plain weighted ball
    const SpatialGraph r = random_weighted_graph(41, 60, 0.08);
    for (double t : {0.8, 2.0}) {
        const auto full = weighted_ball(r, 2, t);
        const auto hop = hop_weighted_ball(r, 2, t, static_cast<std::int64_t>(r.vertex_count()));
        CHECK(full == hop);
    }
}

TEST_CASE("explosion proxy on the star") {
    PointSet ps;
    ps.dim = 1;
    ps.side = 10.0;
    ps.coords = {0.0, 1.0, 2.0, 3.0};
    SpatialGraph g(ps, {1, 1, 1, 1}, {{0, 1}, {0, 2}, {0, 3}}, {});
    g.set_edge_lengths({0.1, 0.2, 0.3}, "explicit");
    const ExplosionProxy proxy = explosion_proxy(g, 0, 4, 2);
    CHECK(proxy.tau_values == std::vector<double>{0.0, 0.1, 0.2, 0.3});
    REQUIRE(proxy.x_values.size() == 2);
    REQUIRE(proxy.x_values[0].has_value());
    CHECK(*proxy.x_values[0] == doctest::Approx(0.1));
    CHECK_FALSE(proxy.x_values[1].has_value());
}

TEST_CASE("explosion proxy lists are monotone and saturate on the component") {
    const SpatialGraph g = random_weighted_graph(23, 200, 0.03);
    const auto lab = giant_component(g);
    std::size_t comp = 0;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
        if (lab.label[v] == lab.label[0]) ++comp;
    const ExplosionProxy proxy = explosion_proxy(g, 0, comp + 5, 20);
    CHECK(proxy.tau_values.size() == comp);
    CHECK(std::is_sorted(proxy.tau_values.begin(), proxy.tau_values.end()));
    double prev = 0.0;
    for (const auto& x : proxy.x_values) {
        if (!x) continue;
        CHECK(*x >= prev - 1e-12);
        prev = *x;
    }
    // tau over the whole component saturates at the weighted eccentricity
    const auto dist = weighted_distances(g, 0);
    double far = 0.0;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
        if (dist[v]) far = std::max(far, *dist[v]);
    CHECK(proxy.tau_values.back() == doctest::Approx(far));
}

TEST_CASE("containment of the boundary witness") {
    const SpatialGraph g = random_weighted_graph(29, 120, 0.04);
    const ExplosionProxy proxy = explosion_proxy(g, 0, 10, 8);
    for (std::size_t k = 1; k <= proxy.x_values.size(); ++k) {
        if (!proxy.x_values[k - 1]) continue;
        const auto ball = weighted_ball(g, 0, *proxy.x_values[k - 1]);
        const GraphBall gb = graph_ball(g, 0, static_cast<std::int64_t>(k));
        std::size_t hits = 0;
        for (std::uint32_t v : gb.boundary)
            if (std::binary_search(ball.begin(), ball.end(), v)) ++hits;
        CHECK(hits >= 1);
    }
}

TEST_CASE("triangle inequality of weighted distances") {
    const SpatialGraph g = random_weighted_graph(31, 80, 0.08);
    const auto d0 = weighted_distances(g, 0);
    const auto d1 = weighted_distances(g, 1);
    const auto d2 = weighted_distances(g, 2);
    if (d0[1] && d1[2] && d0[2]) CHECK(*d0[2] <= *d0[1] + *d1[2] + 1e-12);
    if (d0[1] && d0[2] && d1[2]) CHECK(*d1[2] <= *d0[1] + *d0[2] + 1e-12);
}

TEST_CASE("coupled monotonicity: denser graphs have shorter distances") {
    const GirgParams params;
    const VertexWeightModel wm = VertexWeightModel::pareto(2.5);
    const CoupledEnsemble ens = sample_coupled_ppp(500, 2, 8);
    GenOptions naive;
    naive.mode = GenOptions::Mode::naive;
    const double x = xi(500);
    const auto lo_ids = ens.retained(1.0 - x);
    const auto hi_ids = ens.retained(1.0 + x);
    SpatialGraph lo = realize_egirg(ens, params, wm, 1.0 - x, naive);
    SpatialGraph hi = realize_egirg(ens, params, wm, 1.0 + x, naive);
    const auto law = EdgeLengthDistribution::exponential(1.0);
    lo = assign_edge_lengths(lo, law, ens.seed, false, &lo_ids);
    hi = assign_edge_lengths(hi, law, ens.seed, false, &hi_ids);
    std::map<std::uint32_t, std::uint32_t> base_to_hi;
    for (std::uint32_t i = 0; i < hi_ids.size(); ++i) base_to_hi[hi_ids[i]] = i;
    const auto d_lo = weighted_distances(lo, 0);
    const auto d_hi = weighted_distances(hi, base_to_hi.at(lo_ids[0]));
    for (std::uint32_t v = 0; v < lo.vertex_count(); ++v) {
        if (!d_lo[v]) continue;
        const auto dh = d_hi[base_to_hi.at(lo_ids[v])];
        REQUIRE(dh.has_value());
        CHECK(*dh <= *d_lo[v] + 1e-9);
    }
}

TEST_CASE("t_k proxy") {
    PointSet ps;
    ps.dim = 1;
    ps.side = 10.0;
    ps.coords = {0.0, 1.0, 2.0};
    SpatialGraph g(ps, {5.0, 1.0, 3.0}, {{0, 1}, {1, 2}}, {});
    g.set_edge_lengths({0.5, 0.25}, "explicit");

    const WeightTargetResult self = t_k_proxy(g, 0, 4.0);
    CHECK(self.reachable);
    CHECK(self.distance == 0.0);
    CHECK(*self.witness == 0);

    const WeightTargetResult none = t_k_proxy(g, 0, 100.0);
    CHECK_FALSE(none.reachable);
    CHECK_FALSE(none.witness.has_value());

    const WeightTargetResult mid = t_k_proxy(g, 1, 2.5);
    CHECK(mid.reachable);
    CHECK(mid.distance == doctest::Approx(0.25));
    CHECK(*mid.witness == 2);

    // brute force over qualifying targets
    const SpatialGraph r = random_weighted_graph(37, 80, 0.06);
    for (double cut : {2.0, 4.0, 5.5}) {
        const WeightTargetResult got = t_k_proxy(r, 3, cut);
        const auto dist = weighted_distances(r, 3);
        double best = std::numeric_limits<double>::infinity();
        for (std::uint32_t v = 0; v < r.vertex_count(); ++v)
            if (r.weight(v) >= cut && dist[v]) best = std::min(best, *dist[v]);
        if (got.reachable) CHECK(got.distance == doctest::Approx(best).epsilon(1e-12));
        else CHECK(std::isinf(best));
    }
}
