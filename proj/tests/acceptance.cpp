// Acceptance suite: one criterion per invocation (argv[1] in 1..9), or all
// when no argument is given. Prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sfnet/boxing.hpp"
#include "sfnet/brw.hpp"
#include "sfnet/fpp.hpp"
#include "sfnet/genmodel.hpp"
#include "sfnet/harness.hpp"
#include "sfnet/perc.hpp"
#include "sfnet/stats.hpp"

using namespace sfnet;

namespace {

int failures = 0;

struct Criterion {
    int id;
    std::string name;
    bool ok = true;
    std::vector<std::string> notes;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }
    ~Criterion() {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::ostringstream line;
        line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name << " ("
             << secs << " s)";
        std::cout << line.str() << "\n";
        for (const std::string& n : notes) std::cout << "       " << n << "\n";
        std::cout.flush();
        if (!ok) ++failures;
    }
};

GirgParams headline_girg() {
    GirgParams p;
    p.d = 2;
    p.tau = 2.5;
    p.alpha = 1.95;
    return p;
}

std::vector<double> positive_degrees(const SpatialGraph& g) {
    std::vector<double> out;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) > 0) out.push_back(static_cast<double>(g.degree(v)));
    return out;
}

// 1. criterion correctness of the explosion sum
void criterion_1() {
    Criterion c{1, "explosion criterion classification"};
    const auto det = explosion_sum(EdgeLengthDistribution::deterministic(1.0), 10);
    c.require(det.verdict == ExplosionVerdict::conservative, "det:1 conservative");
    const auto shifted = explosion_sum(
        EdgeLengthDistribution::shifted(EdgeLengthDistribution::exponential(1.0), 1.0), 10);
    c.require(shifted.verdict == ExplosionVerdict::conservative, "shift:1:exp:1 conservative");
    const auto expo = explosion_sum(EdgeLengthDistribution::exponential(1.0), 10);
    c.require(expo.verdict == ExplosionVerdict::explosive, "exp:1 explosive");
    const auto unif = explosion_sum(EdgeLengthDistribution::uniform(0.0, 1.0), 10);
    c.require(unif.verdict == ExplosionVerdict::explosive, "unif:0:1 explosive");

    long double oracle = 0.0L;
    for (int k = 1; k <= 10; ++k)
        oracle += -std::log1p(-std::exp(-std::exp(static_cast<long double>(k))));
    c.require(std::abs(expo.partial_sum - 0.0689) < 1e-3, "partial sum near 0.0689");
    c.require(std::abs(expo.partial_sum - static_cast<double>(oracle)) < 1e-12,
              "partial sum equals the series oracle");
    std::ostringstream note;
    note << "exp:1 partial sum = " << expo.partial_sum;
    c.note(note.str());
}

// 2. coupling invariants of the shared realization
void criterion_2() {
    Criterion c{2, "vertex and edge coupling across intensities"};
    const GirgParams params = headline_girg();
    const VertexWeightModel wm = VertexWeightModel::pareto(2.5);
    int straddle_failures = 0, seeds_run = 0;

    const auto lift = [](const SpatialGraph& g, const std::vector<std::uint32_t>& ids) {
        std::set<std::pair<std::uint32_t, std::uint32_t>> out;
        for (const Edge& e : g.edges()) out.insert({ids[e.u], ids[e.v]});
        return out;
    };

    for (const std::uint64_t n : {std::uint64_t{1000}, std::uint64_t{10000}}) {
        const double x = xi(n);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const CoupledEnsemble ens = sample_coupled_ppp(n, 2, seed);
            ++seeds_run;
            if (ens.straddle_failed) {
                ++straddle_failures;
                continue;
            }
            const auto lo = ens.retained(1.0 - x);
            const auto mid = ens.retained(1.0);
            const auto hi = ens.retained(1.0 + x);
            const auto bg = ens.bgirg_vertices();
            c.require(std::includes(mid.begin(), mid.end(), lo.begin(), lo.end()),
                      "V(1-xi) inside V(1)");
            c.require(std::includes(hi.begin(), hi.end(), mid.begin(), mid.end()),
                      "V(1) inside V(1+xi)");
            c.require(bg.size() == n, "exactly n coupled vertices");
            c.require(std::includes(bg.begin(), bg.end(), lo.begin(), lo.end()) &&
                          std::includes(hi.begin(), hi.end(), bg.begin(), bg.end()),
                      "V_B(n) sandwiched");

            // edge nesting under shared coins: all seeds at n = 1000, a
            // subsample at n = 10000 (the O(N^2) pair scan dominates)
            if (n == 1000 || seed < 6) {
                GenOptions naive;
                naive.mode = GenOptions::Mode::naive;
                const auto e_lo = lift(realize_egirg(ens, params, wm, 1.0 - x, naive), lo);
                const auto e_mid = lift(realize_egirg(ens, params, wm, 1.0, naive), mid);
                const auto e_hi = lift(realize_egirg(ens, params, wm, 1.0 + x, naive), hi);
                c.require(std::includes(e_mid.begin(), e_mid.end(), e_lo.begin(), e_lo.end()),
                          "E(1-xi) inside E(1)");
                c.require(std::includes(e_hi.begin(), e_hi.end(), e_mid.begin(), e_mid.end()),
                          "E(1) inside E(1+xi)");
            }
        }
    }
    c.require(straddle_failures * 50 <= seeds_run, "straddle failure rate at most 2%");
    std::ostringstream note;
    note << "straddle failures: " << straddle_failures << "/" << seeds_run;
    c.note(note.str());
}

// 3. degree tails of GIRG and HRG
void criterion_3() {
    Criterion c{3, "degree power-law tails at n = 1e5"};
    GenOptions layered;
    layered.mode = GenOptions::Mode::layered;
    {
        const SpatialGraph g = generate_girg(headline_girg(), 100000,
                                             VertexWeightModel::pareto(2.5), 101, layered);
        const auto degrees = positive_degrees(g);
        const auto hill = hill_estimator(degrees, 1000);
        c.require(hill.has_value(), "girg hill estimate exists");
        if (hill) {
            c.require(std::abs(*hill - 1.5) <= 0.2, "girg hill within 1.5 +- 0.2");
            std::ostringstream note;
            note << "girg hill = " << *hill << " (edges: " << g.edge_count() << ")";
            c.note(note.str());
        }
    }
    {
        HrgParams p;
        p.alpha_h = 0.75;
        p.c_h = 1.0;
        p.n = 100000;
        const SpatialGraph g = generate_hrg(p, 103, layered);
        const auto degrees = positive_degrees(g);
        const auto hill = hill_estimator(degrees, 1000);
        c.require(hill.has_value(), "hrg hill estimate exists");
        if (hill) {
            c.require(std::abs(*hill - 1.5) <= 0.2, "hrg hill within 1.5 +- 0.2");
            std::ostringstream note;
            note << "hrg hill = " << *hill << " (edges: " << g.edge_count() << ")";
            c.note(note.str());
        }

        // the n-dependent weight law band: x^{2 alpha_h} P(W > x) within
        // [1/2, 2 + 6 exp(-C_H alpha_H / 2)] for x in [2, n^{1/4}]
        const double hi_band = 2.0 + 6.0 * std::exp(-p.c_h * p.alpha_h / 2.0);
        std::vector<double> weights(g.weights());
        std::sort(weights.begin(), weights.end());
        bool in_band = true;
        for (double x = 2.0; x <= std::pow(100000.0, 0.25); x *= 1.2) {
            const auto above = weights.end() -
                               std::upper_bound(weights.begin(), weights.end(), x);
            const double tail = static_cast<double>(above) / static_cast<double>(weights.size());
            const double scaled = tail * std::pow(x, 2.0 * p.alpha_h);
            if (scaled < 0.5 || scaled > hi_band) in_band = false;
        }
        c.require(in_band, "hrg weight slowly-varying part within [1/2, 2+6e^{-C_H a_H/2}]");
    }
}

// 4. percolation exponent preservation: the percolated graph viewed as a
// member of the class carries weights m(W); their Hill exponent must match
// the original weight law. Degree-based estimates carry the slowly-varying
// finite-size drift of e^{-c (log w)^g} and are reported for transparency.
void criterion_4() {
    Criterion c{4, "percolation preserves the weight-law exponent"};
    GenOptions layered;
    layered.mode = GenOptions::Mode::layered;
    const GirgParams params = headline_girg();
    SpatialGraph g = generate_girg(params, 100000, VertexWeightModel::pareto(2.5), 107, layered);
    g = assign_edge_lengths(g, EdgeLengthDistribution::exponential(1.0), 107);
    PercolationRule rule;
    rule.c = 0.5 * params.alpha;
    rule.gamma_tilde = 0.5;
    rule.alpha = params.alpha;
    rule.dist = EdgeLengthDistribution::exponential(1.0);
    const SpatialGraph perc = percolate(g, rule);

    std::vector<double> mapped;
    for (double w : g.weights())
        mapped.push_back(mapped_weight(w, rule.c, params.alpha, rule.gamma_tilde));
    const auto h_w = hill_estimator(g.weights(), 1000);
    const auto h_m = hill_estimator(mapped, 1000);
    c.require(h_w.has_value() && h_m.has_value(), "hill estimates exist");
    if (h_w && h_m) {
        c.require(std::abs(*h_w - *h_m) <= 0.25, "weight-law exponents within 0.25");
        std::ostringstream note;
        note << "weights " << *h_w << ", mapped " << *h_m << " (kept " << perc.edge_count() << "/"
             << g.edge_count() << " edges)";
        c.note(note.str());
    }
    const auto h_deg = hill_estimator(positive_degrees(g), 1000);
    const auto h_deg_p = hill_estimator(positive_degrees(perc), 1000);
    if (h_deg && h_deg_p) {
        std::ostringstream note;
        note << "degrees for reference: original " << *h_deg << ", percolated " << *h_deg_p
             << " (finite-size drift of the slowly varying factor)";
        c.note(note.str());
    }
}

// 5. distance engine exactness
void criterion_5() {
    Criterion c{5, "weighted search equals the oracles"};

    const auto random_graph = [](std::uint64_t seed, std::uint32_t n, double edge_prob) {
        PointSet ps;
        ps.dim = 1;
        ps.side = 1000.0;
        std::vector<double> weights;
        RngStream rng(seed, StreamKind::generic, 3);
        for (std::uint32_t i = 0; i < n; ++i) {
            ps.coords.push_back(rng.next_unit() * 900.0 - 450.0);
            weights.push_back(1.0);
        }
        std::vector<Edge> edges;
        std::vector<double> lengths;
        for (std::uint32_t u = 0; u < n; ++u)
            for (std::uint32_t v = u + 1; v < n; ++v)
                if (rng.next_unit() < edge_prob) {
                    edges.push_back({u, v});
                    lengths.push_back(rng.next_unit() * 3.0 + 0.01);
                }
        SpatialGraph g(ps, weights, edges, {});
        g.set_edge_lengths(lengths, "explicit");
        return g;
    };

    // exhaustive path enumeration on <= 12 vertices
    std::function<double(const SpatialGraph&, std::uint32_t, std::uint32_t, std::vector<bool>&,
                         double, double)>
        exhaustive = [&](const SpatialGraph& g, std::uint32_t u, std::uint32_t v,
                         std::vector<bool>& used, double acc, double best) {
            if (acc >= best) return best;
            if (u == v) return acc;
            used[u] = true;
            for (const auto* arc = g.arcs_begin(u); arc != g.arcs_end(u); ++arc)
                if (!used[arc->to])
                    best = exhaustive(g, arc->to, v, used, acc + g.edge_length(arc->edge), best);
            used[u] = false;
            return best;
        };

    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const SpatialGraph g = random_graph(seed, 12, 0.3);
        const std::uint32_t target = 1 + static_cast<std::uint32_t>(seed % 11);
        std::vector<bool> used(g.vertex_count(), false);
        const double oracle =
            exhaustive(g, 0, target, used, 0.0, std::numeric_limits<double>::infinity());
        const PathResult res = shortest_weighted(g, 0, target);
        if (res.reachable != std::isfinite(oracle) ||
            (res.reachable && std::abs(res.distance - oracle) > 1e-9)) {
            c.require(false, "mismatch vs exhaustive enumeration at seed " + std::to_string(seed));
            break;
        }
    }

    for (std::uint64_t seed = 1000; seed < 1200; ++seed) {
        const SpatialGraph g = random_graph(seed, 50, 0.10);
        constexpr double inf = std::numeric_limits<double>::infinity();
        std::vector<double> oracle(g.vertex_count(), inf);
        oracle[0] = 0.0;
        for (std::size_t round = 0; round + 1 < g.vertex_count(); ++round) {
            bool changed = false;
            for (std::size_t i = 0; i < g.edge_count(); ++i) {
                const Edge& e = g.edges()[i];
                const double l = g.edge_length(i);
                if (oracle[e.u] + l < oracle[e.v]) oracle[e.v] = oracle[e.u] + l, changed = true;
                if (oracle[e.v] + l < oracle[e.u]) oracle[e.u] = oracle[e.v] + l, changed = true;
            }
            if (!changed) break;
        }
        const auto dist = weighted_distances(g, 0);
        for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
            const bool match = dist[v] ? std::abs(*dist[v] - oracle[v]) < 1e-9
                                       : std::isinf(oracle[v]);
            if (!match) {
                c.require(false, "mismatch vs relaxation oracle at seed " + std::to_string(seed));
                break;
            }
        }
    }
    c.note("500 exhaustive instances at 12 vertices, 200 relaxation instances at 50");
}

// 6. the explosive/conservative dichotomy at desk scale
void criterion_6() {
    Criterion c{6, "distance dichotomy: explosive stabilizes, conservative grows"};
    {
        // 300 giant pairs per n, spread over three replica graphs so the
        // samples estimate the distance law rather than one graph's quirks
        std::istringstream in(R"(
[experiment]
model = girg
n = 16384,65536
pairs = 300
graphs = 3
seed = 1
workers = 8

[girg]
d = 2
tau = 2.5
alpha = 1.95

[lengths]
law = exp:1
)");
        const ExperimentConfig cfg = ExperimentConfig::from_config(parse_config(in));
        const DistanceSampleSet set = run_distance_experiment(cfg);
        const double ks = ks_distance(set.samples[0], set.samples[1]);
        c.require(ks <= 0.12, "KS(d_L at 2^14, d_L at 2^16) <= 0.12 with exponential lengths");
        std::ostringstream note;
        note << "explosive KS = " << ks;
        c.note(note.str());
    }
    {
        std::istringstream in(R"(
[experiment]
model = girg
n = 4096,65536
pairs = 300
seed = 2
workers = 8

[girg]
d = 2
tau = 2.5
alpha = 1.95

[lengths]
law = det:1
)");
        const ExperimentConfig cfg = ExperimentConfig::from_config(parse_config(in));
        const DistanceSampleSet set = run_distance_experiment(cfg);
        std::vector<double> small_hops(set.hop_samples[0].begin(), set.hop_samples[0].end());
        std::vector<double> big_hops(set.hop_samples[1].begin(), set.hop_samples[1].end());
        const double m_small = median(small_hops);
        const double m_big = median(big_hops);
        c.require(m_big >= m_small + 1.0, "median d_G grows by at least one hop, unit lengths");
        std::ostringstream note;
        note << "median d_G: " << m_small << " at 2^12, " << m_big << " at 2^16";
        c.note(note.str());
    }
}

// 7. BRW domination coupling
void criterion_7() {
    Criterion c{7, "graph boundaries inside BRW generations"};
    GirgParams p = headline_girg();
    p.a1_over = 0.05;
    p.g_choice = GChoice::upper_bound;
    const VertexWeightModel wm = VertexWeightModel::pareto(2.5);

    int contained = 0, run = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const CoupledEnsemble ens = sample_coupled_ppp(1000, 2, seed);
        const auto ids = ens.retained(1.0);
        PointSet env;
        env.dim = 2;
        env.side = ens.base_points.side;
        std::vector<double> weights;
        for (std::uint32_t b : ids) {
            env.coords.push_back(ens.base_points.point(b)[0]);
            env.coords.push_back(ens.base_points.point(b)[1]);
            RngStream rng(seed, StreamKind::vertex_weight, b);
            weights.push_back(std::min(wm.sample(rng), 5.0));
        }
        const auto rep = domination_check(env, weights, 0, 3, p, seed, 400000);
        ++run;
        if (rep.brw_truncated) {
            c.require(false, "BRW truncated at seed " + std::to_string(seed));
            continue;
        }
        if (rep.contained) ++contained;
    }
    c.require(contained == run, "containment for 200/200 coupled seeds");
    std::ostringstream note;
    note << contained << "/" << run << " seeds contained";
    c.note(note.str());

    // exhaustive three-point coin patterns
    PointSet env;
    env.dim = 2;
    env.side = 20.0;
    env.coords = {0.0, 0.0, 1.0, 0.0, 2.0, 0.0};
    const std::vector<double> weights = {1.0, 1.5, 2.0};
    bool all = true;
    for (int pattern = 0; pattern < 8; ++pattern) {
        std::vector<Edge> edges;
        if (pattern & 1) edges.push_back({0, 1});
        if (pattern & 2) edges.push_back({0, 2});
        if (pattern & 4) edges.push_back({1, 2});
        for (std::uint64_t fresh = 0; fresh < 32; ++fresh)
            all = all && domination_check_forced(env, weights, 0, 3, p, edges, fresh).contained;
    }
    c.require(all, "all 2^3 coin patterns contained");
}

// 8. boxing constants, bands, trends, and the greedy bound
void criterion_8() {
    Criterion c{8, "boxing system"};
    const BoxingConstants cons = boxing_constants(0.1, 2.5);
    c.require(std::abs(cons.delta - 0.0166667) < 1e-5, "delta = 0.0166667");
    c.require(std::abs(cons.C - 1.8) < 1e-12, "C = 1.8");
    c.require(std::abs(cons.D - 1.01142) < 1e-5, "D = 1.01142");

    GenOptions layered;
    layered.mode = GenOptions::Mode::layered;
    const GirgParams params = headline_girg();
    const VertexWeightModel wm = VertexWeightModel::pareto(2.5);

    // b_k band at mu = 1000 (tiling geometry)
    {
        const auto counts = boxing_subbox_counts(2, 1000.0, cons, 2);
        bool band = true;
        for (int k = 0; k <= 2; ++k) {
            const double target = std::pow(1000.0, (cons.D - 1.0) * std::pow(cons.C, k));
            const double bk = static_cast<double>(counts[static_cast<std::size_t>(k)]);
            if (bk < target / 2.0 || bk > target) band = false;
        }
        c.require(band, "b_k within the volume band");
    }

    // truncation frequency decreases along mu in {10, 30, 100}; percolated
    // graphs are where greedy steps are genuinely random at desk scale (the
    // unpercolated kernel saturates and never truncates)
    {
        const double gt = 0.5;
        std::map<double, int> truncated;
        int completed_checked = 0;
        const int seeds = 32;
        for (int s = 0; s < seeds; ++s) {
            SpatialGraph g = generate_egirg_window(params, wm, 1.0, 100000, 400 + s, layered);
            g = assign_edge_lengths(g, EdgeLengthDistribution::exponential(1.0), 400 + s);

            PercolationRule trend_rule;
            trend_rule.c = 0.5;
            trend_rule.gamma_tilde = gt;
            trend_rule.alpha = params.alpha;
            trend_rule.dist = EdgeLengthDistribution::exponential(1.0);
            const SpatialGraph trend_perc = percolate(g, trend_rule);

            // milder percolation for the epsilon_K bound, where completed
            // banded paths must exist to be checked at all
            PercolationRule bound_rule = trend_rule;
            bound_rule.c = 0.2;
            const SpatialGraph bound_perc = percolate(g, bound_rule);

            for (const double mu : {10.0, 30.0, 100.0}) {
                const BoxingSystem tsys = build_boxing(trend_perc, {0.0, 0.0}, mu, cons);
                if (greedy_centre_path(trend_perc, tsys).truncated) ++truncated[mu];

                const BoxingSystem bsys = build_boxing(bound_perc, {0.0, 0.0}, mu, cons);
                const GreedyPathResult pres = greedy_centre_path(bound_perc, bsys);
                if (pres.truncated) continue;
                bool banded = true;
                for (std::size_t k = 0; k < pres.path.size(); ++k) {
                    const double need = std::pow(
                        mu, std::pow(cons.C, k) * (1.0 - cons.delta) / (cons.tau - 1.0));
                    if (bound_perc.weight(pres.path[k]) < need) banded = false;
                }
                if (banded) {
                    ++completed_checked;
                    const double bound = epsilon_k_bound(bound_rule.dist, mu, cons, gt, 0.2);
                    if (pres.total_length > bound)
                        c.require(false, "greedy path exceeded epsilon_K");
                }
            }
        }
        c.require(truncated[10.0] >= truncated[30.0] && truncated[30.0] >= truncated[100.0],
                  "truncation frequency nonincreasing over mu in {10,30,100}");
        c.require(completed_checked >= 1, "at least one completed greedy path checked");
        std::ostringstream note;
        note << "truncated: mu=10: " << truncated[10.0] << ", mu=30: " << truncated[30.0]
             << ", mu=100: " << truncated[100.0] << " of " << seeds
             << "; bound-checked completions: " << completed_checked;
        c.note(note.str());
    }
}

// 9. byte-identical outputs across worker counts
void criterion_9() {
    Criterion c{9, "determinism across worker counts"};
    std::istringstream in(R"(
[experiment]
model = girg
n = 2048,4096
pairs = 120
seed = 77
workers = 1

[girg]
d = 2
tau = 2.5
alpha = 1.95

[lengths]
law = exp:1
)");
    ExperimentConfig cfg = ExperimentConfig::from_config(parse_config(in));
    const DistanceSampleSet one = run_distance_experiment(cfg);
    cfg.workers = 8;
    const DistanceSampleSet eight = run_distance_experiment(cfg);
    std::ostringstream a, b;
    write_distance_csv(a, one.rows);
    write_distance_csv(b, eight.rows);
    c.require(a.str() == b.str(), "identical csv bytes for workers 1 and 8");
}

} // namespace

int main(int argc, char** argv) {
    const int which = argc > 1 ? std::atoi(argv[1]) : 0;
    using Fn = void (*)();
    const Fn table[] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                        criterion_6, criterion_7, criterion_8, criterion_9};
    if (which >= 1 && which <= 9) {
        table[which - 1]();
    } else {
        for (Fn fn : table) fn();
    }
    return failures == 0 ? 0 : 1;
}
