#include "sfnet/brw.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace sfnet {

double BrwRun::max_displacement(std::size_t g) const {
    double best = 0.0;
    for (std::uint32_t id : generations[g])
        best = std::max(best, std::sqrt(environment.distance2(root, id)));
    return best;
}

namespace {

double upper_prob(const GirgParams& params, const PointSet& env,
                  const std::vector<double>& weights, std::uint32_t a, std::uint32_t b) {
    return params.C1 * g_upper_bar(params, env.distance(a, b), weights[a], weights[b]);
}

} // namespace

BrwRun simulate_berbrw(const PointSet& env, const std::vector<double>& weights,
                       std::uint32_t root, int max_gen, std::size_t cap, const GirgParams& params,
                       std::uint64_t seed) {
    if (root >= env.size()) throw std::invalid_argument("simulate_berbrw: root not in environment");
    if (cap < 1) throw std::invalid_argument("simulate_berbrw: cap must be >= 1");
    BrwRun run;
    run.environment = env;
    run.weights = weights;
    run.root = root;
    run.cap = cap;
    run.generations.push_back({root});

    const std::uint32_t n = static_cast<std::uint32_t>(env.size());
    std::size_t total = 1;
    std::unordered_map<std::uint64_t, std::uint32_t> exams; // pair key -> trials so far
    std::unordered_map<std::uint64_t, RngStream> fresh;

    for (int g = 0; g < max_gen; ++g) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t ind : run.generations.back()) {
            for (std::uint32_t y = 0; y < n; ++y) {
                if (y == ind) continue;
                const double p = upper_prob(params, env, weights, ind, y);
                if (p <= 0.0) continue;
                const std::uint64_t key = pair_key(ind, y);
                const std::uint32_t trial = exams[key]++;
                double u;
                if (trial == 0) {
                    u = pair_unit(seed, StreamKind::edge_coin, ind, y);
                } else {
                    auto it = fresh.find(key);
                    if (it == fresh.end())
                        it = fresh.emplace(key, RngStream(seed, StreamKind::brw_trial, key)).first;
                    u = it->second.next_unit_open();
                }
                if (u <= p) {
                    next.push_back(y);
                    if (++total > cap) {
                        run.truncated = true;
                        run.generations.push_back(std::move(next));
                        return run;
                    }
                }
            }
        }
        if (next.empty()) break;
        run.generations.push_back(std::move(next));
    }
    return run;
}

GrowthEnvelope growth_envelope(double epsilon, int i, double zeta, double tau, int k_max) {
    if (!(epsilon > 0.0) || !(tau > 2.0 && tau < 3.0) || i < 1 || k_max < 0)
        throw std::invalid_argument("growth_envelope: bad parameters");
    GrowthEnvelope env;
    env.epsilon = epsilon;
    env.i = i;
    env.zeta = zeta;
    env.tau = tau;
    const double rate = (1.0 + epsilon) / (tau - 2.0);
    for (int k = 0; k <= k_max; ++k) {
        const double growth = std::pow(rate, k);
        env.c_k.push_back(2.0 * std::exp(i * (1.0 + epsilon) * growth));
        env.s_k.push_back(std::exp(i * zeta * growth));
    }
    return env;
}

double zeta_floor(double epsilon, double tau, double alpha, int d) {
    const double first = 2.0 * (epsilon / (1.0 + epsilon) + (tau - 1.0) / (tau - 2.0)) / d;
    const double second =
        (2.0 * alpha + epsilon * (tau - 2.0) / (1.0 + epsilon)) / ((alpha - 1.0) * d);
    return std::max(first, second);
}

EnvelopeCheckResult envelope_check(const BrwRun& run, double epsilon, double zeta, double tau,
                                   int i_max) {
    if (run.truncated) throw std::logic_error("envelope_check: run truncated, growth not observed");
    EnvelopeCheckResult out;
    const int k_top = static_cast<int>(run.generations.size()) - 1;
    std::vector<double> disp(run.generations.size());
    for (std::size_t g = 0; g < run.generations.size(); ++g) disp[g] = run.max_displacement(g);
    for (int i = 1; i <= i_max; ++i) {
        const GrowthEnvelope env = growth_envelope(epsilon, i, zeta, tau, k_top);
        bool pass = true;
        for (int k = 0; k <= k_top && pass; ++k) {
            if (static_cast<double>(run.generations[k].size()) > env.c_k[k]) pass = false;
            if (disp[k] > env.s_k[k]) pass = false;
        }
        if (pass) {
            out.admissible = true;
            out.smallest_i = i;
            return out;
        }
    }
    return out;
}

namespace {

DominationReport coupled_domination(const PointSet& env, const std::vector<double>& weights,
                                    std::uint32_t root, int depth, const GirgParams& params,
                                    const std::vector<Edge>& upper_edges, std::uint64_t fresh_seed,
                                    std::size_t cap) {
    const std::uint32_t n = static_cast<std::uint32_t>(env.size());
    DominationReport report;

    // adjacency + BFS levels and visit order of the upper graph
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const Edge& e : upper_edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<std::int64_t> level(n, -1);
    std::vector<std::int64_t> order(n, -1);
    {
        std::queue<std::uint32_t> q;
        q.push(root);
        level[root] = 0;
        std::int64_t t = 0;
        while (!q.empty()) {
            const std::uint32_t v = q.front();
            q.pop();
            order[v] = t++;
            for (std::uint32_t u : adj[v])
                if (level[u] < 0) {
                    level[u] = level[v] + 1;
                    q.push(u);
                }
        }
    }

    // the edge coin of pair {x,y} belongs to the endpoint visited first;
    // its mirror individual consumes it when examining the pair
    const auto owns = [&](std::uint32_t x, std::uint32_t y) {
        if (order[x] < 0) return false;
        return order[y] < 0 || order[x] < order[y];
    };

    struct Individual {
        std::uint32_t at;
        bool mirror;
    };
    std::vector<Individual> gen{{root, true}};
    std::vector<bool> mirrored(n, false);
    mirrored[root] = true;
    std::unordered_map<std::uint64_t, RngStream> fresh;
    std::size_t total = 1;

    report.generation_sizes.push_back(1);
    report.boundary_sizes.push_back(1);
    report.contained = true;

    std::vector<bool> has_edge_flag(n, false);
    for (int g = 0; g < depth; ++g) {
        // mirrors reproduce first so they meet their pairs' edge coins
        std::stable_sort(gen.begin(), gen.end(), [](const Individual& a, const Individual& b) {
            return a.mirror > b.mirror;
        });
        std::vector<Individual> next;
        std::vector<bool> occupied(n, false);
        for (const Individual& ind : gen) {
            for (std::uint32_t y : adj[ind.at]) has_edge_flag[y] = true;
            for (std::uint32_t y = 0; y < n; ++y) {
                if (y == ind.at) continue;
                bool child;
                const bool edge = has_edge_flag[y];
                if (ind.mirror && owns(ind.at, y)) {
                    child = edge; // the pair's edge coin, via the realized graph
                } else {
                    const double p = upper_prob(params, env, weights, ind.at, y);
                    const std::uint64_t key = pair_key(ind.at, y);
                    auto it = fresh.find(key);
                    if (it == fresh.end())
                        it =
                            fresh.emplace(key, RngStream(fresh_seed, StreamKind::brw_trial, key))
                                .first;
                    child = it->second.next_unit_open() <= p;
                }
                if (child) {
                    const bool make_mirror = ind.mirror && edge && level[y] == g + 1 && !mirrored[y];
                    if (make_mirror) mirrored[y] = true;
                    next.push_back({y, make_mirror});
                    occupied[y] = true;
                    if (++total > cap) {
                        report.brw_truncated = true;
                        report.checked_depth = g;
                        return report;
                    }
                }
            }
            for (std::uint32_t y : adj[ind.at]) has_edge_flag[y] = false;
        }
        // boundary of B^G(root, g+1) must sit inside the occupied locations
        std::size_t boundary = 0;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (level[v] == g + 1) {
                ++boundary;
                if (!occupied[v]) report.contained = false;
            }
        }
        report.boundary_sizes.push_back(boundary);
        report.generation_sizes.push_back(next.size());
        report.checked_depth = g + 1;
        gen = std::move(next);
        if (gen.empty() && boundary == 0) break;
    }
    return report;
}

} // namespace

DominationReport domination_check(const PointSet& env, const std::vector<double>& weights,
                                  std::uint32_t root, int depth, const GirgParams& params,
                                  std::uint64_t seed, std::size_t cap) {
    GirgParams upper = params;
    upper.g_choice = GChoice::upper_bound;
    GenOptions opt;
    opt.mode = GenOptions::Mode::naive; // pair-keyed coins, shared with the graph side
    const std::vector<Edge> edges = sample_pair_edges(env, weights, upper, seed, opt);
    return coupled_domination(env, weights, root, depth, upper, edges, seed, cap);
}

DominationReport domination_check_forced(const PointSet& env, const std::vector<double>& weights,
                                         std::uint32_t root, int depth, const GirgParams& params,
                                         const std::vector<Edge>& upper_edges,
                                         std::uint64_t fresh_seed, std::size_t cap) {
    GirgParams upper = params;
    upper.g_choice = GChoice::upper_bound;
    return coupled_domination(env, weights, root, depth, upper, upper_edges, fresh_seed, cap);
}

} // namespace sfnet
