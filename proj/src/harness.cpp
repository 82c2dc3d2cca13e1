#include "sfnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "sfnet/fpp.hpp"
#include "sfnet/graph.hpp"

namespace sfnet {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    RngStream s(seed, StreamKind::experiment, salt);
    return s.next_u64();
}

ConfigMap parse_config(std::istream& in) {
    ConfigMap cfg;
    std::string line, section = "";
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config: expected key=value: " + line);
        cfg[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    return parse_config(in);
}

namespace {

double get_d(const ConfigMap& cfg, const std::string& sec, const std::string& key, double dflt) {
    const auto s = cfg.find(sec);
    if (s == cfg.end()) return dflt;
    const auto k = s->second.find(key);
    return k == s->second.end() ? dflt : std::stod(k->second);
}

std::string get_s(const ConfigMap& cfg, const std::string& sec, const std::string& key,
                  const std::string& dflt) {
    const auto s = cfg.find(sec);
    if (s == cfg.end()) return dflt;
    const auto k = s->second.find(key);
    return k == s->second.end() ? dflt : k->second;
}

} // namespace

ExperimentConfig ExperimentConfig::from_config(const ConfigMap& cfg) {
    ExperimentConfig e;
    e.model = get_s(cfg, "experiment", "model", "girg");
    e.seed = static_cast<std::uint64_t>(get_d(cfg, "experiment", "seed", 1));
    e.pairs = static_cast<int>(get_d(cfg, "experiment", "pairs", 100));
    e.graphs = static_cast<int>(get_d(cfg, "experiment", "graphs", 1));
    e.workers = static_cast<int>(get_d(cfg, "experiment", "workers", 1));
    for (const std::string& tok : split(get_s(cfg, "experiment", "n", "1024"), ','))
        e.n_grid.push_back(std::stoull(tok));
    e.lengths = EdgeLengthDistribution::parse(get_s(cfg, "lengths", "law", "exp:1"));
    e.output_dir = get_s(cfg, "output", "dir", ".");
    e.weight_tau = get_d(cfg, "weights", "tau", 2.5);

    e.girg.d = static_cast<int>(get_d(cfg, "girg", "d", 2));
    e.girg.tau = get_d(cfg, "girg", "tau", e.weight_tau);
    e.girg.alpha = get_d(cfg, "girg", "alpha", 1.95);
    e.girg.a1_over = get_d(cfg, "girg", "a1_over", 1.0);
    e.girg.a1_under = get_d(cfg, "girg", "a1_under", 1.0);
    e.girg.a2 = get_d(cfg, "girg", "a2", 1.0);
    e.girg.gamma = get_d(cfg, "girg", "gamma", 0.5);
    e.girg.c1 = get_d(cfg, "girg", "c1", 1.0);
    e.girg.C1 = get_d(cfg, "girg", "C1", 1.0);
    if (e.model == "girg_threshold") e.girg.g_choice = GChoice::threshold;

    e.sfp.d = static_cast<int>(get_d(cfg, "sfp", "d", 1));
    e.sfp.alpha_tilde = get_d(cfg, "sfp", "alpha_tilde", 2.0);
    e.sfp.tau_tilde = get_d(cfg, "sfp", "tau_tilde", 2.0);
    e.sfp.lambda = get_d(cfg, "sfp", "lambda", 1.0);

    e.hrg.alpha_h = get_d(cfg, "hrg", "alpha_h", 0.75);
    e.hrg.c_h = get_d(cfg, "hrg", "c_h", 1.0);
    if (e.model == "hrg") e.hrg.t_h = get_d(cfg, "hrg", "t_h", 0.5);

    e.gen.max_edges = static_cast<std::size_t>(get_d(cfg, "generation", "max_edges", 100000000));

    e.validate();
    if (e.model == "sfp" && !e.sfp.headline_regime()) {
        std::ostringstream guard;
        guard << "gamma_sfp = " << e.sfp.gamma_sfp() << " outside (1,2)";
        e.guards.push_back(guard.str());
    }
    if (e.model != "sfp" && !(e.weight_tau > 2.0 && e.weight_tau < 3.0))
        e.guards.push_back("tau outside (2,3): infinite-variance results do not apply");
    return e;
}

void ExperimentConfig::validate() const {
    if (n_grid.empty()) throw std::invalid_argument("experiment: empty n grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1])
            throw std::invalid_argument("experiment: n grid must be strictly increasing");
    if (pairs < 1) throw std::invalid_argument("experiment: pairs must be >= 1");
    if (graphs < 1 || graphs > pairs)
        throw std::invalid_argument("experiment: graphs must be in [1, pairs]");
    if (workers < 1) throw std::invalid_argument("experiment: workers must be >= 1");
    if (model != "girg" && model != "girg_threshold" && model != "sfp" && model != "hrg" &&
        model != "hrg_threshold")
        throw std::invalid_argument("experiment: unknown model " + model);
}

namespace {

// run fn(i) for i in [0, count) on `workers` threads; results land in
// index-addressed slots, so the outcome does not depend on scheduling
template <typename Fn>
void parallel_for(int workers, std::size_t count, Fn fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int use = std::min<int>(workers, static_cast<int>(count));
    for (int w = 0; w < use; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

SpatialGraph generate_for(const ExperimentConfig& cfg, std::uint64_t n, std::uint64_t seed) {
    const VertexWeightModel wm = VertexWeightModel::pareto(cfg.weight_tau);
    if (cfg.model == "girg" || cfg.model == "girg_threshold")
        return generate_girg(cfg.girg, n, wm, seed, cfg.gen);
    if (cfg.model == "sfp") {
        SfpParams p = cfg.sfp;
        p.m = static_cast<std::int64_t>(n);
        return generate_sfp(p, wm, seed, cfg.gen);
    }
    HrgParams p = cfg.hrg;
    p.n = n;
    if (cfg.model == "hrg_threshold") p.t_h.reset();
    return generate_hrg(p, seed, cfg.gen);
}

std::int64_t bfs_distance(const SpatialGraph& g, std::uint32_t u, std::uint32_t v) {
    if (u == v) return 0;
    std::vector<std::int64_t> dist(g.vertex_count(), -1);
    std::vector<std::uint32_t> frontier{u};
    dist[u] = 0;
    std::int64_t level = 0;
    while (!frontier.empty()) {
        std::vector<std::uint32_t> next;
        for (std::uint32_t x : frontier)
            for (const auto* arc = g.arcs_begin(x); arc != g.arcs_end(x); ++arc)
                if (dist[arc->to] < 0) {
                    dist[arc->to] = level + 1;
                    if (arc->to == v) return level + 1;
                    next.push_back(arc->to);
                }
        frontier = std::move(next);
        ++level;
    }
    return -1;
}

std::uint32_t lattice_id(const SfpParams& p, const std::vector<std::int64_t>& coords) {
    const std::int64_t width = 2 * p.m + 1;
    std::uint64_t id = 0;
    for (int a = 0; a < p.d; ++a)
        id = id * static_cast<std::uint64_t>(width) + static_cast<std::uint64_t>(coords[a] + p.m);
    return static_cast<std::uint32_t>(id);
}

} // namespace

DistanceSampleSet run_distance_experiment(const ExperimentConfig& config) {
    config.validate();
    DistanceSampleSet out;
    out.n_grid = config.n_grid;
    out.samples.resize(config.n_grid.size());
    out.hop_samples.resize(config.n_grid.size());

    for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
        const std::uint64_t n = config.n_grid[gi];
        std::vector<DistanceRow> rows(static_cast<std::size_t>(config.pairs));

        if (config.model == "sfp") {
            // one (origin, nearest-to-m*e) pair per replica graph
            parallel_for(config.workers, rows.size(), [&](std::size_t rep) {
                const std::uint64_t seed = mix_seed(config.seed, n * 1000003 + rep);
                SpatialGraph g = generate_for(config, n, seed);
                g = assign_edge_lengths(g, config.lengths, seed);
                SfpParams p = config.sfp;
                p.m = static_cast<std::int64_t>(n);
                std::vector<std::int64_t> origin(p.d, 0), far(p.d, 0);
                far[0] = p.m;
                const std::uint32_t u = lattice_id(p, origin);
                const std::uint32_t v = lattice_id(p, far);
                DistanceRow row;
                row.model = config.model;
                row.n = n;
                row.seed = seed;
                row.u = u;
                row.v = v;
                const auto lab = giant_component(g);
                row.in_giant = lab.label[u] == lab.giant_label && lab.label[v] == lab.giant_label;
                row.d_g = bfs_distance(g, u, v);
                const PathResult res = shortest_weighted(g, u, v);
                row.d_l_reachable = res.reachable;
                row.d_l = res.distance;
                rows[rep] = std::move(row);
            });
        } else {
            // pairs spread over replica graphs; one graph by default
            std::size_t cursor = 0;
            for (int rep = 0; rep < config.graphs; ++rep) {
                const std::size_t share = rows.size() / config.graphs +
                                          (static_cast<std::size_t>(rep) <
                                                   rows.size() % config.graphs
                                               ? 1
                                               : 0);
                if (share == 0) continue;
                const std::uint64_t seed =
                    mix_seed(config.seed, n * 1000003 + static_cast<std::uint64_t>(rep));
                SpatialGraph g = generate_for(config, n, seed);
                g = assign_edge_lengths(g, config.lengths, seed);
                const auto lab = giant_component(g);
                std::vector<std::uint32_t> giant;
                for (std::uint32_t v = 0; v < g.vertex_count(); ++v)
                    if (lab.label[v] == lab.giant_label) giant.push_back(v);
                if (giant.size() < 2)
                    throw std::runtime_error(
                        "distance experiment: giant component below 2 vertices");

                // distinct unordered pairs, uniform in the giant
                std::vector<std::pair<std::uint32_t, std::uint32_t>> chosen;
                std::unordered_set<std::uint64_t> used;
                RngStream rng(seed, StreamKind::experiment, 11);
                while (chosen.size() < share) {
                    const std::uint32_t a = giant[rng.next_below(giant.size())];
                    const std::uint32_t b = giant[rng.next_below(giant.size())];
                    if (a == b) continue;
                    const std::uint64_t key = pair_key(a, b);
                    if (!used.insert(key).second) continue;
                    chosen.emplace_back(std::min(a, b), std::max(a, b));
                }
                std::sort(chosen.begin(), chosen.end());

                const std::size_t base = cursor;
                parallel_for(config.workers, chosen.size(), [&](std::size_t i) {
                    DistanceRow row;
                    row.model = config.model;
                    row.n = n;
                    row.seed = seed;
                    row.u = chosen[i].first;
                    row.v = chosen[i].second;
                    row.in_giant = true;
                    row.d_g = bfs_distance(g, row.u, row.v);
                    const PathResult res = shortest_weighted(g, row.u, row.v);
                    row.d_l_reachable = res.reachable;
                    row.d_l = res.distance;
                    rows[base + i] = std::move(row);
                });
                cursor += share;
            }
        }

        for (const DistanceRow& row : rows) {
            if (row.d_l_reachable) out.samples[gi].push_back(row.d_l);
            if (row.d_g >= 0) out.hop_samples[gi].push_back(row.d_g);
            out.rows.push_back(row);
        }
    }
    return out;
}

void write_distance_csv(std::ostream& out, const std::vector<DistanceRow>& rows) {
    out << "model,n,seed,u,v,dG,dL,in_giant\n";
    out.precision(17);
    for (const DistanceRow& r : rows) {
        out << r.model << "," << r.n << "," << r.seed << "," << r.u << "," << r.v << ",";
        if (r.d_g < 0) out << "inf";
        else out << r.d_g;
        out << ",";
        if (!r.d_l_reachable) out << "inf";
        else out << r.d_l;
        out << "," << (r.in_giant ? 1 : 0) << "\n";
    }
}

void write_proxy_csv(std::ostream& out, const std::vector<double>& tau_values,
                     const std::vector<std::optional<double>>& x_values) {
    out << "k,tau_k,x_k\n";
    out.precision(17);
    const std::size_t rows = std::max(tau_values.size(), x_values.size());
    for (std::size_t k = 0; k < rows; ++k) {
        out << (k + 1) << ",";
        if (k < tau_values.size()) out << tau_values[k];
        out << ",";
        if (k < x_values.size()) {
            if (x_values[k]) out << *x_values[k];
            else out << "inf";
        }
        out << "\n";
    }
}

} // namespace sfnet
