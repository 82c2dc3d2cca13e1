// Command-line front end: generation, distance experiments, the explosion
// criterion, percolation, boxing reports and BRW runs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfnet/boxing.hpp"
#include "sfnet/brw.hpp"
#include "sfnet/fpp.hpp"
#include "sfnet/genmodel.hpp"
#include "sfnet/harness.hpp"
#include "sfnet/perc.hpp"
#include "sfnet/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitResourceCap = 3;
constexpr int kExitGuard = 4;

using nlohmann::json;
using namespace sfnet;

SpatialGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return read_sgx(in);
}

void store_graph(const std::string& path, const SpatialGraph& g) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    write_sgx(out, g);
}

int cmd_generate(const std::string& config_path, const std::string& out_path,
                 const std::string& lengths_spec) {
    const ExperimentConfig cfg = ExperimentConfig::from_config(parse_config_file(config_path));
    for (const std::string& guard : cfg.guards) std::cerr << "guard: " << guard << "\n";
    const std::uint64_t n = cfg.n_grid.front();
    SpatialGraph g = [&] {
        const VertexWeightModel wm = VertexWeightModel::pareto(cfg.weight_tau);
        if (cfg.model == "girg" || cfg.model == "girg_threshold")
            return generate_girg(cfg.girg, n, wm, mix_seed(cfg.seed, n), cfg.gen);
        if (cfg.model == "sfp") {
            SfpParams p = cfg.sfp;
            p.m = static_cast<std::int64_t>(n);
            return generate_sfp(p, wm, mix_seed(cfg.seed, n), cfg.gen);
        }
        HrgParams p = cfg.hrg;
        p.n = n;
        if (cfg.model == "hrg_threshold") p.t_h.reset();
        return generate_hrg(p, mix_seed(cfg.seed, n), cfg.gen);
    }();
    if (!lengths_spec.empty())
        g = assign_edge_lengths(g, EdgeLengthDistribution::parse(lengths_spec),
                                mix_seed(cfg.seed, n));
    store_graph(out_path, g);
    std::cout << "wrote " << out_path << ": " << g.vertex_count() << " vertices, "
              << g.edge_count() << " edges\n";
    return cfg.guards.empty() ? kExitOk : kExitGuard;
}

int cmd_distances(const std::string& config_path, const std::string& out_path) {
    const ExperimentConfig cfg = ExperimentConfig::from_config(parse_config_file(config_path));
    const DistanceSampleSet set = run_distance_experiment(cfg);
    std::ofstream out(out_path);
    write_distance_csv(out, set.rows);
    std::cout << "wrote " << out_path << ": " << set.rows.size() << " rows\n";
    for (const std::string& guard : cfg.guards) std::cerr << "guard: " << guard << "\n";
    return cfg.guards.empty() ? kExitOk : kExitGuard;
}

int cmd_criterion(const std::string& law, int k_max, double tau) {
    const EdgeLengthDistribution dist = EdgeLengthDistribution::parse(law);
    const CriterionReport rep = explosion_sum(dist, k_max, tau);
    json j{{"law", dist.spec()},
           {"partial_sum", rep.partial_sum},
           {"terms_used", rep.terms_used},
           {"tail_bound_estimate", rep.tail_bound_estimate},
           {"verdict", to_string(rep.verdict)}};
    if (rep.regime_warning) j["warning"] = "criterion applies only for tau in (2,3)";
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_percolate(const std::string& in_path, const std::string& out_path, double c,
                  double gamma_tilde, double alpha) {
    SpatialGraph g = load_graph(in_path);
    PercolationRule rule;
    rule.c = c;
    rule.gamma_tilde = gamma_tilde;
    rule.alpha = alpha;
    rule.dist = EdgeLengthDistribution::parse(g.provenance().length_law);
    const SpatialGraph percolated = percolate(g, rule);
    store_graph(out_path, percolated);
    std::cout << "kept " << percolated.edge_count() << " of " << g.edge_count() << " edges\n";
    return kExitOk;
}

int cmd_boxing(const std::string& in_path, const std::string& out_path, double mu, double epsilon,
               double tau) {
    SpatialGraph g = load_graph(in_path);
    const BoxingConstants constants = boxing_constants(epsilon, tau);
    const BoxingSystem sys =
        build_boxing(g, std::vector<double>(g.points().dim, 0.0), mu, constants);
    const auto events = verify_events(g, sys, constants.delta);
    json annuli = json::array();
    for (const auto& rep : events) {
        const Annulus& ann = sys.annuli[static_cast<std::size_t>(rep.k)];
        annuli.push_back({{"k", rep.k},
                          {"Dk", ann.d_k},
                          {"Rk", ann.r_k},
                          {"bk", ann.b_k()},
                          {"f1", rep.f1},
                          {"min_N", rep.has_next ? json(rep.min_n_next) : json(nullptr)},
                          {"f2", rep.f2},
                          {"empty_subboxes", rep.empty_subboxes}});
    }
    json j{{"mu", mu},
           {"epsilon", epsilon},
           {"tau", tau},
           {"delta", constants.delta},
           {"C", constants.C},
           {"D", constants.D},
           {"k_max", sys.k_max},
           {"annuli", annuli}};
    if (g.has_lengths()) {
        const GreedyPathResult path = greedy_centre_path(g, sys);
        j["greedy"] = {{"truncated", path.truncated},
                       {"reached_k", path.reached_k},
                       {"total_length", path.total_length},
                       {"path", path.path}};
    }
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_brw(std::uint64_t n, int d, double tau, double alpha, double a1, int max_gen,
            std::uint64_t cap, std::uint64_t seed, const std::string& out_path) {
    CoupledEnsemble ens = sample_coupled_ppp(n, d, seed);
    const auto ids = ens.retained(1.0);
    PointSet env;
    env.dim = d;
    env.side = ens.base_points.side;
    std::vector<double> weights;
    const VertexWeightModel wm = VertexWeightModel::pareto(tau);
    for (std::uint32_t b : ids) {
        for (int a = 0; a < d; ++a) env.coords.push_back(ens.base_points.point(b)[a]);
        RngStream rng(seed, StreamKind::vertex_weight, b);
        weights.push_back(wm.sample(rng));
    }
    GirgParams params;
    params.d = d;
    params.tau = tau;
    params.alpha = alpha;
    params.a1_over = a1;
    params.g_choice = GChoice::upper_bound;
    const BrwRun run = simulate_berbrw(env, weights, 0, max_gen, cap, params, seed);
    json gens = json::array();
    for (std::size_t g = 0; g < run.generations.size(); ++g)
        gens.push_back({{"k", g},
                        {"size", run.generations[g].size()},
                        {"max_displacement", run.max_displacement(g)}});
    json j{{"n_env", env.size()}, {"truncated", run.truncated}, {"generations", gens}};
    std::ofstream out(out_path);
    out << j.dump(2) << "\n";
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_report(const std::vector<std::string>& csvs, const std::string& out_prefix) {
    // one labeled sample per (file, n): ECDF tables plus pairwise KS
    std::vector<std::pair<std::string, std::vector<double>>> samples;
    for (const std::string& path : csvs) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open " + path);
        std::string line;
        std::getline(in, line); // header
        std::map<std::string, std::vector<double>> by_n;
        // columns: model,n,seed,u,v,dG,dL,in_giant
        while (std::getline(in, line)) {
            std::istringstream row(line);
            std::vector<std::string> fields;
            std::string field;
            while (std::getline(row, field, ',')) fields.push_back(field);
            if (fields.size() >= 7 && fields[6] != "inf")
                by_n[fields[1]].push_back(std::stod(fields[6]));
        }
        for (auto& [n, values] : by_n)
            samples.emplace_back(path + ":n=" + n, std::move(values));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const EcdfTable t = ecdf(samples[i].second);
        std::ofstream out(out_prefix + ".ecdf" + std::to_string(i) + ".csv");
        out << "# " << samples[i].first << "\n";
        out << "x,F\n";
        out.precision(17);
        for (std::size_t r = 0; r < t.x.size(); ++r) out << t.x[r] << "," << t.f[r] << "\n";
    }
    json ks = json::array();
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            ks.push_back({{"a", samples[i].first},
                          {"b", samples[j].first},
                          {"ks", ks_distance(samples[i].second, samples[j].second)}});
    std::ofstream out(out_prefix + ".ks.json");
    out << ks.dump(2) << "\n";
    std::cout << "wrote " << out_prefix << ".ks.json (" << samples.size() << " samples)\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scale-free spatial graphs and first-passage distances"};
    app.require_subcommand(1);

    std::string config_path, out_path = "graph.sgx", lengths_spec;
    auto* generate = app.add_subcommand("generate", "generate a graph and write it as SGX");
    generate->add_option("--config", config_path, "experiment config file")->required();
    generate->add_option("--out", out_path, "output path");
    generate->add_option("--lengths", lengths_spec, "assign edge lengths (e.g. exp:1)");

    std::string dist_out = "distances.csv";
    auto* distances = app.add_subcommand("distances", "run the distance experiment");
    distances->add_option("--config", config_path, "experiment config file")->required();
    distances->add_option("--out", dist_out, "output CSV");

    std::string law = "exp:1";
    int k_max = 20;
    double tau = 2.5;
    auto* criterion = app.add_subcommand("criterion", "evaluate the explosion criterion");
    criterion->add_option("--law", law, "edge-length law, e.g. exp:1, det:1, unif:0:1");
    criterion->add_option("--kmax", k_max, "number of series terms");
    criterion->add_option("--tau", tau, "degree power-law exponent (regime check)");

    std::string perc_in, perc_out = "percolated.sgx";
    double perc_c = 0.975, perc_gamma = 0.5, perc_alpha = 1.95;
    auto* perc = app.add_subcommand("percolate", "weight-dependent percolation of an SGX graph");
    perc->add_option("--in", perc_in, "input SGX (with lengths)")->required();
    perc->add_option("--out", perc_out, "output SGX");
    perc->add_option("--c", perc_c, "threshold strength c in (0, alpha)");
    perc->add_option("--gamma", perc_gamma, "threshold exponent in (0,1)");
    perc->add_option("--alpha", perc_alpha, "long-range parameter of the graph");

    std::string box_in, box_out = "boxing.json";
    double box_mu = 10.0, box_eps = 0.1, box_tau = 2.5;
    auto* boxing = app.add_subcommand("boxing", "build a boxing system and verify its events");
    boxing->add_option("--in", box_in, "input SGX")->required();
    boxing->add_option("--out", box_out, "output JSON");
    boxing->add_option("--mu", box_mu, "base weight scale, > 1");
    boxing->add_option("--epsilon", box_eps, "boxing epsilon");
    boxing->add_option("--tau", box_tau, "degree power-law exponent");

    std::uint64_t brw_n = 1000, brw_cap = 100000, brw_seed = 1;
    int brw_d = 2, brw_gen = 3;
    double brw_tau = 2.5, brw_alpha = 1.95, brw_a1 = 1.0;
    std::string brw_out = "brw.json";
    auto* brw = app.add_subcommand("brw", "simulate the upper-bounding Bernoulli BRW");
    brw->add_option("--n", brw_n, "environment window volume");
    brw->add_option("--d", brw_d, "dimension");
    brw->add_option("--tau", brw_tau, "weight tail exponent");
    brw->add_option("--alpha", brw_alpha, "long-range parameter");
    brw->add_option("--a1", brw_a1, "upper-bound prefactor");
    brw->add_option("--generations", brw_gen, "generations to simulate");
    brw->add_option("--cap", brw_cap, "individual cap");
    brw->add_option("--seed", brw_seed, "seed");
    brw->add_option("--out", brw_out, "output JSON");

    std::vector<std::string> report_csvs;
    std::string report_prefix = "report";
    auto* report = app.add_subcommand("report", "ECDF tables and KS distances of distance CSVs");
    report->add_option("--csv", report_csvs, "input distance CSVs")->required();
    report->add_option("--prefix", report_prefix, "output prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(config_path, out_path, lengths_spec);
        if (distances->parsed()) return cmd_distances(config_path, dist_out);
        if (criterion->parsed()) return cmd_criterion(law, k_max, tau);
        if (perc->parsed()) return cmd_percolate(perc_in, perc_out, perc_c, perc_gamma, perc_alpha);
        if (boxing->parsed()) return cmd_boxing(box_in, box_out, box_mu, box_eps, box_tau);
        if (brw->parsed())
            return cmd_brw(brw_n, brw_d, brw_tau, brw_alpha, brw_a1, brw_gen, brw_cap, brw_seed,
                           brw_out);
        if (report->parsed()) return cmd_report(report_csvs, report_prefix);
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
