#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sfnet/dist.hpp"
#include "sfnet/genmodel.hpp"

namespace sfnet {

// key=value config with [section] headers; '#' starts a comment.
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

ConfigMap parse_config(std::istream& in);
ConfigMap parse_config_file(const std::string& path);

struct ExperimentConfig {
    std::string model = "girg"; // girg | girg_threshold | sfp | hrg | hrg_threshold
    GirgParams girg;
    SfpParams sfp;
    HrgParams hrg;
    double weight_tau = 2.5;
    std::vector<std::uint64_t> n_grid; // SFP: window radii
    EdgeLengthDistribution lengths = EdgeLengthDistribution::exponential(1.0);
    int pairs = 100;
    int graphs = 1; // replica graphs per n over which the pairs are spread
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output_dir = ".";
    GenOptions gen;

    // set when the configuration falls outside a stated hypothesis (e.g.
    // gamma_sfp outside (1,2)); the harness runs but reports the guard
    std::vector<std::string> guards;

    static ExperimentConfig from_config(const ConfigMap& cfg);
    void validate() const;
};

struct DistanceRow {
    std::string model;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint32_t u = 0, v = 0;
    std::int64_t d_g = -1; // -1 encodes unreachable
    bool d_l_reachable = false;
    double d_l = 0.0;
    bool in_giant = false;
};

struct DistanceSampleSet {
    // d_L samples per grid entry, in grid order
    std::vector<std::vector<double>> samples;
    std::vector<std::vector<std::int64_t>> hop_samples;
    std::vector<DistanceRow> rows;
    std::vector<std::uint64_t> n_grid;
};

// For each n: generate the model, assign lengths, take uniform distinct
// vertex pairs of the giant component (for SFP: the origin and the vertex
// nearest to m*e over `pairs` replica seeds) and record d_G and d_L.
// Deterministic for a fixed (config, seed) regardless of worker count.
DistanceSampleSet run_distance_experiment(const ExperimentConfig& config);

void write_distance_csv(std::ostream& out, const std::vector<DistanceRow>& rows);

// "k,tau_k,x_k" per the explosion proxy.
void write_proxy_csv(std::ostream& out, const std::vector<double>& tau_values,
                     const std::vector<std::optional<double>>& x_values);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

} // namespace sfnet
