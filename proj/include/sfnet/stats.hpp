#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sfnet {

// Hill estimator over the top k order statistics:
// 1 / (mean of log X_(i) - log X_(k+1), i = 1..k). Throws for k_top < 2;
// returns nothing for degenerate inputs (zero log-spacing).
std::optional<double> hill_estimator(const std::vector<double>& values, std::size_t k_top);

// Scans k over a logarithmic grid and reports a stable plateau of the Hill
// estimate, when one exists; heavy-tailed data has one, light tails do not.
std::optional<double> hill_plateau(const std::vector<double>& values);

struct EcdfTable {
    std::vector<double> x;
    std::vector<double> f;
};

EcdfTable ecdf(std::vector<double> values);

// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(const std::vector<double>& a, const std::vector<double>& b);

double median(std::vector<double> values);

} // namespace sfnet
