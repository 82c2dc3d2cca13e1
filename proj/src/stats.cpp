#include "sfnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sfnet {

std::optional<double> hill_estimator(const std::vector<double>& values, std::size_t k_top) {
    if (k_top < 2) throw std::domain_error("hill_estimator: k_top must be >= 2");
    if (k_top + 1 > values.size())
        throw std::domain_error("hill_estimator: k_top must be below the sample size");
    std::vector<double> top(values);
    std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k_top), top.end(),
                     std::greater<>());
    top.resize(k_top + 1);
    std::sort(top.begin(), top.end(), std::greater<>());
    const double pivot = top[k_top];
    if (!(pivot > 0.0)) throw std::domain_error("hill_estimator: values must be positive");
    double acc = 0.0;
    for (std::size_t i = 0; i < k_top; ++i) acc += std::log(top[i]) - std::log(pivot);
    acc /= static_cast<double>(k_top);
    if (!(acc > 0.0)) return std::nullopt; // degenerate: ties throughout the tail
    return 1.0 / acc;
}

std::optional<double> hill_plateau(const std::vector<double>& values) {
    if (values.size() < 64) return std::nullopt;
    std::vector<std::size_t> ks;
    for (double k = 8.0; k < static_cast<double>(values.size()) / 2.0; k *= 1.3)
        ks.push_back(static_cast<std::size_t>(k));
    std::vector<double> est;
    for (std::size_t k : ks) {
        const auto h = hill_estimator(values, k);
        if (!h) return std::nullopt;
        est.push_back(*h);
    }
    // a window of 6 consecutive grid points with small relative spread
    constexpr std::size_t window = 6;
    if (est.size() < window) return std::nullopt;
    for (std::size_t i = 0; i + window <= est.size(); ++i) {
        double lo = est[i], hi = est[i];
        double mean = 0.0;
        for (std::size_t j = i; j < i + window; ++j) {
            lo = std::min(lo, est[j]);
            hi = std::max(hi, est[j]);
            mean += est[j];
        }
        mean /= window;
        if ((hi - lo) / mean < 0.05) return mean;
    }
    return std::nullopt;
}

EcdfTable ecdf(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    EcdfTable t;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i + 1 < n && values[i + 1] == values[i]) continue;
        t.x.push_back(values[i]);
        t.f.push_back(static_cast<double>(i + 1) / static_cast<double>(n));
    }
    return t;
}

double ks_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw std::domain_error("ks_distance: empty sample");
    std::vector<double> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double best = 0.0;
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / sa.size() -
                                       static_cast<double>(j) / sb.size()));
    }
    return best;
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::domain_error("median: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace sfnet
