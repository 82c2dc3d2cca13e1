#include "sfnet/perc.hpp"

#include <cmath>
#include <stdexcept>

namespace sfnet {

void PercolationRule::validate() const {
    if (!(c > 0.0 && c < alpha))
        throw std::invalid_argument("percolation: c must be in (0, alpha)");
    if (!(gamma_tilde > 0.0 && gamma_tilde < 1.0))
        throw std::invalid_argument("percolation: gamma_tilde must be in (0,1)");
}

double percolation_threshold(const PercolationRule& rule, double w1, double w2) {
    if (!(w1 >= 1.0 && w2 >= 1.0))
        throw std::domain_error("percolation_threshold: weights must be >= 1");
    const double log_q = -rule.c * std::pow(std::log(w1), rule.gamma_tilde) -
                         rule.c * std::pow(std::log(w2), rule.gamma_tilde);
    return rule.dist.quantile_log(log_q); // log_q == 0 yields the essential supremum
}

SpatialGraph percolate(const SpatialGraph& g, const PercolationRule& rule) {
    rule.validate();
    if (!g.has_lengths()) throw std::logic_error("percolate: graph has no edge lengths");
    if (g.provenance().length_law != rule.dist.spec())
        throw std::logic_error("percolate: rule length law does not match the graph's");
    std::vector<std::uint32_t> keep;
    for (std::uint32_t i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edges()[i];
        if (g.edge_length(i) <= percolation_threshold(rule, g.weight(e.u), g.weight(e.v)))
            keep.push_back(i);
    }
    Provenance prov = g.provenance();
    prov.model = g.provenance().model + "+thr";
    prov.params["perc_c"] = std::to_string(rule.c);
    prov.params["perc_gamma"] = std::to_string(rule.gamma_tilde);
    return g.edge_subgraph(keep, std::move(prov));
}

double mapped_weight(double w, double c, double alpha, double gamma_tilde) {
    if (!(w >= 1.0)) throw std::domain_error("mapped_weight: w must be >= 1");
    // the map itself is fine at c = alpha; only percolation needs c < alpha
    if (!(c > 0.0 && c <= alpha)) throw std::domain_error("mapped_weight: need 0 < c <= alpha");
    return w * std::exp(-(c / alpha) * std::pow(std::log(w), gamma_tilde));
}

} // namespace sfnet
