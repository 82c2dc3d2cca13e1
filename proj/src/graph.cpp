#include "sfnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sfnet {

SpatialGraph::SpatialGraph(PointSet points, std::vector<double> weights, std::vector<Edge> edges,
                           Provenance prov)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      edges_(std::move(edges)),
      prov_(std::move(prov)) {
    if (points_.size() != weights_.size())
        throw std::invalid_argument("SpatialGraph: weights/points size mismatch");
    for (const Edge& e : edges_) {
        if (e.u >= e.v || e.v >= vertex_count())
            throw std::invalid_argument("SpatialGraph: bad edge endpoints");
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("SpatialGraph: duplicate edge");
    build_adjacency();
}

void SpatialGraph::build_adjacency() {
    const std::size_t n = vertex_count();
    offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    arcs_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        arcs_[cursor[e.u]++] = {e.v, i};
        arcs_[cursor[e.v]++] = {e.u, i};
    }
    for (std::uint32_t v = 0; v < n; ++v)
        std::sort(arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
                  [](const Arc& a, const Arc& b) { return a.to < b.to; });
}

bool SpatialGraph::has_edge(std::uint32_t u, std::uint32_t v) const {
    return edge_index(u, v).has_value();
}

std::optional<std::uint32_t> SpatialGraph::edge_index(std::uint32_t u, std::uint32_t v) const {
    const Arc* lo = arcs_begin(u);
    const Arc* hi = arcs_end(u);
    const Arc* it = std::lower_bound(lo, hi, v, [](const Arc& a, std::uint32_t x) { return a.to < x; });
    if (it != hi && it->to == v) return it->edge;
    return std::nullopt;
}

void SpatialGraph::set_edge_lengths(std::vector<double> lengths, const std::string& law) {
    if (lengths.size() != edges_.size())
        throw std::invalid_argument("set_edge_lengths: size mismatch");
    for (double l : lengths)
        if (!(l >= 0.0)) throw std::invalid_argument("set_edge_lengths: negative length");
    edge_lengths_ = std::move(lengths);
    lengths_assigned_ = true;
    prov_.length_law = law;
}

SpatialGraph SpatialGraph::edge_subgraph(const std::vector<std::uint32_t>& keep_edges,
                                         Provenance prov) const {
    std::vector<Edge> kept;
    std::vector<double> lengths;
    kept.reserve(keep_edges.size());
    for (std::uint32_t i : keep_edges) {
        kept.push_back(edges_[i]);
        if (has_lengths()) lengths.push_back(edge_lengths_[i]);
    }
    prov.hyp_phi = prov_.hyp_phi;
    prov.hyp_r = prov_.hyp_r;
    prov.hyp_radius = prov_.hyp_radius;
    SpatialGraph out(points_, weights_, std::move(kept), std::move(prov));
    if (has_lengths()) {
        // edges were already sorted, so lengths stay aligned after the
        // constructor's (stable for sorted input) sort
        out.edge_lengths_ = std::move(lengths);
        out.lengths_assigned_ = true;
        out.prov_.length_law = prov_.length_law;
    }
    return out;
}

namespace {

struct Dsu {
    std::vector<std::uint32_t> parent;
    explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // keep the smaller id as the root so labels are canonical
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

} // namespace

ComponentLabeling giant_component(const SpatialGraph& g) {
    const std::size_t n = g.vertex_count();
    Dsu dsu(n);
    for (const Edge& e : g.edges()) dsu.unite(e.u, e.v);
    ComponentLabeling out;
    out.label.resize(n);
    std::vector<std::size_t> size(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        out.label[v] = dsu.find(v);
        ++size[out.label[v]];
    }
    std::size_t best = 0;
    std::uint32_t best_label = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (out.label[v] == v && size[v] > best) {
            best = size[v];
            best_label = v;
        }
    }
    out.giant_label = best_label;
    out.giant_size = best;
    return out;
}

void write_sgx(std::ostream& out, const SpatialGraph& g) {
    out.precision(17);
    out << "SGX v1\n";
    const Provenance& p = g.provenance();
    out << "m model " << (p.model.empty() ? "unknown" : p.model) << "\n";
    out << "m seed " << p.seed << "\n";
    out << "m d " << g.points().dim << "\n";
    out << "m side " << g.points().side << "\n";
    out << "m metric " << (g.points().metric == Metric::torus ? "torus" : "box") << "\n";
    for (const auto& [k, v] : p.params) out << "m param:" << k << " " << v << "\n";
    if (!p.length_law.empty()) out << "m lengths " << p.length_law << "\n";
    if (!p.hyp_phi.empty()) out << "m hyp_radius " << p.hyp_radius << "\n";
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
        out << "v " << v;
        for (int k = 0; k < g.points().dim; ++k) out << " " << g.points().point(v)[k];
        out << " " << g.weight(v);
        if (!p.hyp_phi.empty()) out << " " << p.hyp_phi[v] << " " << p.hyp_r[v];
        out << "\n";
    }
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const Edge& e = g.edges()[i];
        out << "e " << e.u << " " << e.v;
        if (g.has_lengths()) out << " " << g.edge_length(i);
        out << "\n";
    }
}

SpatialGraph read_sgx(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "SGX v1") throw std::runtime_error("SGX: bad header");
    PointSet ps;
    Provenance prov;
    std::vector<double> weights;
    std::vector<Edge> edges;
    std::vector<double> lengths;
    bool hyperbolic = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tag;
        row >> tag;
        if (tag == "m") {
            std::string key;
            row >> key;
            std::string value;
            std::getline(row, value);
            if (!value.empty() && value.front() == ' ') value.erase(0, 1);
            if (key == "model") prov.model = value;
            else if (key == "seed") prov.seed = std::stoull(value);
            else if (key == "d") ps.dim = std::stoi(value);
            else if (key == "side") ps.side = std::stod(value);
            else if (key == "metric") ps.metric = value == "torus" ? Metric::torus : Metric::euclidean_box;
            else if (key == "lengths") prov.length_law = value;
            else if (key == "hyp_radius") { prov.hyp_radius = std::stod(value); hyperbolic = true; }
            else if (key.rfind("param:", 0) == 0) prov.params[key.substr(6)] = value;
        } else if (tag == "v") {
            std::uint32_t id;
            row >> id;
            if (id != weights.size()) throw std::runtime_error("SGX: vertex ids must be dense");
            for (int k = 0; k < ps.dim; ++k) {
                double x;
                row >> x;
                ps.coords.push_back(x);
            }
            double w;
            row >> w;
            weights.push_back(w);
            if (hyperbolic) {
                double phi, r;
                row >> phi >> r;
                prov.hyp_phi.push_back(phi);
                prov.hyp_r.push_back(r);
            }
        } else if (tag == "e") {
            Edge e{};
            row >> e.u >> e.v;
            edges.push_back(e);
            double l;
            if (row >> l) lengths.push_back(l);
        }
    }
    if (!lengths.empty() && lengths.size() != edges.size())
        throw std::runtime_error("SGX: lengths on some edges only");
    const std::string law = prov.length_law;
    const bool with_lengths = !lengths.empty() || (!law.empty() && edges.empty());
    SpatialGraph g(std::move(ps), std::move(weights), std::move(edges), std::move(prov));
    if (with_lengths) g.set_edge_lengths(std::move(lengths), law);
    return g;
}

} // namespace sfnet
