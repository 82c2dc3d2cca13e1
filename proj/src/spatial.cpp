#include "sfnet/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sfnet {

double metric_delta(double diff, double side, Metric metric) {
    if (metric == Metric::torus) {
        diff = std::remainder(diff, side);
    }
    return diff;
}

double PointSet::distance2(std::size_t a, std::size_t b) const {
    return distance2_to(point(a), b);
}

double PointSet::distance2_to(const double* p, std::size_t b) const {
    const double* q = point(b);
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double d = metric_delta(p[k] - q[k], side, metric);
        s += d * d;
    }
    return s;
}

double PointSet::distance(std::size_t a, std::size_t b) const {
    return std::sqrt(distance2(a, b));
}

void write_points(std::ostream& out, const PointSet& ps) {
    out.precision(17);
    out << "PTS v1 d=" << ps.dim << " side=" << ps.side
        << " metric=" << (ps.metric == Metric::torus ? "torus" : "box") << "\n";
    for (std::size_t i = 0; i < ps.size(); ++i) {
        out << i;
        for (int k = 0; k < ps.dim; ++k) out << " " << ps.point(i)[k];
        out << "\n";
    }
}

PointSet read_points(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("PTS: empty input");
    PointSet ps;
    {
        std::istringstream head(line);
        std::string tag, ver, kv;
        head >> tag >> ver;
        if (tag != "PTS" || ver != "v1") throw std::runtime_error("PTS: bad header");
        while (head >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
            if (key == "d") ps.dim = std::stoi(value);
            else if (key == "side") ps.side = std::stod(value);
            else if (key == "metric") ps.metric = value == "torus" ? Metric::torus : Metric::euclidean_box;
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::size_t id;
        row >> id;
        if (id != ps.size()) throw std::runtime_error("PTS: ids must be dense and ordered");
        for (int k = 0; k < ps.dim; ++k) {
            double x;
            if (!(row >> x)) throw std::runtime_error("PTS: short row");
            ps.coords.push_back(x);
        }
    }
    return ps;
}

double xi(std::uint64_t n) {
    if (n < 3) throw std::domain_error("xi: n must be >= 3");
    const double nn = static_cast<double>(n);
    return std::sqrt(4.0 * std::log(nn) / nn);
}

PointSet sample_binomial_points(std::uint64_t n, int dim, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("sample_binomial_points: n must be >= 1");
    if (dim < 1) throw std::domain_error("sample_binomial_points: d must be >= 1");
    PointSet ps;
    ps.dim = dim;
    ps.side = 1.0;
    ps.coords.resize(n * static_cast<std::size_t>(dim));
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream rng(seed, StreamKind::vertex_position, i);
        for (int k = 0; k < dim; ++k)
            ps.coords[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)] =
                rng.next_unit() - 0.5;
    }
    return ps;
}

PointSet blow_up(const PointSet& ps, std::uint64_t n) {
    if (std::abs(ps.side - 1.0) > 1e-12)
        throw std::invalid_argument("blow_up: expects the unit window");
    PointSet out = ps;
    const double scale = std::pow(static_cast<double>(n), 1.0 / ps.dim);
    out.side = scale;
    for (double& x : out.coords) x *= scale;
    return out;
}

double CoupledEnsemble::base_intensity() const { return 1.0 + xi(3); }

std::vector<std::uint32_t> CoupledEnsemble::retained(double lambda) const {
    const double cut = lambda / base_intensity();
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < retention.size(); ++v)
        if (retention[v] <= cut) out.push_back(v);
    return out;
}

std::vector<std::uint32_t> CoupledEnsemble::bgirg_vertices() const {
    if (straddle_failed) return {};
    const double x = xi(n);
    std::vector<std::uint32_t> low = retained(1.0 - x);
    const std::vector<std::uint32_t> high = retained(1.0 + x);
    // gap points, ranked by their retention uniform: the k smallest of the
    // i.i.d. gap uniforms form a uniform k-subset.
    std::vector<std::uint32_t> gap;
    for (std::uint32_t v : high)
        if (retention[v] > (1.0 - x) / base_intensity()) gap.push_back(v);
    const std::size_t need = static_cast<std::size_t>(n) - low.size();
    std::sort(gap.begin(), gap.end(), [this](std::uint32_t a, std::uint32_t b) {
        return retention[a] < retention[b];
    });
    low.insert(low.end(), gap.begin(), gap.begin() + static_cast<std::ptrdiff_t>(need));
    std::sort(low.begin(), low.end());
    return low;
}

CoupledEnsemble sample_coupled_ppp(std::uint64_t n, int dim, std::uint64_t seed) {
    if (n < 3) throw std::domain_error("sample_coupled_ppp: n must be >= 3");
    CoupledEnsemble ens;
    ens.n = n;
    ens.dim = dim;
    ens.seed = seed;
    const double side = std::pow(static_cast<double>(n), 1.0 / dim);
    const double intensity = 1.0 + xi(3);

    RngStream count_rng(seed, StreamKind::poisson_count, 0);
    const std::uint64_t count = count_rng.next_poisson(intensity * static_cast<double>(n));
    if (count >= (1ull << 32))
        throw std::runtime_error("sample_coupled_ppp: point count exceeds id space");

    ens.base_points.dim = dim;
    ens.base_points.side = side;
    ens.base_points.coords.resize(count * static_cast<std::size_t>(dim));
    ens.retention.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        RngStream pos(seed, StreamKind::vertex_position, i);
        for (int k = 0; k < dim; ++k)
            ens.base_points.coords[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k)] =
                (pos.next_unit() - 0.5) * side;
        RngStream ret(seed, StreamKind::vertex_retention, i);
        ens.retention[i] = ret.next_unit_open();
    }

    const double x = xi(n);
    const std::size_t low = ens.retained(1.0 - x).size();
    const std::size_t high = ens.retained(1.0 + x).size();
    ens.straddle_failed = !(low <= n && n <= high);
    return ens;
}

CellIndex::CellIndex(const PointSet& ps, double cell_side) : dim_(ps.dim) {
    if (!(cell_side > 0.0)) throw std::invalid_argument("CellIndex: cell side must be > 0");
    if (ps.dim > 8) throw std::invalid_argument("CellIndex: dimension above 8 not supported");
    lo_ = -ps.side / 2.0;
    cells_per_axis_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(ps.side / cell_side)));
    cell_ = ps.side / static_cast<double>(cells_per_axis_);
    for (std::uint32_t i = 0; i < ps.size(); ++i) {
        std::int64_t c[8];
        const double* p = ps.point(i);
        for (int k = 0; k < dim_; ++k) {
            std::int64_t idx = static_cast<std::int64_t>(std::floor((p[k] - lo_) / cell_));
            idx = std::clamp<std::int64_t>(idx, 0, cells_per_axis_ - 1);
            c[k] = idx;
        }
        buckets_[cell_hash(c)].push_back(i);
    }
}

std::uint64_t CellIndex::cell_hash(const std::int64_t* c) const {
    std::uint64_t h = 0;
    for (int k = 0; k < dim_; ++k)
        h = h * static_cast<std::uint64_t>(cells_per_axis_) + static_cast<std::uint64_t>(c[k]);
    return h;
}

std::vector<std::uint32_t> CellIndex::neighbors_within(const PointSet& ps, const double* center,
                                                       double r) const {
    if (!(r >= 0.0)) throw std::invalid_argument("neighbors_within: r must be >= 0");
    const std::int64_t reach = static_cast<std::int64_t>(std::floor(r / cell_)) + 1;
    std::int64_t base[8];
    for (int k = 0; k < dim_; ++k) {
        std::int64_t idx = static_cast<std::int64_t>(std::floor((center[k] - lo_) / cell_));
        base[k] = std::clamp<std::int64_t>(idx, 0, cells_per_axis_ - 1);
    }
    std::vector<std::uint32_t> out;
    std::int64_t offs[8];
    const double r2 = r * r;
    // iterate the (2*reach+1)^d neighborhood, wrapping on the torus
    std::int64_t total = 1;
    for (int k = 0; k < dim_; ++k) total *= 2 * reach + 1;
    for (std::int64_t t = 0; t < total; ++t) {
        std::int64_t rem = t;
        bool valid = true;
        std::int64_t c[8];
        for (int k = 0; k < dim_; ++k) {
            offs[k] = rem % (2 * reach + 1) - reach;
            rem /= 2 * reach + 1;
            std::int64_t idx = base[k] + offs[k];
            if (ps.metric == Metric::torus) {
                idx %= cells_per_axis_;
                if (idx < 0) idx += cells_per_axis_;
            } else if (idx < 0 || idx >= cells_per_axis_) {
                valid = false;
                break;
            }
            c[k] = idx;
        }
        if (!valid) continue;
        const auto it = buckets_.find(cell_hash(c));
        if (it == buckets_.end()) continue;
        for (std::uint32_t id : it->second)
            if (ps.distance2_to(center, id) <= r2) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint32_t> neighbors_within(const CellIndex& index, const PointSet& ps,
                                            const double* center, double r) {
    return index.neighbors_within(ps, center, r);
}

} // namespace sfnet
