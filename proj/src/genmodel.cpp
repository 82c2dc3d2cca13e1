#include "sfnet/genmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sfnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(17);
    out << x;
    return out.str();
}

} // namespace

void GirgParams::validate() const {
    if (d < 1 || d > 4) throw std::invalid_argument("girg: d must be in 1..4");
    if (!(alpha > 1.0)) throw std::invalid_argument("girg: alpha must be > 1");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("girg: gamma must be in (0,1)");
    if (!(a1_under > 0.0 && a1_over > 0.0 && a2 > 0.0))
        throw std::invalid_argument("girg: a1, a2 must be positive");
    if (!(c1 > 0.0 && c1 <= C1)) throw std::invalid_argument("girg: need 0 < c1 <= C1");
    if (!(tau > 1.0)) throw std::invalid_argument("girg: tau must be > 1");
}

void SfpParams::validate() const {
    if (d < 1 || d > 4) throw std::invalid_argument("sfp: d must be in 1..4");
    if (!(alpha_tilde > d)) throw std::invalid_argument("sfp: alpha_tilde must exceed d");
    if (!(tau_tilde > 1.0)) throw std::invalid_argument("sfp: tau_tilde must be > 1");
    if (!(lambda > 0.0)) throw std::invalid_argument("sfp: lambda must be > 0");
    if (m < 1) throw std::invalid_argument("sfp: window radius must be >= 1");
}

double HrgParams::radius() const {
    return 2.0 * std::log(static_cast<double>(n)) + c_h;
}

void HrgParams::validate() const {
    if (!(alpha_h > 0.5 && alpha_h < 1.0))
        throw std::invalid_argument("hrg: alpha_h must be in (1/2,1), tau = 2*alpha_h+1 leaves (2,3)");
    if (t_h && !(*t_h > 0.0)) throw std::invalid_argument("hrg: t_h must be positive");
    if (n < 2) throw std::invalid_argument("hrg: n must be >= 2");
}

double g_upper_bar(const GirgParams& p, double dist, double w1, double w2) {
    if (dist <= 0.0) return 1.0;
    return std::min(1.0, p.a1_over * std::pow(dist, -p.alpha * p.d) * std::pow(w1 * w2, p.alpha));
}

double g_lower_bar(const GirgParams& p, double dist, double w1, double w2) {
    const double soft =
        std::exp(-p.a2 * (std::pow(std::log(w1), p.gamma) + std::pow(std::log(w2), p.gamma)));
    if (dist <= 0.0) return soft;
    return std::min(soft,
                    p.a1_under * std::pow(dist, -p.alpha * p.d) * std::pow(w1 * w2, p.alpha));
}

double connection_prob_blown(const GirgParams& p, double dist, double w1, double w2) {
    if (!(w1 >= 1.0 && w2 >= 1.0)) throw std::domain_error("connection_prob: weights must be >= 1");
    switch (p.g_choice) {
        case GChoice::canonical:
            if (dist <= 0.0) return 1.0;
            return std::min(1.0,
                            p.a1_over * std::pow(dist, -p.alpha * p.d) * std::pow(w1 * w2, p.alpha));
        case GChoice::lower_bound: return p.c1 * g_lower_bar(p, dist, w1, w2);
        case GChoice::upper_bound: return p.C1 * g_upper_bar(p, dist, w1, w2);
        case GChoice::threshold:
            return dist <= p.a1_over * std::pow(w1 * w2, 1.0 / p.d) ? 1.0 : 0.0;
    }
    return 0.0;
}

double connection_prob(const GirgParams& p, const std::vector<double>& delta, double w1, double w2,
                       std::uint64_t n) {
    if (static_cast<int>(delta.size()) != p.d)
        throw std::invalid_argument("connection_prob: delta dimension mismatch");
    double d2 = 0.0;
    for (double x : delta) d2 += x * x;
    const double dist = std::sqrt(d2) * std::pow(static_cast<double>(n), 1.0 / p.d);
    return connection_prob_blown(p, dist, w1, w2);
}

namespace {

// ---------------------------------------------------------------------------
// pair kernels: exact probability + layer envelopes
// ---------------------------------------------------------------------------

struct PairKernel {
    virtual ~PairKernel() = default;
    virtual double prob(std::uint32_t a, std::uint32_t b) const = 0;
    // upper bound on prob for any pair with weights below (w1_hi, w2_hi) at
    // distance >= distmin; nonincreasing in distmin
    virtual double envelope(double w1_hi, double w2_hi, double distmin) const = 0;
    // distance beyond which envelope(..) <= p; +inf when it never drops to p
    virtual double envelope_radius(double w1_hi, double w2_hi, double p) const = 0;
};

struct GirgKernel : PairKernel {
    const PointSet& ps;
    const std::vector<double>& w;
    GirgParams params;
    std::vector<double> alpha_log_w; // alpha * log w, the hot-path term
    double log_a_over = 0.0;

    GirgKernel(const PointSet& ps_, const std::vector<double>& w_, const GirgParams& p_)
        : ps(ps_), w(w_), params(p_) {
        log_a_over = std::log(params.a1_over);
        alpha_log_w.reserve(w.size());
        for (double weight : w) alpha_log_w.push_back(params.alpha * std::log(weight));
    }

    double prob(std::uint32_t a, std::uint32_t b) const override {
        if (params.g_choice == GChoice::canonical) {
            const double d2 = ps.distance2(a, b);
            if (d2 <= 0.0) return 1.0;
            const double lp = log_a_over + alpha_log_w[a] + alpha_log_w[b] -
                              0.5 * params.alpha * params.d * std::log(d2);
            return lp >= 0.0 ? 1.0 : std::exp(lp);
        }
        return connection_prob_blown(params, ps.distance(a, b), w[a], w[b]);
    }

    double envelope(double w1, double w2, double dm) const override {
        switch (params.g_choice) {
            case GChoice::canonical:
            case GChoice::upper_bound: {
                const double scale = params.g_choice == GChoice::upper_bound ? params.C1 : 1.0;
                if (dm <= 0.0) return std::min(1.0, scale);
                return std::min(1.0, scale * std::min(1.0, params.a1_over *
                                                               std::pow(dm, -params.alpha * params.d) *
                                                               std::pow(w1 * w2, params.alpha)));
            }
            case GChoice::lower_bound: {
                // soft cap is largest at the smallest weights of the layers
                const double soft = std::exp(
                    -params.a2 * (std::pow(std::log(std::max(1.0, w1 / 2.0)), params.gamma) +
                                  std::pow(std::log(std::max(1.0, w2 / 2.0)), params.gamma)));
                double env = soft;
                if (dm > 0.0)
                    env = std::min(env, params.a1_under * std::pow(dm, -params.alpha * params.d) *
                                            std::pow(w1 * w2, params.alpha));
                return std::min(1.0, params.c1 * env);
            }
            case GChoice::threshold:
                return dm <= params.a1_over * std::pow(w1 * w2, 1.0 / params.d) ? 1.0 : 0.0;
        }
        return 0.0;
    }

    double envelope_radius(double w1, double w2, double p) const override {
        if (params.g_choice == GChoice::threshold)
            return params.a1_over * std::pow(w1 * w2, 1.0 / params.d);
        const double a1 = params.g_choice == GChoice::lower_bound ? params.a1_under : params.a1_over;
        const double scale = params.g_choice == GChoice::upper_bound ? params.C1
                             : params.g_choice == GChoice::lower_bound ? params.c1
                                                                       : 1.0;
        return std::pow(scale * a1 * std::pow(w1 * w2, params.alpha) / std::min(p, 1.0),
                        1.0 / (params.alpha * params.d));
    }
};

struct SfpKernel : PairKernel {
    const PointSet& ps;
    const std::vector<double>& w;
    SfpParams params;

    SfpKernel(const PointSet& ps_, const std::vector<double>& w_, const SfpParams& p_)
        : ps(ps_), w(w_), params(p_) {}

    double prob(std::uint32_t a, std::uint32_t b) const override {
        const double d2 = ps.distance2(a, b);
        if (d2 <= 1.0 + 1e-9) return 1.0; // nearest neighbours always connected
        return -std::expm1(-params.lambda * std::pow(d2, -params.alpha_tilde / 2.0) * w[a] * w[b]);
    }

    double envelope(double w1, double w2, double dm) const override {
        if (dm <= 1.0) return 1.0;
        return std::min(1.0, params.lambda * std::pow(dm, -params.alpha_tilde) * w1 * w2);
    }

    double envelope_radius(double w1, double w2, double p) const override {
        return std::max(1.0,
                        std::pow(params.lambda * w1 * w2 / std::min(p, 1.0), 1.0 / params.alpha_tilde));
    }
};

// Works on the mapped coordinates: x on the unit torus, W = exp((R-r)/2).
struct HrgKernel : PairKernel {
    const PointSet& ps;
    const std::vector<double>& w;
    HrgParams params;
    double r_n;

    HrgKernel(const PointSet& ps_, const std::vector<double>& w_, const HrgParams& p_)
        : ps(ps_), w(w_), params(p_), r_n(p_.radius()) {}

    double radius_of(double weight) const { return r_n - 2.0 * std::log(weight); }

    // cosh d_H, via the cancellation-free identity
    // cosh d = cosh(r_u - r_v) + 2 sin^2(dphi/2) sinh r_u sinh r_v.
    double cosh_dh(std::uint32_t a, std::uint32_t b) const {
        const double ra = radius_of(w[a]), rb = radius_of(w[b]);
        const double dx = metric_delta(ps.point(a)[0] - ps.point(b)[0], ps.side, ps.metric);
        const double sh = std::sin(kPi * dx);
        return std::cosh(ra - rb) + 2.0 * sh * sh * std::sinh(ra) * std::sinh(rb);
    }

    double prob(std::uint32_t a, std::uint32_t b) const override {
        const double c = cosh_dh(a, b);
        if (!params.t_h) return c <= std::cosh(r_n) ? 1.0 : 0.0;
        const double dh = std::acosh(std::max(1.0, c));
        return 1.0 / (1.0 + std::exp((dh - r_n) / (2.0 * *params.t_h)));
    }

    // sinh of the smallest radius in a weight layer bounded above by w_hi
    double sinh_min(double w_hi) const { return std::sinh(std::max(0.0, radius_of(w_hi))); }

    double envelope(double w1, double w2, double dm) const override {
        const double s2 = std::sin(kPi * std::min(0.5, dm));
        const double base = 2.0 * sinh_min(w1) * sinh_min(w2) * s2 * s2;
        if (!params.t_h) return 1.0 + base <= std::cosh(r_n) ? 1.0 : 0.0;
        if (base <= 0.0) return 1.0;
        // p <= exp(-(d_H - R)/(2T)) and exp(d_H) >= cosh d_H >= base
        return std::min(1.0, std::pow(std::exp(r_n) / base, 1.0 / (2.0 * *params.t_h)));
    }

    double envelope_radius(double w1, double w2, double p) const override {
        const double ss = sinh_min(w1) * sinh_min(w2);
        if (ss <= 0.0) return kInf;
        double target;
        if (!params.t_h) {
            target = (std::cosh(r_n) - 1.0) / (2.0 * ss);
        } else {
            target = std::exp(r_n) * std::pow(std::min(p, 1.0), -2.0 * *params.t_h) / (2.0 * ss);
        }
        if (target >= 1.0) return kInf;
        return std::asin(std::sqrt(target)) / kPi;
    }
};

// ---------------------------------------------------------------------------
// pair-sampling engine
// ---------------------------------------------------------------------------

// skip-sampler over an index space of size `total` where every index is a
// candidate independently with probability env
struct SkipSampler {
    std::uint64_t total;
    double env;
    RngStream& rng;
    std::uint64_t t = 0;
    bool dense;

    SkipSampler(std::uint64_t total_, double env_, RngStream& rng_)
        : total(total_), env(std::min(env_, 1.0)), rng(rng_), dense(env >= 1.0) {}

    // next candidate index, or total when exhausted
    std::uint64_t next() {
        if (dense) return t < total ? t++ : total;
        if (t >= total) return total;
        const double u = rng.next_unit_open();
        const double skip = std::floor(std::log(u) / std::log1p(-env));
        if (skip >= static_cast<double>(total - t)) {
            t = total;
            return total;
        }
        t += static_cast<std::uint64_t>(skip);
        return t++;
    }
};

// row/col of index t in the strict upper triangle of an m x m matrix
void unrank_triangle(std::uint64_t t, std::uint64_t m, std::uint64_t& row, std::uint64_t& col) {
    double mm = static_cast<double>(m);
    double r = std::floor((2.0 * mm - 1.0 - std::sqrt((2.0 * mm - 1.0) * (2.0 * mm - 1.0) -
                                                      8.0 * static_cast<double>(t))) /
                          2.0);
    row = static_cast<std::uint64_t>(std::max(0.0, r));
    auto offset = [m](std::uint64_t i) { return i * m - i * (i + 1) / 2; };
    while (row > 0 && offset(row) > t) --row;
    while (offset(row + 1) <= t) ++row;
    col = t - offset(row) + row + 1;
}

class PairSampler {
public:
    PairSampler(const PointSet& ps, const std::vector<double>& weights, const PairKernel& kernel,
                std::uint64_t seed, const GenOptions& opt,
                const std::vector<std::uint32_t>* key_ids)
        : ps_(ps), w_(weights), kernel_(kernel), seed_(seed), opt_(opt), key_ids_(key_ids) {}

    std::vector<Edge> run() {
        const std::size_t n = ps_.size();
        GenOptions::Mode mode = opt_.mode;
        if (mode == GenOptions::Mode::automatic)
            mode = n <= 3000 ? GenOptions::Mode::naive : GenOptions::Mode::layered;
        if (mode == GenOptions::Mode::naive) run_naive();
        else run_layered();
        std::sort(edges_.begin(), edges_.end());
        return std::move(edges_);
    }

private:
    const PointSet& ps_;
    const std::vector<double>& w_;
    const PairKernel& kernel_;
    std::uint64_t seed_;
    GenOptions opt_;
    const std::vector<std::uint32_t>* key_ids_;
    std::vector<Edge> edges_;

    void push(std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        edges_.push_back({a, b});
        if (edges_.size() > opt_.max_edges)
            throw ResourceCapError("edge cap exceeded (" + std::to_string(opt_.max_edges) + ")");
    }

    std::uint32_t key_of(std::uint32_t v) const { return key_ids_ ? (*key_ids_)[v] : v; }

    void run_naive() {
        const std::uint32_t n = static_cast<std::uint32_t>(ps_.size());
        for (std::uint32_t u = 0; u < n; ++u) {
            for (std::uint32_t v = u + 1; v < n; ++v) {
                const double p = kernel_.prob(u, v);
                if (p <= 0.0) continue;
                if (pair_unit(seed_, StreamKind::edge_coin, key_of(u), key_of(v)) <= p) push(u, v);
            }
        }
    }

    // --- layered path -----------------------------------------------------

    struct Grid {
        int g = 1;        // cells per axis
        double s = 0.0;   // cell side
        double lo = 0.0;  // window low corner
        int dim = 1;
        // cell -> member ids (ascending), as a sorted flat association
        std::vector<std::pair<std::uint64_t, std::vector<std::uint32_t>>> buckets;

        std::uint64_t cell_of(const double* p) const {
            std::uint64_t h = 0;
            for (int k = 0; k < dim; ++k) {
                std::int64_t c = static_cast<std::int64_t>(std::floor((p[k] - lo) / s));
                c = std::clamp<std::int64_t>(c, 0, g - 1);
                h = h * static_cast<std::uint64_t>(g) + static_cast<std::uint64_t>(c);
            }
            return h;
        }

        const std::vector<std::uint32_t>* find(std::uint64_t cell) const {
            auto it = std::lower_bound(buckets.begin(), buckets.end(), cell,
                                       [](const auto& a, std::uint64_t c) { return a.first < c; });
            if (it == buckets.end() || it->first != cell) return nullptr;
            return &it->second;
        }
    };

    Grid build_grid(const std::vector<std::uint32_t>& members, int g) const {
        Grid grid;
        grid.g = g;
        grid.dim = ps_.dim;
        grid.s = ps_.side / g;
        grid.lo = -ps_.side / 2.0;
        std::vector<std::pair<std::uint64_t, std::uint32_t>> tmp;
        tmp.reserve(members.size());
        for (std::uint32_t v : members) tmp.emplace_back(grid.cell_of(ps_.point(v)), v);
        std::sort(tmp.begin(), tmp.end());
        for (const auto& [cell, v] : tmp) {
            if (grid.buckets.empty() || grid.buckets.back().first != cell)
                grid.buckets.push_back({cell, {}});
            grid.buckets.back().second.push_back(v);
        }
        return grid;
    }

    void run_layered() {
        // weight layers [2^j, 2^{j+1})
        std::vector<std::vector<std::uint32_t>> layers;
        for (std::uint32_t v = 0; v < ps_.size(); ++v) {
            const int L = std::max(0, static_cast<int>(std::floor(std::log2(w_[v]))));
            if (layers.size() <= static_cast<std::size_t>(L)) layers.resize(L + 1);
            layers[static_cast<std::size_t>(L)].push_back(v);
        }
        const int nl = static_cast<int>(layers.size());
        for (int j = 0; j < nl; ++j) {
            if (layers[j].empty()) continue;
            for (int k = j; k < nl; ++k) {
                if (layers[k].empty()) continue;
                sample_layer_pair(j, k, layers[j], layers[k]);
            }
        }
    }

    void sample_layer_pair(int j, int k, const std::vector<std::uint32_t>& mj,
                           const std::vector<std::uint32_t>& mk) {
        const double wj = std::ldexp(1.0, j + 1), wk = std::ldexp(1.0, k + 1);
        RngStream rng(seed_, StreamKind::pair_sample,
                      (static_cast<std::uint64_t>(j) << 32) | static_cast<std::uint64_t>(k));
        const bool same = j == k;
        const std::uint64_t total =
            same ? static_cast<std::uint64_t>(mj.size()) * (mj.size() - 1) / 2
                 : static_cast<std::uint64_t>(mj.size()) * mk.size();
        if (total == 0) return;

        if (total <= 2048) {
            // tiny blocks: one direct scan beats grid setup
            SkipSampler all(total, 1.0, rng);
            for (std::uint64_t t = all.next(); t < total; t = all.next()) {
                std::uint32_t a, b;
                unrank(t, same, mj, mk, a, b);
                const double p = kernel_.prob(a, b);
                if (p > 0.0 && rng.next_unit_open() <= p) push(a, b);
            }
            return;
        }

        // grid with cells at the saturation scale of the layer pair
        const double r_sat = kernel_.envelope_radius(wj, wk, 1.0);
        int g = 1;
        if (r_sat > 0.0 && std::isfinite(r_sat) && r_sat < ps_.side)
            g = static_cast<int>(ps_.side / r_sat);
        const double member_room = std::pow(4.0 * static_cast<double>(mj.size() + mk.size()) + 16.0,
                                            1.0 / ps_.dim);
        g = std::clamp(g, 1, static_cast<int>(std::min(512.0, member_room)));
        const Grid gj = build_grid(mj, g);
        const Grid gk = same ? Grid{} : build_grid(mk, g);
        const Grid& gridk = same ? gj : gk;
        const double s = ps_.side / g;

        // near horizon: rings up to where the envelope hits the floor
        const double r_far = kernel_.envelope_radius(wj, wk, opt_.p_min);
        const int axis_bound = ps_.metric == Metric::torus ? (g - 1) / 2 : g - 1;
        int h = axis_bound;
        if (std::isfinite(r_far))
            h = std::min(axis_bound, static_cast<int>(std::ceil(r_far / s)));
        h = std::min(h, opt_.ring_cap);

        near_pass(j, k, gj, gridk, h, wj, wk, rng);

        const bool far_exists = ps_.metric == Metric::torus ? h < g / 2 : h < g - 1;
        if (!far_exists) return;
        const double q = kernel_.envelope(wj, wk, h * s);
        if (!(q > 0.0)) return;
        far_pass(same, mj, mk, gj, gridk, h, q, rng);
    }

    void unrank(std::uint64_t t, bool same, const std::vector<std::uint32_t>& mj,
                const std::vector<std::uint32_t>& mk, std::uint32_t& a, std::uint32_t& b) const {
        if (same) {
            std::uint64_t row, col;
            unrank_triangle(t, mj.size(), row, col);
            a = mj[row];
            b = mj[col];
        } else {
            a = mj[t / mk.size()];
            b = mk[t % mk.size()];
        }
    }

    double delta_distmin(const std::int64_t* delta, double s) const {
        double d2 = 0.0;
        for (int a = 0; a < ps_.dim; ++a) {
            const double gap = (std::abs(static_cast<double>(delta[a])) - 1.0) * s;
            if (gap > 0.0) d2 += gap * gap;
        }
        return std::sqrt(d2);
    }

    void near_pass(int j, int k, const Grid& gj, const Grid& gk, int h, double wj, double wk,
                   RngStream& rng) {
        const bool same = j == k;
        const int g = gj.g;
        const double s = gj.s;
        const int dim = ps_.dim;
        std::int64_t delta[4];
        const std::int64_t span = 2 * h + 1;
        std::int64_t total = 1;
        for (int a = 0; a < dim; ++a) total *= span;
        for (std::int64_t t = 0; t < total; ++t) {
            std::int64_t rem = t;
            for (int a = 0; a < dim; ++a) {
                delta[a] = rem % span - h;
                rem /= span;
            }
            if (same) {
                // half-space so each unordered cell pair shows up once
                bool positive = true, zero = true;
                for (int a = dim - 1; a >= 0; --a) {
                    if (delta[a] != 0) {
                        positive = delta[a] > 0;
                        zero = false;
                        break;
                    }
                }
                if (!zero && !positive) continue;
            }
            const double env = kernel_.envelope(wj, wk, delta_distmin(delta, s));
            if (!(env > 0.0)) continue;
            for (const auto& [cellA, membersA] : gj.buckets) {
                // decode cell coordinates
                std::int64_t ca[4];
                std::uint64_t remc = cellA;
                for (int a = dim - 1; a >= 0; --a) {
                    ca[a] = static_cast<std::int64_t>(remc % g);
                    remc /= g;
                }
                std::uint64_t cellB = 0;
                bool ok = true;
                for (int a = 0; a < dim; ++a) {
                    std::int64_t c = ca[a] + delta[a];
                    if (ps_.metric == Metric::torus) {
                        c %= g;
                        if (c < 0) c += g;
                    } else if (c < 0 || c >= g) {
                        ok = false;
                        break;
                    }
                    cellB = cellB * g + static_cast<std::uint64_t>(c);
                }
                if (!ok) continue;
                const bool diag = same && cellB == cellA;
                const std::vector<std::uint32_t>* membersB = diag ? &membersA : gk.find(cellB);
                if (!membersB) continue;
                sample_block(membersA, *membersB, diag, env, rng);
            }
        }
    }

    void sample_block(const std::vector<std::uint32_t>& ma, const std::vector<std::uint32_t>& mb,
                      bool triangle, double env, RngStream& rng) {
        const std::uint64_t total = triangle
                                        ? static_cast<std::uint64_t>(ma.size()) * (ma.size() - 1) / 2
                                        : static_cast<std::uint64_t>(ma.size()) * mb.size();
        if (total == 0) return;
        SkipSampler sampler(total, env, rng);
        for (std::uint64_t t = sampler.next(); t < total; t = sampler.next()) {
            std::uint32_t a, b;
            if (triangle) {
                std::uint64_t row, col;
                unrank_triangle(t, ma.size(), row, col);
                a = ma[row];
                b = ma[col];
            } else {
                a = ma[t / mb.size()];
                b = mb[t % mb.size()];
            }
            const double p = kernel_.prob(a, b);
            if (p > 0.0 && rng.next_unit_open() * std::min(env, 1.0) <= p) push(a, b);
        }
    }

    void far_pass(bool same, const std::vector<std::uint32_t>& mj,
                  const std::vector<std::uint32_t>& mk, const Grid& gj, const Grid& gk, int h,
                  double q, RngStream& rng) {
        const std::uint64_t total = same
                                        ? static_cast<std::uint64_t>(mj.size()) * (mj.size() - 1) / 2
                                        : static_cast<std::uint64_t>(mj.size()) * mk.size();
        const int g = gj.g;
        SkipSampler sampler(total, q, rng);
        for (std::uint64_t t = sampler.next(); t < total; t = sampler.next()) {
            std::uint32_t a, b;
            unrank(t, same, mj, mk, a, b);
            // cell delta in the near horizon is already covered by near_pass
            const std::uint64_t ca = gj.cell_of(ps_.point(a));
            const std::uint64_t cb = (same ? gj : gk).cell_of(ps_.point(b));
            std::uint64_t ra = ca, rb = cb;
            bool near = true;
            for (int ax = ps_.dim - 1; ax >= 0; --ax) {
                std::int64_t da = static_cast<std::int64_t>(ra % g) - static_cast<std::int64_t>(rb % g);
                ra /= g;
                rb /= g;
                if (ps_.metric == Metric::torus) {
                    da %= g;
                    if (da < 0) da += g;
                    if (da > g / 2) da -= g;
                }
                if (std::abs(da) > h) {
                    near = false;
                    break;
                }
            }
            if (near) continue;
            const double p = kernel_.prob(a, b);
            if (p > 0.0 && rng.next_unit_open() * q <= p) push(a, b);
        }
    }
};

std::vector<Edge> sample_edges(const PointSet& ps, const std::vector<double>& weights,
                               const PairKernel& kernel, std::uint64_t seed, const GenOptions& opt,
                               const std::vector<std::uint32_t>* key_ids = nullptr) {
    PairSampler sampler(ps, weights, kernel, seed, opt, key_ids);
    return sampler.run();
}

} // namespace

std::vector<Edge> sample_pair_edges(const PointSet& ps, const std::vector<double>& weights,
                                    const GirgParams& params, std::uint64_t seed,
                                    const GenOptions& opt,
                                    const std::vector<std::uint32_t>* key_ids) {
    params.validate();
    GirgKernel kernel(ps, weights, params);
    return sample_edges(ps, weights, kernel, seed, opt, key_ids);
}

namespace {

std::vector<double> sample_weights(const VertexWeightModel& wm, std::uint64_t n,
                                   std::uint64_t seed) {
    std::vector<double> w(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream rng(seed, StreamKind::vertex_weight, i);
        w[i] = wm.sample(rng);
    }
    return w;
}

} // namespace

SpatialGraph generate_girg(const GirgParams& params, std::uint64_t n, const VertexWeightModel& wm,
                           std::uint64_t seed, const GenOptions& opt) {
    params.validate();
    if (n < 2) throw std::invalid_argument("generate_girg: n must be >= 2");
    PointSet ps = blow_up(sample_binomial_points(n, params.d, seed), n);
    std::vector<double> weights = sample_weights(wm, n, seed);
    GirgKernel kernel(ps, weights, params);
    std::vector<Edge> edges = sample_edges(ps, weights, kernel, seed, opt);
    Provenance prov;
    prov.model = "girg";
    prov.seed = seed;
    prov.params = {{"d", std::to_string(params.d)}, {"tau", fmt(params.tau)},
                   {"alpha", fmt(params.alpha)},   {"a1_over", fmt(params.a1_over)},
                   {"a1_under", fmt(params.a1_under)}, {"a2", fmt(params.a2)},
                   {"gamma", fmt(params.gamma)},   {"c1", fmt(params.c1)},
                   {"C1", fmt(params.C1)},         {"g", std::to_string(static_cast<int>(params.g_choice))},
                   {"n", std::to_string(n)}};
    return SpatialGraph(std::move(ps), std::move(weights), std::move(edges), std::move(prov));
}

SpatialGraph realize_egirg(const CoupledEnsemble& ens, const GirgParams& params,
                           const VertexWeightModel& wm, double lambda, const GenOptions& opt) {
    params.validate();
    if (!(lambda > 0.0) || lambda > ens.base_intensity())
        throw std::invalid_argument("realize_egirg: lambda must be in (0, 1+xi(3)]");
    const std::vector<std::uint32_t> base_ids = ens.retained(lambda);
    PointSet ps;
    ps.dim = ens.base_points.dim;
    ps.side = ens.base_points.side;
    std::vector<double> weights;
    weights.reserve(base_ids.size());
    for (std::uint32_t b : base_ids) {
        for (int kdim = 0; kdim < ps.dim; ++kdim) ps.coords.push_back(ens.base_points.point(b)[kdim]);
        RngStream rng(ens.seed, StreamKind::vertex_weight, b);
        weights.push_back(wm.sample(rng));
    }
    GirgKernel kernel(ps, weights, params);
    std::vector<Edge> edges = sample_edges(ps, weights, kernel, ens.seed, opt, &base_ids);
    Provenance prov;
    prov.model = "egirg";
    prov.seed = ens.seed;
    prov.params = {{"lambda", fmt(lambda)}, {"volume", std::to_string(ens.n)},
                   {"d", std::to_string(params.d)}, {"tau", fmt(params.tau)},
                   {"alpha", fmt(params.alpha)}};
    return SpatialGraph(std::move(ps), std::move(weights), std::move(edges), std::move(prov));
}

SpatialGraph generate_egirg_window(const GirgParams& params, const VertexWeightModel& wm,
                                   double lambda, std::uint64_t volume, std::uint64_t seed,
                                   const GenOptions& opt) {
    CoupledEnsemble ens = sample_coupled_ppp(volume, params.d, seed);
    return realize_egirg(ens, params, wm, lambda, opt);
}

SpatialGraph realize_bgirg(const CoupledEnsemble& ens, const GirgParams& params,
                           const VertexWeightModel& wm, const GenOptions& opt) {
    params.validate();
    if (ens.straddle_failed)
        throw std::runtime_error("realize_bgirg: ensemble flagged, resample with another seed");
    const std::vector<std::uint32_t> base_ids = ens.bgirg_vertices();
    PointSet ps;
    ps.dim = ens.base_points.dim;
    ps.side = ens.base_points.side;
    std::vector<double> weights;
    weights.reserve(base_ids.size());
    for (std::uint32_t b : base_ids) {
        for (int kdim = 0; kdim < ps.dim; ++kdim) ps.coords.push_back(ens.base_points.point(b)[kdim]);
        RngStream rng(ens.seed, StreamKind::vertex_weight, b);
        weights.push_back(wm.sample(rng));
    }
    GirgKernel kernel(ps, weights, params);
    std::vector<Edge> edges = sample_edges(ps, weights, kernel, ens.seed, opt, &base_ids);
    Provenance prov;
    prov.model = "bgirg";
    prov.seed = ens.seed;
    prov.params = {{"n", std::to_string(ens.n)}, {"d", std::to_string(params.d)},
                   {"tau", fmt(params.tau)}, {"alpha", fmt(params.alpha)}};
    return SpatialGraph(std::move(ps), std::move(weights), std::move(edges), std::move(prov));
}

SpatialGraph generate_sfp(const SfpParams& params, const VertexWeightModel& wm, std::uint64_t seed,
                          const GenOptions& opt) {
    params.validate();
    const std::int64_t width = 2 * params.m + 1;
    double count = 1.0;
    for (int a = 0; a < params.d; ++a) count *= static_cast<double>(width);
    if (count > 4e6) throw ResourceCapError("sfp window exceeds the vertex cap");
    const std::uint64_t n = static_cast<std::uint64_t>(count);

    PointSet ps;
    ps.dim = params.d;
    ps.side = static_cast<double>(width);
    ps.coords.resize(n * params.d);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t rem = i;
        for (int a = params.d - 1; a >= 0; --a) {
            ps.coords[i * params.d + a] =
                static_cast<double>(static_cast<std::int64_t>(rem % width) - params.m);
            rem /= width;
        }
    }
    std::vector<double> weights = sample_weights(wm, n, seed);
    SfpKernel kernel(ps, weights, params);
    std::vector<Edge> edges = sample_edges(ps, weights, kernel, seed, opt);
    Provenance prov;
    prov.model = "sfp";
    prov.seed = seed;
    prov.params = {{"d", std::to_string(params.d)},
                   {"alpha_tilde", fmt(params.alpha_tilde)},
                   {"tau_tilde", fmt(params.tau_tilde)},
                   {"lambda", fmt(params.lambda)},
                   {"m", std::to_string(params.m)},
                   {"gamma_sfp", fmt(params.gamma_sfp())}};
    return SpatialGraph(std::move(ps), std::move(weights), std::move(edges), std::move(prov));
}

SpatialGraph generate_hrg(const HrgParams& params, std::uint64_t seed, const GenOptions& opt) {
    params.validate();
    const std::uint64_t n = params.n;
    const double r_n = params.radius();
    PointSet ps;
    ps.dim = 1;
    ps.side = 1.0;
    ps.metric = Metric::torus;
    ps.coords.resize(n);
    std::vector<double> weights(n);
    Provenance prov;
    prov.model = params.t_h ? "hrg" : "hrg_threshold";
    prov.seed = seed;
    prov.hyp_radius = r_n;
    prov.hyp_phi.resize(n);
    prov.hyp_r.resize(n);
    const double span = std::cosh(params.alpha_h * r_n) - 1.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream rng(seed, StreamKind::vertex_position, i);
        const double x = rng.next_unit() - 0.5;
        RngStream wrng(seed, StreamKind::vertex_weight, i);
        const double r = std::acosh(1.0 + wrng.next_unit_open() * span) / params.alpha_h;
        ps.coords[i] = x;
        weights[i] = std::exp(0.5 * (r_n - r));
        prov.hyp_phi[i] = 2.0 * kPi * x + kPi;
        prov.hyp_r[i] = r;
    }
    HrgKernel kernel(ps, weights, params);
    std::vector<Edge> edges = sample_edges(ps, weights, kernel, seed, opt);
    prov.params = {{"alpha_h", fmt(params.alpha_h)},
                   {"c_h", fmt(params.c_h)},
                   {"n", std::to_string(n)}};
    if (params.t_h) prov.params["t_h"] = fmt(*params.t_h);
    return SpatialGraph(std::move(ps), std::move(weights), std::move(edges), std::move(prov));
}

double hyperbolic_distance(double phi_u, double r_u, double phi_v, double r_v) {
    if (!(r_u >= 0.0 && r_v >= 0.0)) throw std::domain_error("hyperbolic_distance: radii must be >= 0");
    const double sh = std::sin(0.5 * (phi_u - phi_v));
    const double arg = std::cosh(r_u - r_v) + 2.0 * sh * sh * std::sinh(r_u) * std::sinh(r_v);
    if (arg < 1.0 - 1e-12) throw std::runtime_error("hyperbolic_distance: cosh argument below 1");
    return std::acosh(std::max(1.0, arg));
}

SpatialGraph hrg_to_girg(const SpatialGraph& hrg) {
    const Provenance& p = hrg.provenance();
    if (p.hyp_phi.empty()) throw std::invalid_argument("hrg_to_girg: provenance is not hyperbolic");
    PointSet ps;
    ps.dim = 1;
    ps.side = 1.0;
    ps.metric = Metric::torus;
    ps.coords.resize(hrg.vertex_count());
    std::vector<double> weights(hrg.vertex_count());
    for (std::size_t v = 0; v < hrg.vertex_count(); ++v) {
        ps.coords[v] = (p.hyp_phi[v] - kPi) / (2.0 * kPi);
        weights[v] = std::exp(0.5 * (p.hyp_radius - p.hyp_r[v]));
    }
    Provenance prov = p;
    prov.model = "girg_from_" + p.model;
    SpatialGraph out(std::move(ps), std::move(weights), hrg.edges(), std::move(prov));
    if (hrg.has_lengths()) out.set_edge_lengths(hrg.edge_lengths(), p.length_law);
    return out;
}

double hrg_limit_h(double delta, double w1, double w2, double c_h, std::optional<double> t_h) {
    if (!(delta >= 0.0) || !(w1 >= 1.0) || !(w2 >= 1.0))
        throw std::domain_error("hrg_limit_h: need delta >= 0 and weights >= 1");
    if (!t_h) return delta <= std::exp(-c_h / 2.0) * w1 * w2 / kPi ? 1.0 : 0.0;
    if (delta == 0.0) return 1.0;
    const double z = std::pow(std::exp(c_h / 2.0) * delta * kPi / (w1 * w2), 1.0 / *t_h);
    return 1.0 / (1.0 + z);
}

double admissibility_beta(double alpha) {
    return alpha < 2.0 ? 1.0 / (3.0 * (2.0 - alpha) + 2.0) : 1.0 / alpha;
}

LimitConvergenceReport verify_limit_convergence(const HrgParams& params, int samples,
                                                std::uint64_t seed, double constant_cap) {
    params.validate();
    LimitConvergenceReport report;
    const double nn = static_cast<double>(params.n);
    const double r_n = params.radius();
    RngStream rng(seed, StreamKind::experiment, 7177);

    const bool temperature = params.t_h.has_value();
    const double beta = temperature ? admissibility_beta(1.0 / *params.t_h) : 0.5;

    for (int i = 0; i < samples; ++i) {
        // log-uniform over the admissibility windows
        const double w1 = std::exp(rng.next_unit() * beta * std::log(nn));
        const double w2 = std::exp(rng.next_unit() * beta * std::log(nn));
        double delta;
        if (temperature) {
            delta = std::exp((2.0 * rng.next_unit() - 1.0) * beta * std::log(nn));
        } else {
            // probe around the limit threshold radius, the only place the
            // indicators can disagree
            const double dstar = std::exp(-params.c_h / 2.0) * w1 * w2 / kPi;
            delta = dstar * (1.0 + (2.0 * rng.next_unit() - 1.0) * 50.0 / nn);
            if (delta < std::pow(nn, -0.5) || delta > std::pow(nn, 0.5)) continue;
        }
        const double r1 = r_n - 2.0 * std::log(w1);
        const double r2 = r_n - 2.0 * std::log(w2);
        if (r1 < 0.0 || r2 < 0.0) continue;
        const double dphi = 2.0 * kPi * delta / nn; // x-separation delta/n on the circle
        if (dphi > kPi) continue;
        ++report.samples;
        const double sh = std::sin(0.5 * dphi);
        const double cosh_dh = std::cosh(r1 - r2) + 2.0 * sh * sh * std::sinh(r1) * std::sinh(r2);
        const double h = hrg_limit_h(delta, w1, w2, params.c_h, params.t_h);
        if (temperature) {
            const double dh = std::acosh(std::max(1.0, cosh_dh));
            const double pn = 1.0 / (1.0 + std::exp((dh - r_n) / (2.0 * *params.t_h)));
            if (h > 0.0) report.max_error = std::max(report.max_error, std::abs(pn - h) / h);
        } else {
            const double ind_n = cosh_dh <= std::cosh(r_n) ? 1.0 : 0.0;
            if (ind_n != h) {
                const double dstar = std::exp(-params.c_h / 2.0) * w1 * w2 / kPi;
                report.max_error = std::max(report.max_error, std::abs(delta - dstar) / (w1 * w2));
            }
        }
    }
    report.reported_constant = report.max_error * nn;
    report.pass = report.reported_constant <= constant_cap;
    return report;
}

} // namespace sfnet
