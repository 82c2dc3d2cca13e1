#include "sfnet/boxing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace sfnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
    std::vector<double> center;
    double half = 0.0; // half side in the infinity norm; <= 0 means empty
};

bool inside(const Box& b, const double* p, int d) {
    if (!(b.half > 0.0)) return false;
    for (int a = 0; a < d; ++a)
        if (std::abs(p[a] - b.center[a]) > b.half) return false;
    return true;
}

// volume of the intersection of axis-aligned boxes
double overlap(const std::vector<Box*>& boxes, const std::vector<double>& lo,
               const std::vector<double>& hi, int d) {
    double vol = 1.0;
    for (int a = 0; a < d; ++a) {
        double l = lo[a], h = hi[a];
        for (const Box* b : boxes) {
            l = std::max(l, b->center[a] - b->half);
            h = std::min(h, b->center[a] + b->half);
        }
        if (h <= l) return 0.0;
        vol *= h - l;
    }
    return vol;
}

// Generic annulus: outer box minus up to two hole boxes, clipped to the
// window; cells of side r tile the outer box from its low corner and are
// kept when at least half their volume lies inside. Without a graph the
// construction is pure geometry with an unbounded window.
Annulus build_annulus(const SpatialGraph* g, int d, int k, const Box& outer,
                      std::vector<Box> holes, double r, double d_k) {
    Annulus ann;
    ann.k = k;
    ann.d_k = d_k;
    ann.r_k = r;
    ann.outer_half = outer.half;
    ann.hole_half = holes.empty() ? 0.0 : holes[0].half;
    ann.centre_point = outer.center;

    Box window;
    window.center.assign(d, 0.0);
    window.half = g ? g->points().side / 2.0 : 1e300;

    const std::int64_t cells = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(2.0 * outer.half / r - 1e-9)));
    double total_cells = 1.0;
    for (int a = 0; a < d; ++a) total_cells *= static_cast<double>(cells);
    if (total_cells > 4e6) throw std::invalid_argument("boxing: annulus grid too fine");

    std::vector<double> corner(d);
    for (int a = 0; a < d; ++a) corner[a] = outer.center[a] - outer.half;

    const double keep_volume = 0.5 * std::pow(r, d);
    std::map<std::int64_t, std::size_t> slot_of_cell;
    std::vector<double> lo(d), hi(d);
    for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(total_cells); ++flat) {
        std::int64_t rem = flat;
        for (int a = d - 1; a >= 0; --a) {
            const std::int64_t idx = rem % cells;
            rem /= cells;
            lo[a] = corner[a] + static_cast<double>(idx) * r;
            hi[a] = lo[a] + r;
        }
        Box outer_copy = outer, window_copy = window;
        std::vector<Box*> clip = {&outer_copy, &window_copy};
        double vol = overlap(clip, lo, hi, d);
        // inclusion-exclusion over the holes
        for (std::size_t i = 0; i < holes.size(); ++i) {
            std::vector<Box*> with = clip;
            Box hole = holes[i];
            with.push_back(&hole);
            vol -= overlap(with, lo, hi, d);
        }
        if (holes.size() == 2) {
            std::vector<Box*> with = clip;
            Box h0 = holes[0], h1 = holes[1];
            with.push_back(&h0);
            with.push_back(&h1);
            vol += overlap(with, lo, hi, d);
        }
        if (vol >= keep_volume) {
            slot_of_cell[flat] = ann.subboxes.size();
            Subbox sb;
            sb.lo = lo;
            ann.subboxes.push_back(std::move(sb));
        }
    }

    // membership: inside outer, outside every hole (window is implicit)
    for (std::uint32_t v = 0; g && v < g->vertex_count(); ++v) {
        const double* p = g->points().point(v);
        if (!inside(outer, p, d)) continue;
        bool in_hole = false;
        for (const Box& h : holes)
            if (inside(h, p, d)) in_hole = true;
        if (in_hole) continue;
        ann.vertices.push_back(v);
        std::int64_t flat = 0;
        for (int a = 0; a < d; ++a) {
            std::int64_t idx = static_cast<std::int64_t>(std::floor((p[a] - corner[a]) / r));
            idx = std::clamp<std::int64_t>(idx, 0, cells - 1);
            flat = flat * cells + idx;
        }
        const auto it = slot_of_cell.find(flat);
        if (it != slot_of_cell.end()) ann.subboxes[it->second].members.push_back(v);
    }

    for (Subbox& sb : ann.subboxes) {
        if (sb.members.empty()) {
            ++ann.empty_subboxes;
            continue;
        }
        std::uint32_t best = sb.members.front();
        for (std::uint32_t v : sb.members)
            if (g->weight(v) > g->weight(best)) best = v;
        sb.centre = best;
    }
    return ann;
}

Box annulus_outer(const std::vector<double>& center, double side) {
    Box b;
    b.center = center;
    b.half = side / 2.0;
    return b;
}

} // namespace

std::vector<std::uint32_t> Annulus::centres() const {
    std::vector<std::uint32_t> out;
    for (const Subbox& sb : subboxes)
        if (sb.centre) out.push_back(*sb.centre);
    return out;
}

BoxingConstants boxing_constants(double epsilon, double tau) {
    if (!(tau > 2.0 && tau < 3.0)) throw std::invalid_argument("boxing: tau must be in (2,3)");
    if (!(epsilon > 0.0 && epsilon < 3.0 - tau))
        throw std::invalid_argument("boxing: need 0 < epsilon < 3 - tau so that C > 1");
    BoxingConstants c;
    c.epsilon = epsilon;
    c.tau = tau;
    c.delta = (tau - 2.0) * epsilon / (2.0 * (tau - 1.0));
    c.C = (1.0 - epsilon) / (tau - 2.0);
    c.D = (1.0 - c.delta) * (1.0 - epsilon / (tau - 1.0)) / (1.0 - epsilon) - c.delta / 2.0;
    if (!(c.C > 1.0)) throw std::invalid_argument("boxing: C <= 1");
    if (!(c.D >= 1.0)) throw std::invalid_argument("boxing: D < 1");
    return c;
}

BoxingSystem build_boxing(const SpatialGraph& g, std::vector<double> center, double mu,
                          const BoxingConstants& constants) {
    const int d = g.points().dim;
    if (static_cast<int>(center.size()) != d)
        throw std::invalid_argument("build_boxing: center dimension mismatch");
    if (!(mu > 1.0)) throw std::invalid_argument("build_boxing: mu must be > 1");
    if (g.points().metric != Metric::euclidean_box)
        throw std::invalid_argument("build_boxing: box windows only");
    for (int a = 0; a < d; ++a)
        if (std::abs(center[a]) > g.points().side / 2.0)
            throw std::invalid_argument("build_boxing: center outside the window");

    BoxingSystem sys;
    sys.center = center;
    sys.mu = mu;
    sys.d = d;
    sys.constants = constants;
    sys.graph_vertices = g.vertex_count();

    const double n = static_cast<double>(g.vertex_count());
    const auto d_k = [&](int k) {
        return std::pow(mu, constants.D * std::pow(constants.C, k) / d);
    };
    const auto r_k = [&](int k) { return std::pow(mu, std::pow(constants.C, k) / d); };

    int k_max = -1;
    while (std::pow(d_k(k_max + 1), d) <= n) ++k_max;
    if (k_max < 1) throw std::invalid_argument("build_boxing: window too small for mu (k_max < 1)");
    sys.k_max = k_max;

    for (int k = 0; k <= k_max; ++k) {
        Box outer = annulus_outer(center, d_k(k));
        std::vector<Box> holes;
        if (k > 0) holes.push_back(annulus_outer(center, d_k(k - 1)));
        sys.annuli.push_back(build_annulus(&g, d, k, outer, std::move(holes), r_k(k), d_k(k)));
    }
    return sys;
}

std::vector<std::size_t> boxing_subbox_counts(int d, double mu, const BoxingConstants& constants,
                                              int k_hi) {
    if (!(mu > 1.0) || d < 1 || k_hi < 0)
        throw std::invalid_argument("boxing_subbox_counts: bad parameters");
    std::vector<std::size_t> out;
    std::vector<double> origin(d, 0.0);
    for (int k = 0; k <= k_hi; ++k) {
        const double dk = std::pow(mu, constants.D * std::pow(constants.C, k) / d);
        const double rk = std::pow(mu, std::pow(constants.C, k) / d);
        Box outer = annulus_outer(origin, dk);
        std::vector<Box> holes;
        if (k > 0)
            holes.push_back(
                annulus_outer(origin, std::pow(mu, constants.D * std::pow(constants.C, k - 1) / d)));
        out.push_back(build_annulus(nullptr, d, k, outer, std::move(holes), rk, dk).b_k());
    }
    return out;
}

namespace {

std::size_t count_adjacent(const SpatialGraph& g, std::uint32_t c,
                           const std::vector<std::uint32_t>& centres) {
    std::size_t n = 0;
    for (std::uint32_t other : centres)
        if (other != c && g.has_edge(c, other)) ++n;
    return n;
}

} // namespace

std::vector<AnnulusEventReport> verify_events(const SpatialGraph& g, const BoxingSystem& sys,
                                              double delta) {
    if (g.vertex_count() != sys.graph_vertices)
        throw std::logic_error("verify_events: system was built over a different graph");
    std::vector<AnnulusEventReport> out;
    const double log_mu = std::log(sys.mu);
    for (int k = 0; k <= sys.k_max; ++k) {
        const Annulus& ann = sys.annuli[static_cast<std::size_t>(k)];
        AnnulusEventReport rep;
        rep.k = k;
        rep.empty_subboxes = ann.empty_subboxes;
        const double ck = std::pow(sys.constants.C, k);
        rep.weight_lo = std::exp(ck * (1.0 - delta) / (sys.constants.tau - 1.0) * log_mu);
        rep.weight_hi = std::exp(ck * (1.0 + delta) / (sys.constants.tau - 1.0) * log_mu);
        rep.required_n = std::exp(ck * (sys.constants.D - 1.0) * log_mu / 2.0) / 2.0;
        rep.has_next = k < sys.k_max;

        const auto centres = ann.centres();
        rep.f1 = !centres.empty();
        rep.min_centre_weight = kInf;
        rep.max_centre_weight = 0.0;
        for (std::uint32_t c : centres) {
            rep.min_centre_weight = std::min(rep.min_centre_weight, g.weight(c));
            rep.max_centre_weight = std::max(rep.max_centre_weight, g.weight(c));
            if (g.weight(c) < rep.weight_lo || g.weight(c) > rep.weight_hi) rep.f1 = false;
        }

        rep.min_n_same = SIZE_MAX;
        rep.min_n_next = SIZE_MAX;
        const std::vector<std::uint32_t> next_centres =
            rep.has_next ? sys.annuli[static_cast<std::size_t>(k) + 1].centres()
                         : std::vector<std::uint32_t>{};
        for (std::uint32_t c : centres) {
            rep.min_n_same = std::min(rep.min_n_same, count_adjacent(g, c, centres));
            if (rep.has_next)
                rep.min_n_next = std::min(rep.min_n_next, count_adjacent(g, c, next_centres));
        }
        if (centres.empty()) {
            rep.f2 = false;
            rep.min_n_same = 0;
            rep.min_n_next = 0;
        } else {
            const double need = rep.required_n;
            rep.f2 = static_cast<double>(rep.min_n_same) >= need &&
                     (!rep.has_next || static_cast<double>(rep.min_n_next) >= need);
        }
        out.push_back(std::move(rep));
    }
    return out;
}

namespace {

// minimum-length edge from `from` into the given centre set;
// ties broken by the smaller centre id (centres iterate ascending)
struct Step {
    bool found = false;
    std::uint32_t to = 0;
    double length = 0.0;
};

Step min_edge_into(const SpatialGraph& g, std::uint32_t from,
                   const std::vector<std::uint32_t>& centres) {
    Step s;
    for (std::uint32_t c : centres) {
        if (c == from) continue;
        const auto ei = g.edge_index(from, c);
        if (!ei) continue;
        const double l = g.edge_length(*ei);
        if (!s.found || l < s.length) {
            s.found = true;
            s.to = c;
            s.length = l;
        }
    }
    return s;
}

std::optional<std::uint32_t> max_weight_vertex(const SpatialGraph& g,
                                               const std::vector<std::uint32_t>& vertices) {
    std::optional<std::uint32_t> best;
    for (std::uint32_t v : vertices)
        if (!best || g.weight(v) > g.weight(*best)) best = v;
    return best;
}

// walk from `start` through the centre sets of the given annuli, always by
// the minimum-length edge
GreedyPathResult walk_centres(const SpatialGraph& g, std::uint32_t start,
                              const std::vector<const Annulus*>& annuli) {
    GreedyPathResult res;
    res.path.push_back(start);
    res.reached_k = 0;
    std::uint32_t current = start;
    for (const Annulus* ann : annuli) {
        const Step s = min_edge_into(g, current, ann->centres());
        if (!s.found) {
            res.truncated = true;
            return res;
        }
        res.path.push_back(s.to);
        res.total_length += s.length;
        res.reached_k = ann->k;
        current = s.to;
    }
    return res;
}

} // namespace

GreedyPathResult greedy_centre_path(const SpatialGraph& g, const BoxingSystem& sys) {
    if (!g.has_lengths()) throw std::logic_error("greedy_centre_path: lengths required");
    if (g.vertex_count() != sys.graph_vertices)
        throw std::logic_error("greedy_centre_path: system was built over a different graph");
    const auto start = max_weight_vertex(g, sys.annuli.front().vertices);
    if (!start) {
        GreedyPathResult empty;
        empty.truncated = true;
        return empty;
    }
    std::vector<const Annulus*> rest;
    for (int k = 1; k <= sys.k_max; ++k) rest.push_back(&sys.annuli[static_cast<std::size_t>(k)]);
    return walk_centres(g, *start, rest);
}

BridgeResult bridge_systems(const SpatialGraph& g, const BoxingSystem& sysA,
                            const BoxingSystem& sysB) {
    if (!(sysA.mu <= sysB.mu)) throw std::logic_error("bridge_systems: require sysA.mu <= sysB.mu");
    if (sysA.graph_vertices != g.vertex_count() || sysB.graph_vertices != g.vertex_count())
        throw std::logic_error("bridge_systems: systems over different graphs");
    if (!g.has_lengths()) throw std::logic_error("bridge_systems: lengths required");
    const int d = sysA.d;
    const BoxingConstants& cons = sysB.constants;

    BridgeResult out;
    // rebase index: first annulus of A at least as large as annulus 1 of B
    const double ratio =
        (std::log(std::log(sysB.mu)) - std::log(std::log(sysA.mu))) / std::log(cons.C);
    out.r = std::max(1, static_cast<int>(std::ceil(ratio - 1e-12)));

    double sep2 = 0.0;
    for (int a = 0; a < d; ++a) {
        const double dd = sysA.center[a] - sysB.center[a];
        sep2 += dd * dd;
    }
    const double sep = std::sqrt(sep2);

    const auto d_k2 = [&](int k) {
        return std::pow(sysB.mu, cons.D * std::pow(cons.C, k) / d);
    };
    const auto r_k2 = [&](int k) { return std::pow(sysB.mu, std::pow(cons.C, k) / d); };

    int k_star = -1;
    while (d_k2(k_star + 1) < sep / (2.0 * std::sqrt(static_cast<double>(d)))) ++k_star;
    out.k_star = k_star;
    if (k_star < 0) return out; // boxes overlap immediately; no merged construction

    // modified System-A: original annuli below r, then B-sized annuli around A's center
    if (out.r - 1 > sysA.k_max) {
        out.found = false;
        return out; // A too shallow to reach the rebase point
    }
    std::vector<Annulus> merged_a;
    double prev_half = sysA.annuli[static_cast<std::size_t>(out.r - 1)].outer_half;
    for (int j = 0; j <= k_star; ++j) {
        Box outer;
        outer.center = sysA.center;
        outer.half = d_k2(j) / 2.0;
        // equal bases make the first rebased box coincide with the last
        // original one; a zero-volume annulus contributes no step
        if (outer.half <= prev_half * (1.0 + 1e-12)) continue;
        std::vector<Box> holes;
        Box hole;
        hole.center = sysA.center;
        hole.half = prev_half;
        holes.push_back(hole);
        merged_a.push_back(
            build_annulus(&g, d, out.r + j, outer, std::move(holes), r_k2(j), d_k2(j)));
        prev_half = outer.half;
    }

    // enclosing box of index k_star + 1, centred midway
    Box outer_star;
    outer_star.center.resize(d);
    for (int a = 0; a < d; ++a) outer_star.center[a] = 0.5 * (sysA.center[a] + sysB.center[a]);
    const double d_star = std::pow(
        (std::sqrt(static_cast<double>(d)) / 2.0 + 1.0) *
            std::pow(sysB.mu, cons.D * std::pow(cons.C, k_star + 1)),
        1.0 / d);
    outer_star.half = d_star / 2.0;
    std::vector<Box> holes_star;
    {
        if (k_star > sysB.k_max) {
            out.found = false;
            return out; // B too shallow
        }
        Box ha;
        ha.center = sysA.center;
        ha.half = prev_half; // outermost covered box of the merged System-A
        Box hb;
        hb.center = sysB.center;
        hb.half = sysB.annuli[static_cast<std::size_t>(k_star)].outer_half;
        holes_star.push_back(ha);
        holes_star.push_back(hb);
    }
    const double r_star = std::pow(std::pow(sysB.mu, std::pow(cons.C, k_star + 1)), 1.0 / d);
    Annulus gamma_star =
        build_annulus(&g, d, k_star + 1, outer_star, std::move(holes_star), r_star, d_star);

    // greedy walks of both systems into the merged top annulus
    const auto start_a = max_weight_vertex(g, sysA.annuli.front().vertices);
    const auto start_b = max_weight_vertex(g, sysB.annuli.front().vertices);
    if (!start_a || !start_b) return out;

    std::vector<const Annulus*> walk_a;
    for (int k = 1; k <= std::min(out.r - 1, sysA.k_max); ++k)
        walk_a.push_back(&sysA.annuli[static_cast<std::size_t>(k)]);
    for (const Annulus& ann : merged_a) walk_a.push_back(&ann);
    walk_a.push_back(&gamma_star);
    const GreedyPathResult path_a = walk_centres(g, *start_a, walk_a);
    if (path_a.truncated) return out;

    std::vector<const Annulus*> walk_b;
    for (int k = 1; k <= std::min(k_star, sysB.k_max); ++k)
        walk_b.push_back(&sysB.annuli[static_cast<std::size_t>(k)]);
    walk_b.push_back(&gamma_star);
    const GreedyPathResult path_b = walk_centres(g, *start_b, walk_b);
    if (path_b.truncated) return out;

    // join the two endpoints inside the top annulus with at most two edges
    const std::uint32_t ca = path_a.path.back();
    const std::uint32_t cb = path_b.path.back();
    double bridge_len = kInf;
    std::vector<std::uint32_t> bridge; // strictly between ca and cb
    if (ca == cb) {
        bridge_len = 0.0;
    } else if (const auto ei = g.edge_index(ca, cb)) {
        bridge_len = g.edge_length(*ei);
    } else {
        for (std::uint32_t c : gamma_star.centres()) {
            if (c == ca || c == cb) continue;
            const auto e1 = g.edge_index(ca, c);
            const auto e2 = g.edge_index(c, cb);
            if (e1 && e2 && g.edge_length(*e1) + g.edge_length(*e2) < bridge_len) {
                bridge_len = g.edge_length(*e1) + g.edge_length(*e2);
                bridge = {c};
            }
        }
    }
    if (!std::isfinite(bridge_len)) return out;

    out.found = true;
    out.total_length = path_a.total_length + bridge_len + path_b.total_length;
    out.path = path_a.path;
    out.path.insert(out.path.end(), bridge.begin(), bridge.end());
    for (auto it = path_b.path.rbegin(); it != path_b.path.rend(); ++it) {
        if (*it == ca && out.path.back() == ca) continue; // merged endpoint
        out.path.push_back(*it);
    }
    return out;
}

double epsilon_k_bound(const EdgeLengthDistribution& dist, double K,
                       const BoxingConstants& constants, double gamma_tilde, double c) {
    if (!(K > 1.0)) throw std::invalid_argument("epsilon_k_bound: K must be > 1");
    if (!(gamma_tilde > 0.0 && gamma_tilde < 1.0))
        throw std::invalid_argument("epsilon_k_bound: gamma_tilde must be in (0,1)");
    const double base = (1.0 - constants.delta) * std::log(K) / (constants.tau - 1.0);
    double sum = 0.0;
    double term = kInf;
    constexpr int kCap = 200;
    for (int k = 0; k < kCap; ++k) {
        const double log_q = -c * std::pow(constants.C, gamma_tilde * k) *
                             std::pow(base, gamma_tilde);
        term = dist.quantile_log(std::min(0.0, log_q));
        if (!std::isfinite(term)) return kInf;
        sum += term;
        if (term < 1e-18 && k >= 8) return 3.0 * sum;
    }
    // terms are nonincreasing; surviving the cap means they never decayed
    return term >= 1e-12 ? kInf : 3.0 * sum;
}

} // namespace sfnet

