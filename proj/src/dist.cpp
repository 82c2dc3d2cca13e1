#include "sfnet/dist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sfnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Verdict rule constants; see explosion_sum.
constexpr double kExplosiveTermTol = 1e-12;
constexpr double kConservativeFloor = 1e-3;
constexpr double kExplosiveTailTol = 1e-9;
constexpr double kQuadratureTol = 1e-9;
constexpr double kQuadratureCutoff = 40.0;

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(a < b)) return 0.0;
    const double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    return simpson(f, a, b, fa, fm, fb, tol, 48);
}

} // namespace

EdgeLengthDistribution EdgeLengthDistribution::deterministic(double value) {
    if (!(value >= 0.0)) throw std::invalid_argument("deterministic: value must be >= 0");
    EdgeLengthDistribution d;
    d.kind_ = Kind::deterministic;
    d.a_ = value;
    return d;
}

EdgeLengthDistribution EdgeLengthDistribution::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
    EdgeLengthDistribution d;
    d.kind_ = Kind::exponential;
    d.a_ = rate;
    return d;
}

EdgeLengthDistribution EdgeLengthDistribution::uniform(double a, double b) {
    if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("uniform: need 0 <= a < b");
    EdgeLengthDistribution d;
    d.kind_ = Kind::uniform;
    d.a_ = a;
    d.b_ = b;
    return d;
}

EdgeLengthDistribution EdgeLengthDistribution::shifted(EdgeLengthDistribution base, double offset) {
    if (!(offset >= 0.0)) throw std::invalid_argument("shifted: offset must be >= 0");
    EdgeLengthDistribution d;
    d.kind_ = Kind::shifted;
    d.a_ = offset;
    d.base_ = std::make_shared<EdgeLengthDistribution>(std::move(base));
    return d;
}

EdgeLengthDistribution EdgeLengthDistribution::quantile_table(
    std::vector<std::pair<double, double>> points, std::string origin) {
    if (points.empty()) throw std::invalid_argument("quantile_table: no points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!(points[i].first > 0.0) || points[i].first > 1.0)
            throw std::invalid_argument("quantile_table: q out of (0,1]");
        if (!(points[i].second >= 0.0))
            throw std::invalid_argument("quantile_table: value must be >= 0");
        if (i > 0 && !(points[i].first > points[i - 1].first))
            throw std::invalid_argument("quantile_table: q not strictly increasing");
        if (i > 0 && points[i].second < points[i - 1].second)
            throw std::invalid_argument("quantile_table: values must be nondecreasing");
    }
    EdgeLengthDistribution d;
    d.kind_ = Kind::table;
    d.points_ = std::move(points);
    d.origin_ = std::move(origin);
    return d;
}

EdgeLengthDistribution EdgeLengthDistribution::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head == "det") {
        if (colon == std::string::npos) throw std::invalid_argument("det: missing value");
        return deterministic(std::stod(text.substr(colon + 1)));
    }
    if (head == "exp") {
        if (colon == std::string::npos) throw std::invalid_argument("exp: missing rate");
        return exponential(std::stod(text.substr(colon + 1)));
    }
    if (head == "unif") {
        const auto c2 = text.find(':', colon + 1);
        if (colon == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("unif: expected unif:a:b");
        return uniform(std::stod(text.substr(colon + 1, c2 - colon - 1)),
                       std::stod(text.substr(c2 + 1)));
    }
    if (head == "shift") {
        const auto c2 = text.find(':', colon + 1);
        if (colon == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument("shift: expected shift:offset:<inner>");
        const double offset = std::stod(text.substr(colon + 1, c2 - colon - 1));
        return shifted(parse(text.substr(c2 + 1)), offset);
    }
    if (head == "table") {
        if (colon == std::string::npos) throw std::invalid_argument("table: missing path");
        const std::string path = text.substr(colon + 1);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("table: cannot open " + path);
        std::vector<std::pair<double, double>> pts;
        double q, v;
        while (in >> q >> v) pts.emplace_back(q, v);
        return quantile_table(std::move(pts), path);
    }
    throw std::invalid_argument("unknown length law: " + text);
}

std::string EdgeLengthDistribution::spec() const {
    std::ostringstream out;
    out.precision(17);
    switch (kind_) {
        case Kind::deterministic: out << "det:" << a_; break;
        case Kind::exponential: out << "exp:" << a_; break;
        case Kind::uniform: out << "unif:" << a_ << ":" << b_; break;
        case Kind::shifted: out << "shift:" << a_ << ":" << base_->spec(); break;
        case Kind::table:
            if (!origin_.empty()) {
                out << "table:" << origin_;
            } else {
                out << "table<";
                for (const auto& [q, v] : points_) out << q << "," << v << ";";
                out << ">";
            }
            break;
    }
    return out.str();
}

double EdgeLengthDistribution::cdf(double t) const {
    switch (kind_) {
        case Kind::deterministic: return t >= a_ ? 1.0 : 0.0;
        case Kind::exponential: return t < 0.0 ? 0.0 : -std::expm1(-a_ * t);
        case Kind::uniform:
            if (t < a_) return 0.0;
            if (t >= b_) return 1.0;
            return (t - a_) / (b_ - a_);
        case Kind::shifted: return base_->cdf(t - a_);
        case Kind::table: {
            double best = 0.0;
            for (const auto& [q, v] : points_) {
                if (v <= t) best = q;
                else break;
            }
            return best;
        }
    }
    return 0.0;
}

double EdgeLengthDistribution::quantile(double q) const {
    if (!(q > 0.0) || !(q < 1.0)) throw std::domain_error("quantile: q must be in (0,1)");
    return quantile_log(std::log(q));
}

double EdgeLengthDistribution::quantile_sup() const {
    switch (kind_) {
        case Kind::deterministic: return a_;
        case Kind::exponential: return kInf;
        case Kind::uniform: return b_;
        case Kind::shifted: return base_->quantile_sup() + a_;
        case Kind::table: return points_.back().first >= 1.0 ? points_.back().second : kInf;
    }
    return kInf;
}

double EdgeLengthDistribution::quantile_log(double log_q) const {
    if (!(log_q <= 0.0)) throw std::domain_error("quantile_log: log q must be <= 0");
    if (log_q == 0.0) return quantile_sup();
    switch (kind_) {
        case Kind::deterministic: return a_;
        case Kind::exponential: {
            const double q = std::exp(log_q);
            // For q below the underflow threshold the true quantile is below
            // the smallest normal double; report 0.
            return q == 0.0 ? 0.0 : -std::log1p(-q) / a_;
        }
        case Kind::uniform: return a_ + std::exp(log_q) * (b_ - a_);
        case Kind::shifted: return base_->quantile_log(log_q) + a_;
        case Kind::table: {
            const double q = std::exp(log_q);
            for (const auto& [qq, v] : points_)
                if (qq >= q) return v;
            return kInf; // q above the table mass: no finite t has F(t) >= q
        }
    }
    return 0.0;
}

double EdgeLengthDistribution::sample(RngStream& rng) const {
    return quantile_log(std::log(rng.next_unit_open()));
}

bool EdgeLengthDistribution::has_atom_at_zero() const {
    return cdf(0.0) > 0.0;
}

VertexWeightModel VertexWeightModel::pareto(double tau) {
    if (!(tau > 1.0)) throw std::invalid_argument("weight model: tau must be > 1");
    VertexWeightModel m;
    m.tau = tau;
    m.ell = Ell::constant_one;
    return m;
}

VertexWeightModel VertexWeightModel::hrg_induced(double alpha_h, double c_h, std::uint64_t n) {
    if (!(alpha_h > 0.5) || !(alpha_h < 1.0))
        throw std::invalid_argument("weight model: alpha_h must be in (1/2,1)");
    VertexWeightModel m;
    m.tau = 2.0 * alpha_h + 1.0;
    m.ell = Ell::hrg_induced;
    m.alpha_h = alpha_h;
    m.c_h = c_h;
    m.n = n;
    return m;
}

double VertexWeightModel::from_unit(double u) const {
    if (!(u > 0.0) || u > 1.0) throw std::domain_error("weight from_unit: u must be in (0,1]");
    if (ell == Ell::constant_one) return std::pow(u, -1.0 / (tau - 1.0));
    // radius by closed-form inverse CDF, then W = exp((R-r)/2)
    const double r_n = 2.0 * std::log(static_cast<double>(n)) + c_h;
    const double span = std::cosh(alpha_h * r_n) - 1.0;
    const double r = std::acosh(1.0 + u * span) / alpha_h;
    return std::exp(0.5 * (r_n - r));
}

double VertexWeightModel::sample(RngStream& rng) const {
    return from_unit(rng.next_unit_open());
}

double VertexWeightModel::tail(double x) const {
    if (x < 1.0) return 1.0;
    if (ell == Ell::constant_one) return std::pow(x, -(tau - 1.0));
    const double r_n = 2.0 * std::log(static_cast<double>(n)) + c_h;
    const double t = r_n - 2.0 * std::log(x);
    if (t <= 0.0) return 0.0;
    return (std::cosh(alpha_h * t) - 1.0) / (std::cosh(alpha_h * r_n) - 1.0);
}

const char* to_string(ExplosionVerdict v) {
    switch (v) {
        case ExplosionVerdict::explosive: return "explosive";
        case ExplosionVerdict::conservative: return "conservative";
        case ExplosionVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

double quantile(const EdgeLengthDistribution& dist, double q) {
    return dist.quantile(q);
}

CriterionReport explosion_sum(const EdgeLengthDistribution& dist, int k_max, double tau) {
    if (k_max < 1) throw std::invalid_argument("explosion_sum: k_max must be >= 1");
    if (k_max > 700) throw std::invalid_argument("explosion_sum: k_max too large, exp(k) overflows");

    CriterionReport report;
    report.terms_used = k_max;
    report.regime_warning = !(tau > 2.0 && tau < 3.0);

    std::vector<double> terms(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        terms[static_cast<std::size_t>(k - 1)] = dist.quantile_log(-std::exp(static_cast<double>(k)));
        report.partial_sum += terms[static_cast<std::size_t>(k - 1)];
    }

    report.tail_bound_estimate = adaptive_simpson(
        [&dist](double y) { return dist.quantile_log(-std::exp(y)); },
        std::max(1.0, static_cast<double>(k_max)), kQuadratureCutoff, kQuadratureTol);

    const double last = terms.back();
    bool geometric = true;
    const int window = std::min(5, k_max - 1);
    for (int i = 0; i < window; ++i) {
        const double prev = terms[static_cast<std::size_t>(k_max - 2 - i)];
        const double next = terms[static_cast<std::size_t>(k_max - 1 - i)];
        if (!(next <= 0.5 * prev || next == 0.0)) geometric = false;
    }
    const double min_term = *std::min_element(terms.begin(), terms.end());

    if (last < kExplosiveTermTol && geometric && window >= 1 &&
        report.tail_bound_estimate < kExplosiveTailTol) {
        report.verdict = ExplosionVerdict::explosive;
    } else if (min_term >= kConservativeFloor) {
        report.verdict = ExplosionVerdict::conservative;
    } else {
        report.verdict = ExplosionVerdict::inconclusive;
    }
    return report;
}

double sample_weight(const VertexWeightModel& model, RngStream& rng) {
    return model.sample(rng);
}

} // namespace sfnet
