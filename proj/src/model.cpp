#include "atomtf/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atomtf {

NuclearConfiguration::NuclearConfiguration(std::vector<double> charges,
                                           std::vector<Vec3> positions, int spin_q,
                                           double beta, double electrons)
    : charge_(std::move(charges)),
      position_(std::move(positions)),
      spin_q_(spin_q),
      beta_(beta),
      electrons_(electrons) {
    if (charge_.empty() || charge_.size() != position_.size())
        throw config_error("configuration needs matching, non-empty charge/position lists");
    for (double z : charge_)
        if (!(z > 0.0)) throw config_error("nuclear charges must be positive");
    if (spin_q_ < 1) throw config_error("spin multiplicity q must be a positive integer");
    if (beta_ < 0.0) throw config_error("relativistic parameter beta must be >= 0");
    if (!(electrons_ > 0.0)) throw config_error("electron count N must be positive");

    min_distance_ = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < position_.size(); ++m)
        for (std::size_t k = m + 1; k < position_.size(); ++k) {
            const auto& a = position_[m];
            const auto& b = position_[k];
            double d = std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
            min_distance_ = std::min(min_distance_, d);
        }
    if (position_.size() >= 2 && !(min_distance_ > 0.0))
        throw config_error("nuclei must sit at pairwise distinct positions");
}

NuclearConfiguration NuclearConfiguration::atom(double Z, int spin_q, double beta,
                                                double electrons) {
    return NuclearConfiguration({Z}, {Vec3{0.0, 0.0, 0.0}}, spin_q, beta, electrons);
}

double NuclearConfiguration::max_charge() const {
    return *std::max_element(charge_.begin(), charge_.end());
}

bool NuclearConfiguration::subcritical() const {
    for (double z : charge_)
        if (z * beta_ > kCriticalCoupling) return false;
    return true;
}

bool NuclearConfiguration::strictly_subcritical(double eps) const {
    for (double z : charge_)
        if (z * beta_ > kCriticalCoupling - eps) return false;
    return true;
}

double coulomb_potential(const NuclearConfiguration& cfg, const Vec3& x) {
    double v = 0.0;
    for (std::size_t m = 0; m < cfg.nucleus_count(); ++m) {
        const Vec3& y = cfg.position(m);
        double d = std::hypot(x[0] - y[0], x[1] - y[1], x[2] - y[2]);
        if (d == 0.0)
            throw singular_point_error("Coulomb potential evaluated at a nucleus position");
        v += cfg.charge(m) / d;
    }
    return v;
}

RadialGrid RadialGrid::logarithmic(double r_min, double r_max, std::size_t n) {
    if (!(r_min > 0.0) || !(r_max > r_min) || n < 8)
        throw config_error("radial grid needs 0 < r_min < r_max and at least 8 nodes");
    std::vector<double> nodes(n);
    const double x0 = std::log(r_min);
    const double dx = (std::log(r_max) - x0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = std::exp(x0 + dx * static_cast<double>(i));
    return from_nodes(std::move(nodes));
}

RadialGrid RadialGrid::from_nodes(std::vector<double> nodes) {
    const std::size_t n = nodes.size();
    if (n < 8) throw config_error("radial grid needs at least 8 nodes");
    for (std::size_t i = 0; i < n; ++i)
        if (!(nodes[i] > 0.0) || (i && !(nodes[i] > nodes[i - 1])))
            throw config_error("radial grid nodes must be positive and strictly increasing");
    RadialGrid g;
    g.node_ = std::move(nodes);
    g.weight_.resize(n);
    g.lweight_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = i == 0 ? g.node_[0] : g.node_[i - 1];
        const double hi = i + 1 == n ? g.node_[n - 1] : g.node_[i + 1];
        const double tw = 0.5 * (hi - lo);  // trapezoid in r
        g.lweight_[i] = tw;
        g.weight_[i] = tw * g.node_[i] * g.node_[i];
    }
    g.dx_ = std::log(g.node_.back() / g.node_.front()) / static_cast<double>(n - 1);
    return g;
}

double RadialGrid::integrate(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < node_.size(); ++i) s += f[i] * weight_[i];
    return s;
}

double RadialGrid::integrate_line(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < node_.size(); ++i) s += f[i] * lweight_[i];
    return s;
}

double RadialGrid::exponential_check() const {
    std::vector<double> f(node_.size());
    for (std::size_t i = 0; i < node_.size(); ++i) f[i] = std::exp(-node_[i]);
    // int_0^inf e^{-r} r^2 dr = 2, corrected for the truncated head [0, r_min].
    double head = node_.front() * node_.front() * node_.front() / 3.0;
    return std::abs(integrate(f) + head - 2.0) / 2.0;
}

namespace {

// Binomial series of int_0^w t^{3/2}(1+bt)^{3/2} dt, valid for |b w| < 1:
//   w^{5/2} sum_k C(3/2,k) (b w)^k * 2/(5+2k)
double rtf_antiderivative_series(double w, double bw) {
    double coeff = 1.0;  // C(3/2, k)
    double pw = 1.0;     // (b w)^k
    double sum = 0.0;
    for (int k = 0; k < 64; ++k) {
        double term = coeff * pw * 2.0 / (5.0 + 2.0 * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        coeff *= (1.5 - k) / (k + 1.0);
        pw *= bw;
    }
    return std::pow(w, 2.5) * sum;
}

// Same series with the k=0 term (the pure TF part) removed.
double rtf_gap_series(double w, double bw) {
    double coeff = 1.5;  // C(3/2, 1)
    double pw = bw;
    double sum = 0.0;
    for (int k = 1; k < 64; ++k) {
        double term = coeff * pw * 2.0 / (5.0 + 2.0 * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        coeff *= (1.5 - k) / (k + 1.0);
        pw *= bw;
    }
    return std::pow(w, 2.5) * sum;
}

// Hyperbolic closed form: with theta = asinh(sqrt(b w)),
//   int_0^w t^{3/2}(1+bt)^{3/2} dt
//     = b^{-5/2} [ sinh(8 theta)/512 - sinh(4 theta)/64 + 3 theta/64 ].
double rtf_antiderivative_closed(double w, double b) {
    const double theta = std::asinh(std::sqrt(b * w));
    return (std::sinh(8.0 * theta) / 512.0 - std::sinh(4.0 * theta) / 64.0 +
            3.0 * theta / 64.0) /
           (b * b * std::sqrt(b));
}

}  // namespace

double rtf_antiderivative(double w, double b) {
    if (w <= 0.0) return 0.0;
    if (b <= 0.0) return 0.4 * std::pow(w, 2.5);
    const double bw = b * w;
    return bw <= 0.5 ? rtf_antiderivative_series(w, bw) : rtf_antiderivative_closed(w, b);
}

double pressure(PressureKind kind, double w, int q, double beta) {
    const double wp = std::max(w, 0.0);
    const double c = q / (6.0 * kPi * kPi);
    switch (kind) {
        case PressureKind::TFprime:
            return c * std::pow(wp, 1.5);
        case PressureKind::TF:
            return (q / (15.0 * kPi * kPi)) * std::pow(wp, 2.5);
        case PressureKind::RTFprime:
            return c * std::pow(wp, 1.5) * std::pow(1.0 + beta * beta * wp, 1.5);
        case PressureKind::RTF:
            return c * rtf_antiderivative(wp, beta * beta);
    }
    return 0.0;
}

double pressure_weyl(PressureKind kind, double w, int q, double beta) {
    const double wp = std::max(w, 0.0);
    const double c = q / (6.0 * kPi * kPi);
    const double two32 = 2.0 * std::sqrt(2.0);
    switch (kind) {
        case PressureKind::TFprime:
            return c * std::pow(2.0 * wp, 1.5);
        case PressureKind::TF:
            return (q / (15.0 * kPi * kPi)) * two32 * std::pow(wp, 2.5);
        case PressureKind::RTFprime:
            return c * std::pow(wp * (2.0 + beta * beta * wp), 1.5);
        case PressureKind::RTF:
            return c * two32 * rtf_antiderivative(wp, 0.5 * beta * beta);
    }
    return 0.0;
}

double pressure_gap(double w, int q, double beta) {
    const double wp = std::max(w, 0.0);
    if (wp == 0.0 || beta == 0.0) return 0.0;
    const double c = q / (6.0 * kPi * kPi);
    const double bw = beta * beta * wp;
    if (bw <= 0.5) return c * rtf_gap_series(wp, bw);
    return c * (rtf_antiderivative_closed(wp, beta * beta) - 0.4 * std::pow(wp, 2.5));
}

double pressure_gap_weyl(double w, int q, double beta) {
    const double wp = std::max(w, 0.0);
    if (wp == 0.0 || beta == 0.0) return 0.0;
    const double c = q * 2.0 * std::sqrt(2.0) / (6.0 * kPi * kPi);
    const double b = 0.5 * beta * beta;
    if (b * wp <= 0.5) return c * rtf_gap_series(wp, b * wp);
    return c * (rtf_antiderivative_closed(wp, b) - 0.4 * std::pow(wp, 2.5));
}

std::vector<ZoneLabel> zone_map(const NuclearConfiguration& cfg,
                                const std::vector<double>& radii,
                                const ZoneConstants& constants) {
    const double Z = cfg.max_charge();
    std::vector<ZoneLabel> out;
    out.reserve(radii.size());
    for (double ell : radii) {
        if (!(ell > 0.0)) throw config_error("zone_map radii must be positive");
        ZoneLabel z;
        z.ell = ell;
        z.zeta_sq = std::min(std::pow(Z, 4.0 / 3.0), Z / ell);
        // h uses the local momentum scale sqrt(Z/l); with that choice
        // h <= 1 holds exactly on l >= 1/Z.
        z.h = 1.0 / std::sqrt(Z * ell);
        z.singular = ell <= constants.c_singular / Z;
        z.relativistic = cfg.beta() > 0.0 && ell <= constants.c_relativistic * cfg.beta();
        z.semiclassical = ell >= constants.c_semiclassical / Z;
        z.zone = z.relativistic ? Zone::Relativistic
                                : (z.singular ? Zone::Singular : Zone::Semiclassical);
        out.push_back(z);
    }
    return out;
}

}  // namespace atomtf
