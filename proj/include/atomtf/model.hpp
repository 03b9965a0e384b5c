#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

// Core domain types shared by every other module: nuclear configurations,
// radial quadrature grids, semiclassical pressure functions and the
// radial zone classification.

namespace atomtf {

inline constexpr double kPi = 3.14159265358979323846;

// Largest coupling Z*beta for which the one-particle relativistic
// Coulomb operator stays semibounded.
inline constexpr double kCriticalCoupling = 2.0 / kPi;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct singular_point_error : std::domain_error {
    using std::domain_error::domain_error;
};

using Vec3 = std::array<double, 3>;

/// Charges, positions, spin multiplicity, relativistic parameter and
/// electron count of one problem instance.  Immutable after construction.
class NuclearConfiguration {
  public:
    NuclearConfiguration(std::vector<double> charges, std::vector<Vec3> positions,
                         int spin_q, double beta, double electrons);

    /// Convenience constructor for the atomic case (single nucleus at the origin).
    static NuclearConfiguration atom(double Z, int spin_q, double beta, double electrons);

    std::size_t nucleus_count() const { return charge_.size(); }
    double charge(std::size_t m) const { return charge_[m]; }
    const std::vector<double>& charges() const { return charge_; }
    const Vec3& position(std::size_t m) const { return position_[m]; }
    int spin_q() const { return spin_q_; }
    double beta() const { return beta_; }
    double electrons() const { return electrons_; }
    double max_charge() const;

    /// Minimal internuclear distance; +inf for a single nucleus.
    double min_distance() const { return min_distance_; }

    /// Z_m * beta <= 2/pi for every nucleus.
    bool subcritical() const;
    /// Z_m * beta <= 2/pi - eps for every nucleus (recorded with its eps).
    bool strictly_subcritical(double eps) const;

  private:
    std::vector<double> charge_;
    std::vector<Vec3> position_;
    int spin_q_ = 2;
    double beta_ = 0.0;
    double electrons_ = 0.0;
    double min_distance_ = 0.0;
};

/// Total attractive Coulomb potential sum_m Z_m / |x - y_m|.
/// Throws singular_point_error when x coincides with a nucleus.
double coulomb_potential(const NuclearConfiguration& cfg, const Vec3& x);

/// Strictly increasing positive radii with weights for integrals
/// int_0^inf f(r) r^2 dr.  Nodes are log-spaced.
class RadialGrid {
  public:
    RadialGrid() = default;
    static RadialGrid logarithmic(double r_min, double r_max, std::size_t n);
    /// Grid over explicit strictly-increasing nodes (trapezoid weights).
    static RadialGrid from_nodes(std::vector<double> nodes);

    std::size_t size() const { return node_.size(); }
    double node(std::size_t i) const { return node_[i]; }
    double weight(std::size_t i) const { return weight_[i]; }
    const std::vector<double>& nodes() const { return node_; }
    const std::vector<double>& weights() const { return weight_; }
    double r_min() const { return node_.front(); }
    double r_max() const { return node_.back(); }
    double log_step() const { return dx_; }

    /// int f(r) r^2 dr over the grid; f sampled on the nodes.
    double integrate(const std::vector<double>& f) const;
    /// int f(r) dr over the grid (no r^2 factor).
    double integrate_line(const std::vector<double>& f) const;

    /// Relative quadrature error on r |-> e^{-r}; used as a self check.
    double exponential_check() const;

  private:
    std::vector<double> node_;
    std::vector<double> weight_;   // weights for int f r^2 dr
    std::vector<double> lweight_;  // weights for int f dr
    double dx_ = 0.0;
};

enum class PressureKind { TF, TFprime, RTF, RTFprime };

/// Semiclassical pressure functions in the paper's printed normalization:
///   TF'(w)  = (q/6pi^2) w_+^{3/2}
///   TF(w)   = (q/15pi^2) w_+^{5/2}
///   RTF'(w) = (q/6pi^2) w_+^{3/2} (1 + beta^2 w_+)^{3/2}
///   RTF(w)  = antiderivative of RTF' vanishing at 0 (closed form, see .cpp)
double pressure(PressureKind kind, double w, int q, double beta);

/// Same four functions normalized so that they are the exact phase-space
/// integrals of the kinetic symbols used by the spectral module
/// (p^2/2 at beta=0, the massive relativistic symbol otherwise):
///   TF'(w)  = (q/6pi^2) (2w)_+^{3/2}
///   RTF'(w) = (q/6pi^2) (2w + beta^2 w^2)_+^{3/2}
/// These are the versions that cancel spectral traces; the printed forms
/// above differ by a constant factor in the argument.
double pressure_weyl(PressureKind kind, double w, int q, double beta);

/// RTF(w) - TF(w) evaluated without cancellation; printed normalization.
/// Leading behaviour (q/14pi^2) beta^2 w^{7/2} for beta^2 w << 1.
double pressure_gap(double w, int q, double beta);
/// Weyl-normalized gap, used when cancelling spectral traces.
double pressure_gap_weyl(double w, int q, double beta);

/// int_0^w t^{3/2} (1+b t)^{3/2} dt for b >= 0 (series for small b*w,
/// hyperbolic closed form otherwise).  Building block for the RTF forms.
double rtf_antiderivative(double w, double b);

enum class Zone { Singular, Relativistic, Semiclassical };

/// Zone classification of one radius: scales zeta, h and the region label.
struct ZoneLabel {
    Zone zone = Zone::Semiclassical;
    double ell = 0.0;       // distance scale l(x)
    double zeta_sq = 0.0;   // min(Z^{4/3}, Z/l)
    double h = 0.0;         // effective semiclassical parameter 1/sqrt(Z l)
    bool singular = false;      // l <= c / Z
    bool relativistic = false;  // l <= c * beta
    bool semiclassical = false; // l >= c / Z
};

struct ZoneConstants {
    double c_singular = 1.0;
    double c_relativistic = 1.0;
    double c_semiclassical = 1.0;
};

std::vector<ZoneLabel> zone_map(const NuclearConfiguration& cfg,
                                const std::vector<double>& radii,
                                const ZoneConstants& constants = {});

}  // namespace atomtf
