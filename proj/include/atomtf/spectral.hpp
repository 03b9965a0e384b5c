#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "atomtf/model.hpp"

// Radial spectral engine.  Non-relativistic channels are discretized in
// position space on a log grid (symmetric tridiagonal, graded-safe Sturm
// bisection).  Relativistic (Chandrasekhar) and massless channels are
// discretized in momentum space where the kinetic symbol is diagonal and
// the Coulomb coupling is the Legendre Q_l kernel.

namespace atomtf {

enum class KineticKind {
    NonRelativistic,   // p^2 / 2
    Chandrasekhar,     // sqrt(p^2/beta^2 + 1/beta^4) - 1/beta^2
    Massless,          // |p|  (used by the Appendix inequality checks)
};

/// Radial potential sampled on demand.
using RadialFn = std::function<double(double)>;

struct RadialOperatorSpec {
    KineticKind kind = KineticKind::NonRelativistic;
    double beta = 0.0;       // Chandrasekhar parameter
    int channel = 0;         // angular momentum l >= 0
    int q = 1;               // spin multiplicity (degeneracy q(2l+1))
    double coulomb_Z = 0.0;  // -Z/r part, exact kernel in momentum space
    RadialFn potential;      // optional additional radial potential (may be null)
    // fractional kinetic term  -A p^{2s}, used by the critical-hydrogen check
    double frac_A = 0.0;
    double frac_s = 0.0;

    int degeneracy() const { return q * (2 * channel + 1); }
};

/// Eigenvalues/eigenfunctions of one angular momentum channel.
struct ChannelSpectrum {
    int channel = 0;
    int degeneracy = 1;
    std::vector<double> eigenvalues;          // sorted ascending
    std::vector<std::vector<double>> radial;  // reduced u_j(r) on `grid` (may be empty)
    std::vector<double> grid;                 // r nodes for `radial`
    std::string discretization;               // grid descriptor used
};

// ---------------------------------------------------------------------------
// Position-space log-grid channels (non-relativistic kinetic energy).

struct TridiagonalChannel {
    std::vector<double> x;     // uniform in x = ln r (interior nodes)
    std::vector<double> r;     // e^x
    double dx = 0.0;
    std::vector<double> diag;
    std::vector<double> off;
    int channel = 0;
};

/// Assemble -1/2 d^2/dr^2 + l(l+1)/(2 r^2) + V(r) on u with u(r_min)=u(r_max)=0.
/// Transformed to x = ln r with unit metric; symmetric within round-off.
TridiagonalChannel build_radial_channel(int l, const RadialFn& V, double r_min,
                                        double r_max, std::size_t nodes);

/// All eigenvalues of the channel in (lambda_min, lambda_cut), with optional
/// eigenvectors (normalized so that sum u_i^2 dx_weight = 1, i.e. int u^2 dr = 1).
/// Graded-safe: long double Sturm bisection + inverse iteration.
void solve_tridiagonal(const TridiagonalChannel& ch, double lambda_min,
                       double lambda_cut, std::vector<double>& eigenvalues,
                       std::vector<std::vector<double>>* eigenvectors);

// ---------------------------------------------------------------------------
// Momentum-space channels.

struct MomentumGrid {
    std::vector<double> p;
    std::vector<double> w;  // weights for int f dp (trapezoid in ln p)
    static MomentumGrid logarithmic(double p_min, double p_max, std::size_t n);
};

/// Legendre function of the second kind Q_l(x), x > 1.
double legendre_q(int l, double x);

/// Dense symmetric channel matrix: kinetic multiplier + Coulomb Q_l kernel
/// (+ optional tabulated potential through Fourier-Bessel transforms,
///  + optional -A p^{2s} term).  Rejects supercritical Coulomb coupling.
struct MomentumChannel {
    MomentumGrid grid;
    std::vector<double> matrix;  // row-major n x n, symmetric
    int channel = 0;
    std::size_t n = 0;
};

MomentumChannel build_momentum_channel(const RadialOperatorSpec& spec,
                                       const MomentumGrid& grid,
                                       const RadialGrid* r_quadrature = nullptr);

/// Eigenpairs below lambda_cut of a dense symmetric channel (LAPACK dsyevr).
void solve_momentum(const MomentumChannel& ch, double lambda_cut,
                    std::vector<double>& eigenvalues,
                    std::vector<std::vector<double>>* eigenvectors);

/// Reduced position-space orbital u(r) from a momentum eigenvector
/// (unitary radial Hankel transform of order l).
std::vector<double> momentum_to_radial(const MomentumGrid& grid,
                                       const std::vector<double>& coeffs, int l,
                                       const std::vector<double>& r);

/// Spherical Bessel j_l(x), stable for the l/x ranges used here.
double sph_bessel_j(int l, double x);

// ---------------------------------------------------------------------------
// Whole-operator drivers.

struct OperatorOptions {
    double r_min = 1e-7;
    double r_max = 300.0;
    std::size_t nodes = 12000;
    double p_min = 1e-3;
    double p_max = 1e4;
    std::size_t momentum_nodes = 900;
    int L_max = 60;
    double lambda_floor = -1e30;  // lower edge of the searched window
    int jobs = 1;
};

struct TraceResult {
    double value = 0.0;       // sum over channels of q(2l+1) * sum_j min(lambda_j,0)
    double tail_estimate = 0.0;  // extrapolated |contribution| of channels > L_max
    int channels_used = 0;
    std::vector<double> per_channel;  // q(2l+1)-weighted channel sums
};

/// Sum of negative eigenvalues (<= 0) of the operator with potential
/// -W(r) + lambda ... i.e. H = T - W + lambda; W is the attractive strength:
/// the operator is  T - W(r) + lambda  acting channel-wise.
TraceResult negative_trace(KineticKind kind, double beta, const RadialFn& W,
                           double lambda, int q, const OperatorOptions& opt);

/// Number of eigenvalues below lambda (with degeneracy), same conventions.
TraceResult counting_function(KineticKind kind, double beta, const RadialFn& W,
                              double lambda, int q, const OperatorOptions& opt);

/// Channel-resolved bound-state data for density diagnostics.
struct BoundChannels {
    std::vector<ChannelSpectrum> channels;  // l = 0..L
    std::vector<double> r;                  // shared radial grid
};

/// All bound states below lambda_cut for every channel l <= L_max,
/// radial functions tabulated on the returned r grid.
BoundChannels bound_states(KineticKind kind, double beta, const RadialFn& W,
                           double lambda_cut, const OperatorOptions& opt,
                           const std::vector<double>& r);

/// e(x,x,lambda) as a radial density (spin and angular factors included):
/// e(r) = sum_{lam_j <= lambda} deg_j |phi_j|^2 = q sum_l (2l+1)/(4 pi r^2) u^2.
std::vector<double> density_diagonal(const BoundChannels& bc, double lambda);

/// e^1(x,x,0) radial density: |lambda_j|-weighted version of the above.
std::vector<double> e1_diagonal(const BoundChannels& bc);

}  // namespace atomtf
