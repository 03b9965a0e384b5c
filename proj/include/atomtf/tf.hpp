#pragma once

#include <filesystem>
#include <vector>

#include "atomtf/model.hpp"

// Atomic Thomas-Fermi solver.  The atomic problem is reduced to the
// dimensionless equation y'' = y^{3/2}/sqrt(x); neutral atoms shoot on the
// initial slope, ions on the cut radius.  Scaling back to physical units:
//   b = (3 pi / (4 sqrt(2) q))^{2/3} Z^{-1/3},
//   W(r) + nu = Z y(r/b) / r,   rho = (sqrt(2) q / (3 pi^2)) (W+nu)_+^{3/2}.

namespace atomtf {

/// Solution of the dimensionless TF equation with dense output.
struct UniversalTF {
    double slope0 = 0.0;    // y'(0)
    double x_cut = 0.0;     // first zero of y (infinity for the neutral branch)
    double slope_cut = 0.0; // y'(x_cut)
    bool neutral = true;
    std::vector<double> xs, ys, yps;  // accepted steps (for interpolation)

    double y(double x) const;
    double yp(double x) const;
    /// J = int_0^x_end y'^2 dx (enters the energy via Sommerfeld's identities).
    double slope_square_integral() const;
};

/// Dimensionless solve; fraction = N/Z in (0, 1]；fraction 1 is the neutral branch.
UniversalTF solve_universal_tf(double fraction);

struct TFSolution {
    RadialGrid grid;
    std::vector<double> rho;  // density on grid
    std::vector<double> W;    // mean-field potential on grid
    double Z = 0.0;
    double N = 0.0;
    int q = 2;
    double nu = 0.0;    // chemical potential <= 0
    double E_TF = 0.0;  // total TF energy
    double b = 0.0;     // length unit of the universal solution
    double r_cut = 0.0; // density support radius (inf when neutral)
    UniversalTF universal;

    /// W + nu evaluated from the universal solution (not grid-interpolated).
    double screened_potential(double r) const;
    double density(double r) const;
    double electron_count() const { return std::min(N, Z); }
};

TFSolution solve_tf_atom(double Z, double N, int q);
TFSolution solve_tf_atom(double Z, double N, int q, const RadialGrid& grid);

/// Coulomb bilinear form D(f,g) = (1/2)*2 * iint f(x) g(y)/|x-y| for radial
/// densities sampled on a shared grid, via Newton's theorem (O(n)).
double coulomb_norm(const RadialGrid& grid, const std::vector<double>& f,
                    const std::vector<double>& g);

/// |x|^{-1} * f for a radial density f (Newton's theorem), on the grid nodes.
std::vector<double> radial_coulomb_potential(const RadialGrid& grid,
                                             const std::vector<double>& f);

/// TF energy functional (3/10)(6 pi^2/q)^{2/3} int rho^{5/3} - int V rho
/// + (1/2) D(rho, rho) for an atomic configuration.
double tf_energy(const TFSolution& sol);

/// Dual route: -int P_weyl^TF(W+nu) - (1/2) D(rho,rho) + nu N, equal to
/// tf_energy for the self-consistent solution.
double tf_energy_dual(const TFSolution& sol);

/// Mollifier profile: normalized indicator of the unit ball with the outer
/// 10% smoothed by a cubic step.
double mollifier_profile(double s);

/// W_eps = V - |x|^{-1} * rho * Phi_eps on the grid of `sol`.
std::vector<double> mollify_potential(const TFSolution& sol, double epsilon);

/// Mollified density rho * Phi_eps on the grid.
std::vector<double> mollify_density(const RadialGrid& grid,
                                    const std::vector<double>& rho, double epsilon);

/// Columnar text serialization, bit-exact round trip.
std::string tf_solution_to_text(const TFSolution& sol);
TFSolution tf_solution_from_text(const std::string& text);

}  // namespace atomtf
