#pragma once

#include <vector>

#include "atomtf/model.hpp"
#include "atomtf/spectral.hpp"
#include "atomtf/tf.hpp"

// Ground-state energy sandwich: Slater-determinant upper bound and the
// correlation-inequality lower bound, sharing the spectral engine.

namespace atomtf {

struct Orbital {
    int l = 0;
    int index = 0;          // radial quantum number within the channel
    double eigenvalue = 0.0;
    double occupancy = 0.0;  // electrons in this (l, index) level, <= q(2l+1)
    std::vector<double> u;   // reduced radial function on the state grid
};

/// Slater determinant surrogate: the N lowest one-body eigenstates of H_W.
struct SlaterState {
    std::vector<Orbital> orbitals;
    std::vector<double> r;      // shared radial grid
    std::vector<double> rho;    // one-particle density on r
    double N = 0.0;             // electrons actually placed (N' <= requested)
    int q = 2;
    double trace_sum = 0.0;     // sum of occupied eigenvalues

    /// Per-spin fill fraction of an orbital (spin channels filled in order).
    double spin_fill(std::size_t orbital, int sigma) const;
};

/// Fill N electrons into the lowest eigenvalues of the operator T - W.
SlaterState build_slater_state(KineticKind kind, double beta, const RadialFn& W,
                               double N, int q, const OperatorOptions& opt,
                               const std::vector<double>& r);

/// (1/2) iint |x-y|^{-1} tr(e_N^dag e_N) by multipole expansion in the
/// orbital channel basis.  Exact for the closed-shell angular structure.
double exchange_integral(const SlaterState& state);

/// Squared Wigner 3j (l1 l2 k; 0 0 0) coefficient.
double threej000_squared(int l1, int l2, int k);

struct BoundOptions {
    double C0 = 1.0;          // correlation constant, C(q) = C0 q^{2/3}
    double lambda = 0.0;      // spectral shift (defaults to nu)
    OperatorOptions spectral;
};

struct BoundResult {
    double value = 0.0;
    double trace = 0.0;       // Tr(H^-_{W+lambda})
    double coulomb = 0.0;     // (1/2) D(rho, rho)
    double exchange = 0.0;    // upper bound only
    double d_proximity = 0.0; // (1/2) D(rho_Psi - rho, rho_Psi - rho), upper only
    double correction = 0.0;  // -C N / eps (lower) or counting slack (upper)
    double N_used = 0.0;
};

/// E_N >= Tr(H^-_{W_eps+lambda}) + lambda N - (1/2) D(rho,rho) - C0 q^{2/3} N / eps.
BoundResult lower_bound(const NuclearConfiguration& cfg, const RadialGrid& grid,
                        const std::vector<double>& rho, double lambda, double epsilon,
                        const BoundOptions& opt = {});

/// Sharper variant without mollification: ... - C Z^{5/3} (strict subcriticality).
BoundResult lower_bound_sharp(const NuclearConfiguration& cfg, const RadialGrid& grid,
                              const std::vector<double>& rho, double lambda,
                              const BoundOptions& opt = {});

/// Slater upper bound with W = V - |x|^{-1} * rho:
/// E_N <= sum_occ lambda_j - (1/2) D(rho,rho) + (1/2) D(rho_Psi - rho, ..) - exchange.
BoundResult upper_bound(const NuclearConfiguration& cfg, const RadialGrid& grid,
                        const std::vector<double>& rho, double nu,
                        const BoundOptions& opt = {});

}  // namespace atomtf
