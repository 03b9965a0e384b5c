#pragma once

#include <string>
#include <vector>

#include "atomtf/cache.hpp"
#include "atomtf/model.hpp"
#include "atomtf/tf.hpp"

// Scott function estimator and the Dirac / Schwinger / relativistic
// correction terms of the atomic energy decomposition.

namespace atomtf {

struct ScottOptions {
    int level = 1;          // 0 coarse, 1 default, 2 fine; drives the knobs below
    int n_cut = 18;         // shallow-state cutoff: lambda_cut = -1/(2 n_cut^2)
    int L_max = 0;          // 0 = automatic from the integration radius
    double r0 = 1e-4;       // inner cutoff of the reported integral
    int jobs = 1;

    // knobs derived from `level` unless explicitly set (0 = derive)
    std::size_t nodes = 0;           // radial FD nodes
    std::size_t momentum_nodes = 0;  // momentum grid size
    double R_int = 0.0;              // spatial integration radius (beta > 0 part)
};

/// Scott function estimate at coupling t = Z*beta (computed at Z = 1 by the
/// dilation covariance of the operator; the value is independent of q).
struct ScottEstimate {
    double t = 0.0;
    double value = 0.0;      // S(t)
    double error = 0.0;      // extrapolation/window spread
    double r0 = 0.0;
    int L_max = 0;
    std::vector<double> r0_ladder;      // value vs inner cutoff (diagnostics)
    std::vector<double> window_values;  // value vs outer averaging radius
    bool log_subtraction_needed = false;
    std::string diagnostics;
};

ScottEstimate scott_S(double t, int q, const ScottOptions& opt = {},
                      const Cache* cache = nullptr);

/// kappa * q^{2/3} * int rho^{4/3}; the coefficient kappa is normalized so the
/// companion exchange approximation below matches the Slater-determinant
/// exchange integral at q = 2 (see dirac_term).
double schwinger_term(const TFSolution& tf);

/// -(9/2) * kappa * q^{2/3} * int rho^{4/3} <= 0; at q = 2 this equals the
/// semiclassical exchange energy -(3/4)(3/pi)^{1/3} int rho^{4/3}.
double dirac_term(const TFSolution& tf);

/// (q / 14 pi^2) beta^2 int ( V^{7/2} - (W + nu)_+^{7/2} ) dx, the leading
/// relativistic pressure-gap correction; 0 at beta = 0.
double rct_term(const TFSolution& tf, double beta);

/// int rho^{4/3} dx including the analytic small-r head.
double density_43_integral(const TFSolution& tf);

/// int ( P^RTF - P^TF )(V + lambda) over { r >= a }, printed normalization.
/// Scales like beta^2 Z^4 when a ~ 1/Z.
double rtf_tf_gap_integral(double Z, int q, double beta, double lambda, double a);

struct EnergyDecomposition {
    double E_TF = 0.0;
    double scott = 0.0;
    double dirac = 0.0;
    double schwinger = 0.0;
    double rct = 0.0;
    double scott_S_value = 0.0;
    double scott_error = 0.0;
    double remainder_budget = 0.0;       // Z^{5/3} scale of the dropped remainder
    std::string remainder_symbolic;      // human-readable budget
    double Z = 0.0, N = 0.0, beta = 0.0;
    int q = 2;

    double total() const { return E_TF + scott + dirac + schwinger + rct; }
};

EnergyDecomposition energy_decomposition(const NuclearConfiguration& cfg,
                                         const ScottOptions& opt = {},
                                         const Cache* cache = nullptr);

/// Flat JSON record (sorted keys, %.17g values): deterministic bytes.
std::string decomposition_to_json(const EnergyDecomposition& d);

}  // namespace atomtf
