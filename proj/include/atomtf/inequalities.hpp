#pragma once

#include <string>
#include <vector>

#include "atomtf/bounds.hpp"
#include "atomtf/model.hpp"
#include "atomtf/spectral.hpp"

// Numerical checkers for the Appendix inequalities and the ground-state
// density bounds, run over a fixed, versioned corpus.

namespace atomtf {

struct InequalityReport {
    std::string name;
    std::string instance;
    double lhs = 0.0;
    double rhs = 0.0;           // with the fitted or pinned constant applied
    double margin = 0.0;        // rhs - lhs; >= 0 means the inequality holds
    double ratio = 0.0;         // lhs / (rhs without constant), for fitting
    std::string grid;
};

inline constexpr const char* kCorpusVersion = "corpus-1";

/// One radial profile of the shipped corpus.
struct CorpusEntry {
    std::string id;
    RadialFn profile;        // potential or density, by family
    std::string family;      // gaussian / exponential / well / tf-potential / tf-density
    double Z = 0.0;
    double beta = 0.0;
};

std::vector<CorpusEntry> potential_corpus();
std::vector<CorpusEntry> density_corpus();

struct CheckOptions {
    int q = 2;
    double grid_scale = 1.0;  // > 1 refines every discretization (drift checks)
    int jobs = 1;
};

/// Daubechies one-body bound: -Tr(H_V^-) vs int (V_+^{5/2} + beta^3 V_+^4).
InequalityReport check_daubechies(const CorpusEntry& V, double beta, int q,
                                  const CheckOptions& opt = {});

/// Daubechies many-body bound on a Slater surrogate: kinetic energy vs
/// int min(rho^{5/3}, rho^{4/3}/beta).
InequalityReport check_daubechies_density(const SlaterState& state, double beta,
                                          const CheckOptions& opt = {});

/// Lieb-Yau localized bound with the printed constant 4.4827.
InequalityReport check_lieb_yau(const SlaterState& gamma, const RadialFn& theta,
                                double C, double R, const CheckOptions& opt = {});

/// Critical-hydrogen inequality: the feasibility frontier (A, B_min(A)) for
/// sqrt(Delta) - 2/(pi|x|) >= A Delta^s - B.
struct CriticalFrontier {
    double s = 0.0;
    std::vector<double> A;
    std::vector<double> B;
};
CriticalFrontier check_critical_hydrogen(double s, const std::vector<double>& A_scan,
                                         const CheckOptions& opt = {});

/// Hardy-Littlewood-Sobolev: D(f,f) vs ||f||_{6/5}^2.
InequalityReport check_hls(const RadialGrid& grid, const std::vector<double>& f);

/// Ground-state density bounds: int min(rho^{4/3}/beta, rho^{5/3}) vs Z^{7/3}
/// and int rho^{4/3} vs Z^{5/3}.
InequalityReport check_rho_bound(const RadialGrid& grid, const std::vector<double>& rho,
                                 double Z, double beta);

/// CSV rows (name, instance, lhs, rhs, margin, grid) for a report batch.
std::string reports_to_csv(const std::vector<InequalityReport>& reports);

}  // namespace atomtf
