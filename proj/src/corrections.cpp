#include "atomtf/corrections.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atomtf/hash.hpp"
#include "atomtf/io.hpp"
#include "atomtf/spectral.hpp"
#include "atomtf/threadpool.hpp"

#include "json.hpp"

namespace atomtf {

namespace {

// --- Weyl line densities (q = 1 internally; everything here scales by q) ---

double p_line_tf(double Z, double r) {
    // 4 pi r^2 P_weyl^TF(Z/r)
    const double c = 2.0 * std::sqrt(2.0) / (15.0 * kPi * kPi);
    return 4.0 * kPi * r * r * c * std::pow(Z / r, 2.5);
}

double p_head_tf(double Z, double r0) {
    // int_0^{r0} of the line density above
    const double c = 2.0 * std::sqrt(2.0) / (15.0 * kPi * kPi);
    return 8.0 * kPi * c * std::pow(Z, 2.5) * std::sqrt(r0);
}

double ppp_tf(double w) {  // P''_weyl,TF
    return std::sqrt(2.0 * std::max(w, 0.0)) / (2.0 * kPi * kPi);
}

// P(V) - P(V+lam) - |lam| P'(V+lam): weight of the energy window (lam, 0)
double window_tf(double Z, double r, double lam) {
    const double V = Z / r;
    if (V + lam <= 0.0)
        return pressure_weyl(PressureKind::TF, V, 1, 0.0);
    if (-lam < 1e-4 * V) return 0.5 * lam * lam * ppp_tf(V);
    return pressure_weyl(PressureKind::TF, V, 1, 0.0) -
           pressure_weyl(PressureKind::TF, V + lam, 1, 0.0) +
           lam * pressure_weyl(PressureKind::TFprime, V + lam, 1, 0.0);
}

// Same window for the (RTF - TF) gap.
double window_gap(double Z, double r, double lam, double beta) {
    const double V = Z / r;
    if (V + lam <= 0.0) return pressure_gap_weyl(V, 1, beta);
    if (-lam < 1e-7 * V) return 0.0;
    const double gp = pressure_weyl(PressureKind::RTFprime, V + lam, 1, beta) -
                      pressure_weyl(PressureKind::TFprime, V + lam, 1, 0.0);
    return pressure_gap_weyl(V, 1, beta) - pressure_gap_weyl(V + lam, 1, beta) + lam * gp;
}

double gap_line(double Z, double r, double beta) {
    return 4.0 * kPi * r * r * pressure_gap_weyl(Z / r, 1, beta);
}

struct Accumulated {
    double value = 0.0;
    double spread = 0.0;
    std::vector<double> window_values;
};

// Average of the cumulative integral over the outer window [w_lo, w_hi].
Accumulated window_average(const std::vector<double>& r, const std::vector<double>& cum,
                           double w_lo, double w_hi) {
    Accumulated a;
    double lo = 1e300, hi = -1e300, sum = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i] < w_lo || r[i] > w_hi) continue;
        sum += cum[i];
        lo = std::min(lo, cum[i]);
        hi = std::max(hi, cum[i]);
        ++cnt;
        if (cnt % std::max<std::size_t>(1, r.size() / 400) == 0)
            a.window_values.push_back(cum[i]);
    }
    if (cnt == 0) throw numerical_error("empty averaging window in Scott estimator");
    a.value = sum / cnt;
    a.spread = hi - lo;
    return a;
}

struct S0Params {
    std::size_t nodes;
    int n_cut;
    double R_int, box;
};

S0Params s0_params(const ScottOptions& opt) {
    S0Params p;
    switch (opt.level) {
        case 0: p = {7000, 14, 90.0, 1200.0}; break;
        case 2: p = {16000, 26, 260.0, 4200.0}; break;
        default: p = {11000, 20, 160.0, 2600.0}; break;
    }
    if (opt.nodes) p.nodes = opt.nodes;
    if (opt.n_cut && opt.level == 1) p.n_cut = opt.n_cut;
    p.box = std::max(p.box, 2.3 * 2.0 * p.n_cut * p.n_cut);
    return p;
}

// Non-relativistic Scott value S(0) from the log-grid channels (q = 1, Z = 1).
ScottEstimate scott_zero(const ScottOptions& opt) {
    const S0Params par = s0_params(opt);
    const double Z = 1.0;
    const double lam_cut = -1.0 / (2.0 * par.n_cut * par.n_cut);
    const int L_max = opt.L_max ? opt.L_max
                                : static_cast<int>(std::sqrt(2.0 * Z * par.R_int)) + 8;
    const double r_lo = 1e-6;

    // accumulate E1 line density in x directly on the solver grid
    std::vector<double> xg, rg, E1;
    std::vector<double> per_channel(L_max + 1, 0.0);
    std::vector<std::vector<double>> chan_E1(L_max + 1);
    parallel_for(0, L_max + 1, opt.jobs, [&](int l) {
        TridiagonalChannel ch = build_radial_channel(
            l, [&](double r) { return -Z / r; }, r_lo, par.box, par.nodes);
        std::vector<double> ev;
        std::vector<std::vector<double>> vecs;
        solve_tridiagonal(ch, -2.0 * Z * Z, lam_cut, ev, &vecs);
        std::vector<double> acc(ch.r.size(), 0.0);
        double tot = 0.0;
        for (std::size_t j = 0; j < ev.size(); ++j) {
            const double wgt = (2.0 * l + 1.0) * std::abs(ev[j]);
            tot += wgt;
            for (std::size_t i = 0; i < acc.size(); ++i)
                acc[i] += wgt * vecs[j][i] * vecs[j][i];  // v^2 is a line density in x
        }
        chan_E1[l] = std::move(acc);
        per_channel[l] = tot;
    });
    {
        TridiagonalChannel ch0 = build_radial_channel(
            0, [&](double r) { return -Z / r; }, r_lo, par.box, par.nodes);
        xg = ch0.x;
        rg = ch0.r;
    }
    E1.assign(rg.size(), 0.0);
    for (int l = 0; l <= L_max; ++l)
        if (!chan_E1[l].empty())
            for (std::size_t i = 0; i < E1.size(); ++i) E1[i] += chan_E1[l][i];

    const double dx = xg[1] - xg[0];
    // integrand in x: E1 - [P_line - window] * r   (dr = r dx)
    std::vector<double> integr(rg.size());
    for (std::size_t i = 0; i < rg.size(); ++i) {
        const double r = rg[i];
        const double pl = p_line_tf(Z, r) - 4.0 * kPi * r * r * window_tf(Z, r, lam_cut);
        integr[i] = E1[i] - pl * r;
    }

    ScottEstimate est;
    est.t = 0.0;
    est.L_max = L_max;
    est.r0 = opt.r0;

    // cumulative from each inner cutoff of the r0 ladder
    const std::vector<double> ladder = {1e-3, 3.16e-4, 1e-4, 3.16e-5, 1e-5};
    std::vector<double> cum(rg.size(), 0.0);
    for (std::size_t i = 1; i < rg.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (integr[i] + integr[i - 1]) * dx;
    auto value_from = [&](double r0) {
        // analytic pressure head on [0, r0] (e1 is negligible there), grid part above
        std::size_t i0 = std::lower_bound(rg.begin(), rg.end(), r0) - rg.begin();
        i0 = std::min(i0, rg.size() - 1);
        std::vector<double> shifted(rg.size());
        for (std::size_t i = 0; i < rg.size(); ++i)
            shifted[i] = cum[i] - cum[i0];
        Accumulated a = window_average(rg, shifted, 0.55 * par.R_int, par.R_int);
        a.value -= p_head_tf(Z, r0);
        return a;
    };
    for (double r0 : ladder) est.r0_ladder.push_back(value_from(r0).value);
    Accumulated fin = value_from(est.r0_ladder.empty() ? opt.r0 : ladder.back());
    est.window_values = fin.window_values;
    est.value = fin.value;

    // diagnostics: ladder drift and channel tail
    double drift = 0.0;
    for (std::size_t i = 1; i < est.r0_ladder.size(); ++i)
        drift = std::max(drift, std::abs(est.r0_ladder[i] - est.r0_ladder[i - 1]));
    est.log_subtraction_needed = drift > 10.0 * (std::abs(fin.spread) + 1e-12);
    double tail = 0.0;
    if (L_max >= 2 && per_channel[L_max] > 0.0 && per_channel[L_max - 1] > per_channel[L_max]) {
        const double rho = per_channel[L_max] / per_channel[L_max - 1];
        tail = per_channel[L_max] * rho / (1.0 - rho);
    }
    est.error = std::max(0.5 * fin.spread, drift) + tail;
    std::ostringstream diag;
    diag << "r0_drift=" << format_double(drift) << " window_spread=" << format_double(fin.spread)
         << " channel_tail=" << format_double(tail);
    est.diagnostics = diag.str();
    return est;
}

struct DeltaParams {
    std::size_t momentum_nodes, nr;
    int n_cut, L_max;
    double p_min, p_max, R_int;
};

DeltaParams delta_params(const ScottOptions& opt) {
    DeltaParams p;
    switch (opt.level) {
        case 0: p = {700, 900, 14, 20, 1e-4, 2e4, 28.0}; break;
        case 2: p = {1600, 1800, 22, 30, 1e-5, 1e5, 48.0}; break;
        default: p = {1100, 1300, 18, 24, 1e-4, 5e4, 36.0}; break;
    }
    if (opt.momentum_nodes) p.momentum_nodes = opt.momentum_nodes;
    if (opt.L_max) p.L_max = opt.L_max;
    if (opt.R_int > 0.0) p.R_int = opt.R_int;
    return p;
}

// Relativistic shift Delta(t) = q Z^2 (S(t) - S(0)) at q = 1, Z = 1:
// integral of the e1 difference between the Chandrasekhar and p^2/2 channel
// spectra, plus the analytic pressure-gap window and tail.
double scott_delta(double t, const ScottOptions& opt, double* error_out,
                   std::vector<double>* window_out) {
    const DeltaParams par = delta_params(opt);
    const double Z = 1.0;
    const double lam_cut = -1.0 / (2.0 * par.n_cut * par.n_cut);
    MomentumGrid mg = MomentumGrid::logarithmic(par.p_min, par.p_max, par.momentum_nodes);

    std::vector<double> r(par.nr);
    {
        const double r_lo = 1e-6;
        const double dlr = std::log(par.R_int / r_lo) / (par.nr - 1);
        for (std::size_t i = 0; i < par.nr; ++i) r[i] = r_lo * std::exp(dlr * i);
    }
    std::vector<std::vector<double>> chan_acc(par.L_max + 1);
    std::vector<double> chan_mag(par.L_max + 1, 0.0);
    parallel_for(0, par.L_max + 1, opt.jobs, [&](int l) {
        std::vector<double> acc(r.size(), 0.0);
        double mag = 0.0;
        for (int kind = 0; kind < 2; ++kind) {
            RadialOperatorSpec spec;
            spec.kind = kind == 0 ? KineticKind::Chandrasekhar : KineticKind::NonRelativistic;
            spec.beta = kind == 0 ? t : 0.0;
            spec.channel = l;
            spec.coulomb_Z = Z;
            MomentumChannel ch = build_momentum_channel(spec, mg);
            std::vector<double> ev;
            std::vector<std::vector<double>> vecs;
            solve_momentum(ch, lam_cut, ev, &vecs);
            const double sgn = kind == 0 ? 1.0 : -1.0;
            for (std::size_t j = 0; j < ev.size(); ++j) {
                std::vector<double> u = momentum_to_radial(mg, vecs[j], l, r);
                const double wgt = (2.0 * l + 1.0) * std::abs(ev[j]);
                for (std::size_t i = 0; i < r.size(); ++i) acc[i] += sgn * wgt * u[i] * u[i];
                if (kind == 0) mag += wgt;
            }
        }
        chan_acc[l] = std::move(acc);
        chan_mag[l] = mag;
    });

    std::vector<double> integr(r.size(), 0.0);
    for (int l = 0; l <= par.L_max; ++l)
        for (std::size_t i = 0; i < r.size(); ++i) integr[i] += chan_acc[l][i];
    // add the semiclassical window difference (states in (lam_cut, 0)):
    for (std::size_t i = 0; i < r.size(); ++i)
        integr[i] += 4.0 * kPi * r[i] * r[i] * window_gap(Z, r[i], lam_cut, t);

    std::vector<double> cum(r.size(), 0.0);
    for (std::size_t i = 1; i < r.size(); ++i)
        cum[i] += cum[i - 1] + 0.5 * (integr[i] + integr[i - 1]) * (r[i] - r[i - 1]);

    // analytic gap tail beyond each candidate R (log quadrature to 1e5)
    auto gap_tail = [&](double R) {
        const int n = 1200;
        const double dl = std::log(1e5 / R) / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double rr = R * std::exp(dl * i);
            s += gap_line(Z, rr, t) * rr * ((i == 0 || i == n) ? 0.5 : 1.0);
        }
        s *= dl;
        const double c_as = 4.0 * kPi * (std::sqrt(2.0) / (14.0 * kPi * kPi)) * t * t *
                            std::pow(Z, 3.5);
        return s + 2.0 * c_as / std::sqrt(1e5);
    };
    std::vector<double> est(r.size(), 0.0);
    for (std::size_t i = 0; i < r.size(); ++i)
        est[i] = cum[i] + (r[i] > 1.0 ? gap_tail(r[i]) : 0.0);
    Accumulated a = window_average(r, est, 0.42 * par.R_int, par.R_int);

    double tail = 0.0;
    if (par.L_max >= 2 && chan_mag[par.L_max] > 0.0 &&
        chan_mag[par.L_max - 1] > chan_mag[par.L_max]) {
        const double rho = chan_mag[par.L_max] / chan_mag[par.L_max - 1];
        tail = 0.02 * chan_mag[par.L_max] * rho / (1.0 - rho);  // differences, not sums
    }
    if (error_out) *error_out = 0.5 * a.spread + tail;
    if (window_out) *window_out = a.window_values;
    return a.value;
}

std::string scott_cache_key(const char* tag, double t, const ScottOptions& opt) {
    std::ostringstream k;
    k << "scott|" << tag << "|t=" << format_double(t) << "|level=" << opt.level
      << "|ncut=" << opt.n_cut << "|L=" << opt.L_max << "|nodes=" << opt.nodes
      << "|mn=" << opt.momentum_nodes << "|R=" << format_double(opt.R_int)
      << "|r0=" << format_double(opt.r0);
    return k.str();
}

}  // namespace

ScottEstimate scott_S(double t, int q, const ScottOptions& opt, const Cache* cache) {
    (void)q;  // S is independent of q: e1 and the pressures both scale by q
    if (t < 0.0 || t >= kCriticalCoupling)
        throw config_error("Scott function needs 0 <= t < 2/pi");

    ScottEstimate zero;
    const std::string key0 = scott_cache_key("S0", 0.0, opt);
    bool have0 = false;
    if (cache) {
        if (auto rec = cache->get(key0); rec && rec->size() >= 2) {
            zero.t = 0.0;
            zero.value = (*rec)[0];
            zero.error = (*rec)[1];
            for (std::size_t i = 2; i < rec->size(); ++i) zero.r0_ladder.push_back((*rec)[i]);
            zero.diagnostics = "cached";
            have0 = true;
        }
    }
    if (!have0) {
        zero = scott_zero(opt);
        if (cache) {
            std::vector<double> rec = {zero.value, zero.error};
            rec.insert(rec.end(), zero.r0_ladder.begin(), zero.r0_ladder.end());
            cache->put(key0, rec);
        }
    }
    if (t == 0.0) return zero;

    double derr = 0.0;
    std::vector<double> dwin;
    double delta;
    const std::string keyd = scott_cache_key("Delta", t, opt);
    bool haved = false;
    if (cache) {
        if (auto rec = cache->get(keyd); rec && rec->size() >= 2) {
            delta = (*rec)[0];
            derr = (*rec)[1];
            haved = true;
        }
    }
    if (!haved) {
        delta = scott_delta(t, opt, &derr, &dwin);
        if (cache) cache->put(keyd, {delta, derr});
    }

    ScottEstimate est;
    est.t = t;
    est.value = zero.value + delta;  // q = 1, Z = 1 internals
    est.error = zero.error + derr;
    est.r0 = opt.r0;
    est.L_max = delta_params(opt).L_max;
    est.r0_ladder = zero.r0_ladder;
    est.window_values = dwin;
    est.log_subtraction_needed = zero.log_subtraction_needed;
    est.diagnostics = "S0: " + zero.diagnostics;
    return est;
}

double density_43_integral(const TFSolution& tf) {
    const RadialGrid& g = tf.grid;
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::pow(tf.rho[i], 4.0 / 3.0);
    double I = 4.0 * kPi * g.integrate(f);
    // analytic head: rho ~ ctilde r^{-3/2} -> rho^{4/3} r^2 = ctilde^{4/3} const
    const double a = g.r_min();
    const double ct = tf.rho.front() * a * std::sqrt(a);
    I += 4.0 * kPi * std::pow(ct, 4.0 / 3.0) * a;
    return I;
}

namespace {
// Exchange-consistent normalization: the Dirac term equals the semiclassical
// exchange energy of the filled Fermi sea at q = 2, keeping the printed
// -9/2 ratio and the q^{2/3} structure between the two terms.
const double kSchwingerKappa = std::cbrt(3.0 / (4.0 * kPi)) / 6.0;
}

double schwinger_term(const TFSolution& tf) {
    return kSchwingerKappa * std::pow(tf.q, 2.0 / 3.0) * density_43_integral(tf);
}

double dirac_term(const TFSolution& tf) {
    return -4.5 * schwinger_term(tf);
}

double rct_term(const TFSolution& tf, double beta) {
    if (beta == 0.0) return 0.0;
    const RadialGrid& g = tf.grid;
    std::vector<double> d(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double V = tf.Z / g.node(i);
        const double U = std::max(tf.W[i] + tf.nu, 0.0);
        double diff;
        if (U <= 0.0)
            diff = std::pow(V, 3.5);
        else if (U / V > 0.5)  // joint evaluation against cancellation
            diff = -std::pow(V, 3.5) * std::expm1(3.5 * std::log(U / V));
        else
            diff = std::pow(V, 3.5) - std::pow(U, 3.5);
        d[i] = diff;
    }
    double I = 4.0 * kPi * g.integrate(d);
    // head below r_min: V^{7/2} - U^{7/2} ~ (7/2) V^{5/2} phi_rho(0)
    std::vector<double> sr(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) sr[i] = tf.rho[i] / g.node(i);
    const double phi0 = 4.0 * kPi * g.integrate(sr);  // 4 pi int rho s ds
    I += 4.0 * kPi * 3.5 * std::pow(tf.Z, 2.5) * phi0 * 2.0 * std::sqrt(g.r_min());
    return tf.q / (14.0 * kPi * kPi) * beta * beta * I;
}

double rtf_tf_gap_integral(double Z, int q, double beta, double lambda, double a) {
    // printed-normalization gap of (3-16) integrated over r >= a
    const int n = 4000;
    const double r_hi = 1e5;
    const double dl = std::log(r_hi / a) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = a * std::exp(dl * i);
        const double w = Z / r + lambda;
        const double gap = pressure_gap(w, q, beta);
        s += 4.0 * kPi * r * r * gap * r * ((i == 0 || i == n) ? 0.5 : 1.0);
    }
    return s * dl;
}

EnergyDecomposition energy_decomposition(const NuclearConfiguration& cfg,
                                         const ScottOptions& opt, const Cache* cache) {
    if (cfg.nucleus_count() != 1)
        throw config_error("energy decomposition implemented for the atomic case M = 1");
    if (!cfg.subcritical())
        throw config_error("energy decomposition requires Z*beta <= 2/pi");
    EnergyDecomposition d;
    d.Z = cfg.charge(0);
    d.N = cfg.electrons();
    d.q = cfg.spin_q();
    d.beta = cfg.beta();

    TFSolution tf = solve_tf_atom(d.Z, d.N, d.q);
    d.E_TF = tf.E_TF;
    ScottEstimate s = scott_S(d.Z * d.beta, d.q, opt, cache);
    d.scott_S_value = s.value;
    d.scott_error = s.error * d.q * d.Z * d.Z;
    d.scott = d.q * d.Z * d.Z * s.value;
    d.dirac = dirac_term(tf);
    d.schwinger = schwinger_term(tf);
    d.rct = rct_term(tf, d.beta);
    d.remainder_budget = std::pow(d.Z, 5.0 / 3.0);
    d.remainder_symbolic = "O(Z^(5/3-delta)), d = infinity (atomic case)";
    return d;
}

std::string decomposition_to_json(const EnergyDecomposition& d) {
    nlohmann::json j;
    j["Z"] = d.Z;
    j["N"] = d.N;
    j["q"] = d.q;
    j["beta"] = d.beta;
    j["E_TF"] = d.E_TF;
    j["scott"] = d.scott;
    j["scott_S"] = d.scott_S_value;
    j["scott_error"] = d.scott_error;
    j["dirac"] = d.dirac;
    j["schwinger"] = d.schwinger;
    j["rct"] = d.rct;
    j["total"] = d.total();
    j["remainder_budget"] = d.remainder_budget;
    j["remainder_symbolic"] = d.remainder_symbolic;
    return j.dump(2) + "\n";
}

}  // namespace atomtf
