#include "atomtf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace atomtf {

double SlaterState::spin_fill(std::size_t orbital, int sigma) const {
    const Orbital& o = orbitals[orbital];
    const double cap = 2.0 * o.l + 1.0;
    const double above = o.occupancy - sigma * cap;
    return std::clamp(above, 0.0, cap) / cap;
}

SlaterState build_slater_state(KineticKind kind, double beta, const RadialFn& W,
                               double N, int q, const OperatorOptions& opt,
                               const std::vector<double>& r) {
    BoundChannels bc = bound_states(kind, beta, W, -1e-12, opt, r);
    struct Cand {
        double lam;
        int l, idx;
    };
    std::vector<Cand> cands;
    for (const auto& cs : bc.channels)
        for (std::size_t j = 0; j < cs.eigenvalues.size(); ++j)
            cands.push_back({cs.eigenvalues[j], cs.channel, static_cast<int>(j)});
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.lam < b.lam; });

    SlaterState st;
    st.r = r;
    st.q = q;
    double left = N;
    for (const Cand& c : cands) {
        if (left <= 0.0) break;
        const double cap = static_cast<double>(q) * (2.0 * c.l + 1.0);
        const double put = std::min(left, cap);
        Orbital o;
        o.l = c.l;
        o.index = c.idx;
        o.eigenvalue = c.lam;
        o.occupancy = put;
        o.u = bc.channels[c.l].radial[c.idx];
        st.orbitals.push_back(std::move(o));
        left -= put;
    }
    for (const auto& o : st.orbitals) st.trace_sum += o.occupancy * o.eigenvalue;
    st.N = N - std::max(left, 0.0);
    st.rho.assign(r.size(), 0.0);
    for (const auto& o : st.orbitals)
        for (std::size_t k = 0; k < r.size(); ++k)
            st.rho[k] += o.occupancy * o.u[k] * o.u[k] / (4.0 * kPi * r[k] * r[k]);
    return st;
}

double threej000_squared(int l1, int l2, int k) {
    const int J = l1 + l2 + k;
    if (J % 2 != 0) return 0.0;
    if (k < std::abs(l1 - l2) || k > l1 + l2) return 0.0;
    const int g = J / 2;
    auto lf = [](int n) { return std::lgamma(n + 1.0); };
    const double log3j =
        lf(J - 2 * l1) + lf(J - 2 * l2) + lf(J - 2 * k) - lf(J + 1) +
        2.0 * (lf(g) - lf(g - l1) - lf(g - l2) - lf(g - k));
    return std::exp(log3j);
}

namespace {

// Slater radial integral R^k(A) = iint A(r) A(r') r_<^k / r_>^{k+1} dr dr'
// for A = u_a u_b, via inner/outer cumulants (O(n)).
double slater_rk(const std::vector<double>& r, const std::vector<double>& A, int k) {
    const std::size_t n = r.size();
    std::vector<double> inner(n, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) {
            const double dr = r[i] - r[i - 1];
            acc += 0.5 * dr * (A[i] * std::pow(r[i], k) + A[i - 1] * std::pow(r[i - 1], k));
        }
        inner[i] = acc;
    }
    std::vector<double> outer(n, 0.0);
    acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) {
            const double dr = r[i + 1] - r[i];
            acc += 0.5 * dr * (A[i] * std::pow(r[i], -(k + 1.0)) +
                               A[i + 1] * std::pow(r[i + 1], -(k + 1.0)));
        }
        outer[i] = acc;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = std::pow(r[i], -(k + 1.0)) * inner[i] + std::pow(r[i], k) * outer[i];
        const double w = 0.5 * ((i + 1 < n ? r[i + 1] : r[i]) - (i ? r[i - 1] : r[i]));
        total += A[i] * phi * w;
    }
    return total;
}

}  // namespace

double exchange_integral(const SlaterState& st) {
    const std::size_t m = st.orbitals.size();
    double X = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            const Orbital& oa = st.orbitals[a];
            const Orbital& ob = st.orbitals[b];
            // spin sum of fill products
            double fsum = 0.0;
            for (int s = 0; s < st.q; ++s) fsum += st.spin_fill(a, s) * st.spin_fill(b, s);
            if (fsum == 0.0) continue;
            std::vector<double> A(st.r.size());
            for (std::size_t i = 0; i < st.r.size(); ++i) A[i] = oa.u[i] * ob.u[i];
            double angular = 0.0;
            for (int k = std::abs(oa.l - ob.l); k <= oa.l + ob.l; k += 2) {
                const double tj = threej000_squared(oa.l, ob.l, k);
                if (tj == 0.0) continue;
                angular += tj * slater_rk(st.r, A, k);
            }
            const double term = 0.5 * fsum * (2.0 * oa.l + 1.0) * (2.0 * ob.l + 1.0) * angular;
            X += (a == b) ? term : 2.0 * term;
        }
    }
    return X;
}

namespace {

RadialFn interpolant(const RadialGrid& grid, std::vector<double> values) {
    return [g = grid, v = std::move(values)](double r) {
        if (r <= g.r_min()) return v.front() * 1.0;
        if (r >= g.r_max()) {
            // Coulomb-like tail continuation from the last node
            return v.back() * g.r_max() / r;
        }
        const double pos = std::log(r / g.r_min()) / g.log_step();
        const std::size_t i0 = std::min(static_cast<std::size_t>(pos), g.size() - 2);
        const double f = pos - static_cast<double>(i0);
        return (1.0 - f) * v[i0] + f * v[i0 + 1];
    };
}

KineticKind kind_for(const NuclearConfiguration& cfg) {
    return cfg.beta() > 0.0 ? KineticKind::Chandrasekhar : KineticKind::NonRelativistic;
}

}  // namespace

BoundResult lower_bound(const NuclearConfiguration& cfg, const RadialGrid& grid,
                        const std::vector<double>& rho, double lambda, double epsilon,
                        const BoundOptions& opt) {
    if (!(epsilon > 0.0)) throw config_error("lower_bound needs epsilon > 0");
    const double Z = cfg.charge(0);
    const int q = cfg.spin_q();
    const double N = cfg.electrons();

    std::vector<double> rho_m = mollify_density(grid, rho, epsilon);
    std::vector<double> phi = radial_coulomb_potential(grid, rho_m);
    std::vector<double> Weps(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) Weps[i] = Z / grid.node(i) - phi[i];

    BoundResult out;
    out.trace = negative_trace(kind_for(cfg), cfg.beta(), interpolant(grid, Weps), lambda,
                               q, opt.spectral).value;
    out.coulomb = 0.5 * coulomb_norm(grid, rho, rho);
    out.correction = -opt.C0 * std::pow(q, 2.0 / 3.0) * N / epsilon;
    out.N_used = N;
    out.value = out.trace + lambda * N - out.coulomb + out.correction;
    return out;
}

BoundResult lower_bound_sharp(const NuclearConfiguration& cfg, const RadialGrid& grid,
                              const std::vector<double>& rho, double lambda,
                              const BoundOptions& opt) {
    const double Z = cfg.charge(0);
    const int q = cfg.spin_q();
    std::vector<double> phi = radial_coulomb_potential(grid, rho);
    std::vector<double> W(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) W[i] = Z / grid.node(i) - phi[i];

    BoundResult out;
    out.trace = negative_trace(kind_for(cfg), cfg.beta(), interpolant(grid, W), lambda, q,
                               opt.spectral).value;
    out.coulomb = 0.5 * coulomb_norm(grid, rho, rho);
    out.correction = -opt.C0 * std::pow(Z, 5.0 / 3.0);
    out.N_used = cfg.electrons();
    out.value = out.trace - out.coulomb + out.correction;
    return out;
}

BoundResult upper_bound(const NuclearConfiguration& cfg, const RadialGrid& grid,
                        const std::vector<double>& rho, double nu,
                        const BoundOptions& opt) {
    if (nu > 0.0) throw config_error("upper_bound needs nu <= 0");
    const double Z = cfg.charge(0);
    const int q = cfg.spin_q();
    const double N = cfg.electrons();

    std::vector<double> phi = radial_coulomb_potential(grid, rho);
    std::vector<double> W(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) W[i] = Z / grid.node(i) - phi[i];

    SlaterState st = build_slater_state(kind_for(cfg), cfg.beta(), interpolant(grid, W), N,
                                        q, opt.spectral, grid.nodes());
    BoundResult out;
    out.trace = st.trace_sum;  // sum of occupied eigenvalues (exact Slater identity)
    out.coulomb = 0.5 * coulomb_norm(grid, rho, rho);
    out.exchange = exchange_integral(st);
    std::vector<double> diff(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) diff[i] = st.rho[i] - rho[i];
    out.d_proximity = 0.5 * coulomb_norm(grid, diff, diff);
    // counting slack of (2-16) with lambda = nu: |lambda - nu| |N^- - N| = 0
    out.correction = 0.0;
    out.N_used = st.N;
    out.value = out.trace - out.coulomb + out.d_proximity - out.exchange;
    return out;
}

}  // namespace atomtf
