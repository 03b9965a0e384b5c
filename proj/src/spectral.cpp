#include "atomtf/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "atomtf/threadpool.hpp"

namespace atomtf {

// ---------------------------------------------------------------------------
// Position-space channels.
//
// u(r) = e^{-x/2} w(x) with x = ln r maps int u^2 dr to int w^2 dx and the
// kinetic form to 1/2 int e^{-2x} (w' - w/2)^2 dx.  The form is assembled
// interval-wise in its square form, so the discrete operator is positive by
// construction; Dirichlet ends are dropped from the unknowns.

TridiagonalChannel build_radial_channel(int l, const RadialFn& V, double r_min,
                                        double r_max, std::size_t nodes) {
    if (!(r_min > 0.0) || !(r_max > r_min) || nodes < 16)
        throw config_error("radial channel needs 0 < r_min < r_max, nodes >= 16");
    const std::size_t n = nodes;
    const double x0 = std::log(r_min);
    const double dx = (std::log(r_max) - x0) / static_cast<double>(n - 1);
    std::vector<double> diag(n, 0.0), off(n - 1, 0.0);
    const double cp = 1.0 / dx + 0.25;
    const double cm = 1.0 / dx - 0.25;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double xh = x0 + dx * (static_cast<double>(i) + 0.5);
        const double ah = std::exp(-2.0 * xh);
        diag[i] += 0.5 * ah * cp * cp;
        diag[i + 1] += 0.5 * ah * cm * cm;
        off[i] = -0.5 * ah * cp * cm;
    }
    TridiagonalChannel ch;
    ch.channel = l;
    ch.dx = dx;
    ch.x.resize(n - 2);
    ch.r.resize(n - 2);
    ch.diag.resize(n - 2);
    ch.off.assign(off.begin() + 1, off.end() - 1);
    const double ll = 0.5 * static_cast<double>(l) * (l + 1.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = x0 + dx * static_cast<double>(i);
        const double r = std::exp(x);
        ch.x[i - 1] = x;
        ch.r[i - 1] = r;
        ch.diag[i - 1] = diag[i] + ll * std::exp(-2.0 * x) + V(r);
    }
    return ch;
}

namespace {

// Eigenvalue count below lambda; long double Sturm recurrence so the graded
// e^{-2x} entries do not swamp O(1) eigenvalues.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e,
                double lambda) {
    const long double lam = lambda;
    long double t = static_cast<long double>(d[0]) - lam;
    int cnt = t < 0.0L ? 1 : 0;
    const long double tiny = 1e-300L;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (t > -tiny && t < tiny) t = t < 0.0L ? -tiny : tiny;
        const long double ei = e[i - 1];
        t = static_cast<long double>(d[i]) - lam - ei * ei / t;
        if (t < 0.0L) ++cnt;
    }
    return cnt;
}

// Tridiagonal solve (A - lambda) v = b with partial pivoting.
void shifted_solve(const std::vector<double>& d, const std::vector<double>& e,
                   double lambda, std::vector<double>& v) {
    const std::size_t n = d.size();
    std::vector<double> dl(n), du(n, 0.0), du2(n, 0.0), sub(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) dl[i] = d[i] - lambda;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        du[i] = e[i];
        sub[i] = e[i];
    }
    // forward elimination with row swaps
    std::vector<double>& b = v;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(sub[i]) > std::abs(dl[i])) {
            std::swap(dl[i], sub[i]);
            std::swap(du[i], dl[i + 1]);
            du2[i] = du[i + 1];
            du[i + 1] = 0.0;
            std::swap(b[i], b[i + 1]);
        }
        if (dl[i] == 0.0) dl[i] = 1e-300;
        const double m = sub[i] / dl[i];
        dl[i + 1] -= m * du[i];
        if (du2[i] != 0.0) du[i + 1] -= m * du2[i];
        b[i + 1] -= m * b[i];
    }
    if (dl[n - 1] == 0.0) dl[n - 1] = 1e-300;
    b[n - 1] /= dl[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dl[n - 2];
    for (std::size_t k = n - 2; k-- > 0;) {
        double s = b[k] - du[k] * b[k + 1];
        if (du2[k] != 0.0) s -= du2[k] * b[k + 2];
        b[k] = s / dl[k];
    }
}

std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

void solve_tridiagonal(const TridiagonalChannel& ch, double lambda_min,
                       double lambda_cut, std::vector<double>& eigenvalues,
                       std::vector<std::vector<double>>* eigenvectors) {
    eigenvalues.clear();
    if (eigenvectors) eigenvectors->clear();
    const auto& d = ch.diag;
    const auto& e = ch.off;
    const std::size_t n = d.size();
    // Gershgorin lower edge beats any user floor for bisection speed
    double gersh = d[0];
    for (std::size_t i = 0; i < n; ++i) {
        double row = d[i];
        if (i) row -= std::abs(e[i - 1]);
        if (i + 1 < n) row -= std::abs(e[i]);
        gersh = std::min(gersh, row);
    }
    const double floor_ = std::max(lambda_min, gersh - 1.0);
    const int n_lo = sturm_count(d, e, floor_);
    const int n_hi = sturm_count(d, e, lambda_cut);
    const int m = n_hi - n_lo;
    if (m <= 0) return;

    eigenvalues.resize(m);
    for (int k = 0; k < m; ++k) {
        // smallest lambda with count >= n_lo + k + 1
        double lo = floor_, hi = lambda_cut;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (sturm_count(d, e, mid) >= n_lo + k + 1)
                hi = mid;
            else
                lo = mid;
            if (hi - lo < 1e-14 * std::max(1.0, std::abs(hi))) break;
        }
        eigenvalues[k] = 0.5 * (lo + hi);
    }

    if (!eigenvectors) return;
    eigenvectors->assign(m, std::vector<double>(n));
    std::uint64_t seed = 0x243f6a8885a308d3ull;
    for (int k = 0; k < m; ++k) {
        std::vector<double>& v = (*eigenvectors)[k];
        for (std::size_t i = 0; i < n; ++i)
            v[i] = (static_cast<double>(splitmix(seed) >> 11) * 0x1.0p-53) - 0.5;
        double lam = eigenvalues[k];
        for (int it = 0; it < 3; ++it) {
            shifted_solve(d, e, lam, v);
            double nrm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
            for (auto& x : v) x /= nrm;
        }
        // Rayleigh polish of the eigenvalue
        double num = 0.0;
        for (std::size_t i = 0; i < n; ++i) num += d[i] * v[i] * v[i];
        for (std::size_t i = 0; i + 1 < n; ++i) num += 2.0 * e[i] * v[i] * v[i + 1];
        eigenvalues[k] = num;
        // normalize to int u^2 dr = sum w_i^2 dx = 1, and store u = e^{-x/2} w ... the
        // stored vector is w/sqrt(dx) so that sum stored_i^2 * dx = 1.
        const double s = 1.0 / std::sqrt(ch.dx);
        for (auto& x : v) x *= s;
    }
    // ascending order is preserved by construction; fix potential Rayleigh swaps
    for (int k = 1; k < m; ++k)
        if (eigenvalues[k] < eigenvalues[k - 1]) {
            std::swap(eigenvalues[k], eigenvalues[k - 1]);
            if (eigenvectors) std::swap((*eigenvectors)[k], (*eigenvectors)[k - 1]);
        }
}

// ---------------------------------------------------------------------------
// Momentum-space channels.

MomentumGrid MomentumGrid::logarithmic(double p_min, double p_max, std::size_t n) {
    if (!(p_min > 0.0) || !(p_max > p_min) || n < 16)
        throw config_error("momentum grid needs 0 < p_min < p_max, nodes >= 16");
    MomentumGrid g;
    g.p.resize(n);
    g.w.resize(n);
    const double l0 = std::log(p_min);
    const double dl = (std::log(p_max) - l0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        g.p[i] = std::exp(l0 + dl * static_cast<double>(i));
        g.w[i] = g.p[i] * dl * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
    }
    return g;
}

double legendre_q(int l, double x) {
    if (!(x > 1.0)) throw numerical_error("legendre_q requires x > 1");
    const double xi = x + std::sqrt(x * x - 1.0);
    if (2.0 * l * std::log(xi) < 30.0) {
        // upward recurrence, long double to absorb growth of the regular solution
        const long double xl = x;
        long double q0 = 0.5L * std::log((xl + 1.0L) / (xl - 1.0L));
        if (l == 0) return static_cast<double>(q0);
        long double q1 = xl * q0 - 1.0L;
        for (int k = 1; k < l; ++k) {
            const long double q2 = ((2.0L * k + 1.0L) * xl * q1 - k * q0) / (k + 1.0L);
            q0 = q1;
            q1 = q2;
        }
        return static_cast<double>(q1);
    }
    // descending series Q_l(x) = c_l x^{-l-1} 2F1((l+1)/2, (l+2)/2; l+3/2; x^{-2})
    double logc = l * std::log(2.0) + 2.0 * std::lgamma(l + 1.0) - std::lgamma(2.0 * l + 2.0);
    const double z = 1.0 / (x * x);
    const double a1 = 0.5 * (l + 1.0), a2 = 0.5 * (l + 2.0), b = l + 1.5;
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 4000; ++k) {
        term *= (a1 + k) * (a2 + k) / ((1.0 + k) * (b + k)) * z;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(logc - (l + 1.0) * std::log(x)) * sum;
}

double sph_bessel_j(int l, double x) {
    if (x == 0.0) return l == 0 ? 1.0 : 0.0;
    const double j0 = std::sin(x) / x;
    if (l == 0) return j0;
    const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    if (l == 1) return j1;
    if (static_cast<double>(l) < 0.8 * x) {
        // upward recurrence is stable for l < x
        double jm = j0, jc = j1;
        for (int k = 1; k < l; ++k) {
            const double jn = (2.0 * k + 1.0) / x * jc - jm;
            jm = jc;
            jc = jn;
        }
        return jc;
    }
    // Miller downward recurrence normalized against j_0
    int start = l + 16 + static_cast<int>(std::sqrt(40.0 * l));
    double jp = 0.0, jc = 1e-280, out = 0.0;
    for (int k = start; k >= 1; --k) {
        const double jm = (2.0 * k + 1.0) / x * jc - jp;
        jp = jc;
        jc = jm;
        if (k - 1 == l) out = jc;
        if (std::abs(jc) > 1e260) {  // rescale
            jp /= 1e260;
            jc /= 1e260;
            out /= 1e260;
        }
    }
    return out * (j0 / jc);
}

namespace {

double harmonic_number(int l) {
    double h = 0.0;
    for (int k = 1; k <= l; ++k) h += 1.0 / k;
    return h;
}

// Kinetic multipliers.
double kinetic_symbol(KineticKind kind, double beta, double p) {
    switch (kind) {
        case KineticKind::NonRelativistic:
            return 0.5 * p * p;
        case KineticKind::Chandrasekhar: {
            const double t = beta * p;
            return p * p / (1.0 + std::sqrt(1.0 + t * t));
        }
        case KineticKind::Massless:
            return p;
    }
    return 0.0;
}

}  // namespace

MomentumChannel build_momentum_channel(const RadialOperatorSpec& spec,
                                       const MomentumGrid& grid,
                                       const RadialGrid* r_quadrature) {
    if (spec.kind == KineticKind::Chandrasekhar && spec.beta > 0.0 &&
        spec.coulomb_Z * spec.beta > kCriticalCoupling + 1e-12)
        throw config_error(
            "supercritical Coulomb coupling Z*beta > 2/pi: operator not semibounded");
    const std::size_t n = grid.p.size();
    MomentumChannel ch;
    ch.grid = grid;
    ch.channel = spec.channel;
    ch.n = n;
    ch.matrix.assign(n * n, 0.0);
    auto At = [&](std::size_t i, std::size_t j) -> double& { return ch.matrix[i * n + j]; };

    for (std::size_t i = 0; i < n; ++i) {
        double kin = kinetic_symbol(spec.kind, spec.beta, grid.p[i]);
        if (spec.frac_A != 0.0) kin -= spec.frac_A * std::pow(grid.p[i], 2.0 * spec.frac_s);
        At(i, i) += kin;
    }

    if (spec.coulomb_Z != 0.0) {
        const double Z = spec.coulomb_Z;
        const int l = spec.channel;
        const double H = harmonic_number(l);
        // -(Z/pi) Q_l((p^2+p'^2)/(2 p p')) Nystrom kernel; the log singularity at
        // p = p' is integrated analytically over the band |i-j| <= 2:
        //   Q_l = -ln|p-p'| + ln(sqrt(4 p p')) - H_l + R_l,  R_l smooth -> 0.
        for (std::size_t i = 0; i < n; ++i) {
            const double pi_ = grid.p[i];
            for (std::size_t j = i; j < n; ++j) {
                const double pj = grid.p[j];
                const double sw = std::sqrt(grid.w[i] * grid.w[j]);
                double qval;
                if (j - i <= 2) {
                    // cell average of the log part over cell_j
                    const double a = pj - 0.5 * grid.w[j];
                    const double b = pj + 0.5 * grid.w[j];
                    auto F = [&](double t) {
                        const double u = pi_ - t;
                        if (u == 0.0) return 0.0;
                        return -u * (std::log(std::abs(u)) - 1.0);
                    };
                    const double avg_log = (F(b) - F(a)) / grid.w[j];
                    double smooth = 0.0;
                    if (i != j) {
                        const double chi = (pi_ * pi_ + pj * pj) / (2.0 * pi_ * pj);
                        smooth = legendre_q(l, chi) + std::log(std::abs(pi_ - pj)) -
                                 0.5 * std::log(4.0 * pi_ * pj) + H;
                    }
                    qval = -avg_log + 0.5 * std::log(4.0 * pi_ * pj) - H + smooth;
                } else {
                    const double chi = (pi_ * pi_ + pj * pj) / (2.0 * pi_ * pj);
                    qval = legendre_q(l, chi);
                }
                const double val = -(Z / kPi) * sw * qval;
                At(i, j) += val;
                if (i != j) At(j, i) += val;
            }
        }
    }

    if (spec.potential) {
        // tabulated potential via the unitary radial Hankel transform:
        // M += B^T diag(V(r) wr) B,  B[k][i] = sqrt(2/pi w_i) (p_i r_k) j_l(p_i r_k)
        const RadialGrid* rq = r_quadrature;
        RadialGrid fallback;
        if (!rq) {
            fallback = RadialGrid::logarithmic(1e-6, 100.0, 1600);
            rq = &fallback;
        }
        const std::size_t nr = rq->size();
        std::vector<double> B(nr * n);
        for (std::size_t k = 0; k < nr; ++k) {
            const double r = rq->node(k);
            for (std::size_t i = 0; i < n; ++i) {
                const double x = grid.p[i] * r;
                B[k * n + i] = std::sqrt(2.0 / kPi * grid.w[i]) * x * sph_bessel_j(spec.channel, x);
            }
        }
        std::vector<double> vw(nr);
        for (std::size_t k = 0; k < nr; ++k) {
            // line measure: int V u^2 dr -> weights without the r^2 factor
            const double wline = rq->weight(k) / (rq->node(k) * rq->node(k));
            vw[k] = spec.potential(rq->node(k)) * wline;
        }
        for (std::size_t k = 0; k < nr; ++k) {
            if (vw[k] == 0.0) continue;
            const double* row = &B[k * n];
            for (std::size_t i = 0; i < n; ++i) {
                const double fi = vw[k] * row[i];
                if (fi == 0.0) continue;
                double* out = &ch.matrix[i * n];
                for (std::size_t j = i; j < n; ++j) out[j] += fi * row[j];
            }
        }
        // mirror upper to lower
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) ch.matrix[j * n + i] = ch.matrix[i * n + j];
    }
    return ch;
}

void solve_momentum(const MomentumChannel& ch, double lambda_cut,
                    std::vector<double>& eigenvalues,
                    std::vector<std::vector<double>>* eigenvectors) {
    eigenvalues.clear();
    if (eigenvectors) eigenvectors->clear();
    const lapack_int n = static_cast<lapack_int>(ch.n);
    std::vector<double> a(ch.matrix);  // dsyevr destroys input
    std::vector<double> wout(ch.n);
    std::vector<double> zout;
    std::vector<lapack_int> isuppz(2 * ch.n);
    lapack_int m = 0;
    const char jobz = eigenvectors ? 'V' : 'N';
    if (eigenvectors) zout.resize(ch.n * ch.n);
    lapack_int info = LAPACKE_dsyevr(
        LAPACK_ROW_MAJOR, jobz, 'V', 'U', n, a.data(), n, -1e30, lambda_cut, 0, 0,
        1e-13, &m, wout.data(), eigenvectors ? zout.data() : nullptr, n, isuppz.data());
    if (info != 0) throw numerical_error("dsyevr failed, info=" + std::to_string(info));
    eigenvalues.assign(wout.begin(), wout.begin() + m);
    if (eigenvectors) {
        eigenvectors->assign(m, std::vector<double>(ch.n));
        for (lapack_int k = 0; k < m; ++k)
            for (std::size_t i = 0; i < ch.n; ++i)
                (*eigenvectors)[k][i] = zout[i * ch.n + k];
    }
}

std::vector<double> momentum_to_radial(const MomentumGrid& grid,
                                       const std::vector<double>& coeffs, int l,
                                       const std::vector<double>& r) {
    // u(r) = sqrt(2/pi) sum_i sqrt(w_i) c_i (p_i r) j_l(p_i r)
    std::vector<double> u(r.size(), 0.0);
    const std::size_t n = grid.p.size();
    for (std::size_t k = 0; k < r.size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid.p[i] * r[k];
            s += std::sqrt(grid.w[i]) * coeffs[i] * x * sph_bessel_j(l, x);
        }
        u[k] = std::sqrt(2.0 / kPi) * s;
    }
    return u;
}

// ---------------------------------------------------------------------------
// Whole-operator drivers.

namespace {

// Channel sums with geometric tail extrapolation shared by the trace and the
// counting function.
TraceResult channel_sum(KineticKind kind, double beta, const RadialFn& W,
                        double lambda, int q, const OperatorOptions& opt,
                        bool count_only) {
    TraceResult res;
    res.per_channel.assign(opt.L_max + 1, 0.0);
    std::vector<int> nonempty(opt.L_max + 1, 0);

    parallel_for(0, opt.L_max + 1, opt.jobs, [&](int l) {
        std::vector<double> ev;
        if (kind == KineticKind::NonRelativistic) {
            auto V = [&](double r) { return -W(r) + lambda; };
            TridiagonalChannel ch = build_radial_channel(l, V, opt.r_min, opt.r_max, opt.nodes);
            solve_tridiagonal(ch, opt.lambda_floor, -1e-12, ev, nullptr);
        } else {
            RadialOperatorSpec spec;
            spec.kind = kind;
            spec.beta = beta;
            spec.channel = l;
            spec.q = q;
            spec.potential = [&](double r) { return -W(r) + lambda; };
            MomentumGrid mg = MomentumGrid::logarithmic(opt.p_min, opt.p_max, opt.momentum_nodes);
            RadialGrid rq = RadialGrid::logarithmic(opt.r_min, opt.r_max, 1600);
            MomentumChannel ch = build_momentum_channel(spec, mg, &rq);
            solve_momentum(ch, -1e-12, ev, nullptr);
        }
        const double deg = static_cast<double>(q) * (2.0 * l + 1.0);
        double s = 0.0;
        for (double v : ev) s += count_only ? 1.0 : v;
        res.per_channel[l] = deg * s;
        nonempty[l] = ev.empty() ? 0 : 1;
    });

    double total = 0.0;
    int used = 0;
    for (int l = 0; l <= opt.L_max; ++l) {
        total += res.per_channel[l];
        if (nonempty[l]) used = l;
    }
    res.value = total;
    res.channels_used = used;
    // geometric tail estimate from the last two non-zero channels
    if (used >= 2 && used == opt.L_max) {
        const double a = std::abs(res.per_channel[used]);
        const double b = std::abs(res.per_channel[used - 1]);
        if (b > 0.0 && a > 0.0 && a < b) {
            const double rho = a / b;
            res.tail_estimate = a * rho / (1.0 - rho);
        } else if (a > 0.0) {
            throw numerical_error("channel trace not decaying at L_max; raise L_max");
        }
    }
    return res;
}

}  // namespace

TraceResult negative_trace(KineticKind kind, double beta, const RadialFn& W,
                           double lambda, int q, const OperatorOptions& opt) {
    return channel_sum(kind, beta, W, lambda, q, opt, false);
}

TraceResult counting_function(KineticKind kind, double beta, const RadialFn& W,
                              double lambda, int q, const OperatorOptions& opt) {
    return channel_sum(kind, beta, W, lambda, q, opt, true);
}

BoundChannels bound_states(KineticKind kind, double beta, const RadialFn& W,
                           double lambda_cut, const OperatorOptions& opt,
                           const std::vector<double>& r) {
    BoundChannels bc;
    bc.r = r;
    bc.channels.resize(opt.L_max + 1);
    parallel_for(0, opt.L_max + 1, opt.jobs, [&](int l) {
        ChannelSpectrum cs;
        cs.channel = l;
        cs.degeneracy = 2 * l + 1;  // times q applied by consumers
        cs.grid = r;
        std::vector<std::vector<double>> vecs;
        if (kind == KineticKind::NonRelativistic) {
            auto V = [&](double rr) { return -W(rr) + 0.0; };
            TridiagonalChannel ch = build_radial_channel(l, V, opt.r_min, opt.r_max, opt.nodes);
            solve_tridiagonal(ch, opt.lambda_floor, lambda_cut, cs.eigenvalues, &vecs);
            cs.discretization = "log-fd n=" + std::to_string(opt.nodes);
            // interpolate w/sqrt-normalized vectors onto the requested r grid:
            // stored vectors live on ch.r with int u^2 dr = sum v^2 dx; u = e^{-x/2} w
            cs.radial.assign(vecs.size(), std::vector<double>(r.size(), 0.0));
            for (std::size_t j = 0; j < vecs.size(); ++j) {
                for (std::size_t k = 0; k < r.size(); ++k) {
                    const double x = std::log(r[k]);
                    const double pos = (x - ch.x.front()) / ch.dx;
                    if (pos < 0.0 || pos > static_cast<double>(ch.x.size() - 1)) continue;
                    const std::size_t i0 = std::min(static_cast<std::size_t>(pos), ch.x.size() - 2);
                    const double f = pos - static_cast<double>(i0);
                    const double w = (1.0 - f) * vecs[j][i0] + f * vecs[j][i0 + 1];
                    cs.radial[j][k] = w * std::exp(-0.5 * x);
                }
            }
        } else {
            RadialOperatorSpec spec;
            spec.kind = kind;
            spec.beta = beta;
            spec.channel = l;
            spec.potential = [&](double rr) { return -W(rr); };
            MomentumGrid mg = MomentumGrid::logarithmic(opt.p_min, opt.p_max, opt.momentum_nodes);
            RadialGrid rq = RadialGrid::logarithmic(opt.r_min, opt.r_max, 1600);
            MomentumChannel ch = build_momentum_channel(spec, mg, &rq);
            solve_momentum(ch, lambda_cut, cs.eigenvalues, &vecs);
            cs.discretization = "momentum n=" + std::to_string(opt.momentum_nodes);
            cs.radial.resize(vecs.size());
            for (std::size_t j = 0; j < vecs.size(); ++j)
                cs.radial[j] = momentum_to_radial(mg, vecs[j], l, r);
        }
        bc.channels[l] = std::move(cs);
    });
    return bc;
}

std::vector<double> density_diagonal(const BoundChannels& bc, double lambda) {
    std::vector<double> rho(bc.r.size(), 0.0);
    for (const auto& cs : bc.channels)
        for (std::size_t j = 0; j < cs.eigenvalues.size(); ++j) {
            if (cs.eigenvalues[j] > lambda) continue;
            for (std::size_t k = 0; k < bc.r.size(); ++k) {
                const double u = cs.radial.empty() ? 0.0 : cs.radial[j][k];
                rho[k] += cs.degeneracy * u * u / (4.0 * kPi * bc.r[k] * bc.r[k]);
            }
        }
    return rho;
}

std::vector<double> e1_diagonal(const BoundChannels& bc) {
    std::vector<double> e1(bc.r.size(), 0.0);
    for (const auto& cs : bc.channels)
        for (std::size_t j = 0; j < cs.eigenvalues.size(); ++j) {
            if (cs.eigenvalues[j] > 0.0) continue;
            const double wgt = std::abs(cs.eigenvalues[j]) * cs.degeneracy;
            for (std::size_t k = 0; k < bc.r.size(); ++k) {
                const double u = cs.radial.empty() ? 0.0 : cs.radial[j][k];
                e1[k] += wgt * u * u / (4.0 * kPi * bc.r[k] * bc.r[k]);
            }
        }
    return e1;
}

}  // namespace atomtf
