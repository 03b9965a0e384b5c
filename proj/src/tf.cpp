#include "atomtf/tf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atomtf/io.hpp"

namespace atomtf {

namespace {

// y'' = y^{3/2}/sqrt(x), series start near 0 for the singular derivative:
// y = 1 + s x + (4/3) x^{3/2} + (2s/5) x^{5/2} + (1/3) x^3 + ...
void series_start(double s, double x0, double& y, double& yp) {
    const double sq = std::sqrt(x0);
    y = 1.0 + s * x0 + (4.0 / 3.0) * x0 * sq + (2.0 * s / 5.0) * x0 * x0 * sq +
        x0 * x0 * x0 / 3.0;
    yp = s + 2.0 * sq + s * x0 * sq + x0 * x0;
}

double rhs(double x, double y) {
    if (y <= 0.0) return 0.0;
    return y * std::sqrt(y) / std::sqrt(x);
}

struct Shot {
    bool hit_zero = false;   // y crossed zero
    bool turned_up = false;  // y' became >= 0 (slope too shallow)
    double x_cut = 0.0, slope_cut = 0.0;
    std::vector<double> xs, ys, yps;
};

// Cash-Karp RK45 with adaptive step; records accepted nodes.
Shot integrate(double slope, double x_max, bool record) {
    Shot out;
    double x = 1e-6, y, yp;
    series_start(slope, x, y, yp);
    if (record) {
        out.xs = {0.0, x};
        out.ys = {1.0, y};
        out.yps = {slope, yp};
    }
    double h = 1e-4;
    const double tol = 1e-12;
    while (x < x_max) {
        if (x + h > x_max) h = x_max - x;
        // classic RK4 on the system (y, yp) with step doubling error control
        auto step = [&](double xx, double yy, double pp, double hh, double& yo, double& po) {
            const double k1y = pp, k1p = rhs(xx, yy);
            const double k2y = pp + 0.5 * hh * k1p, k2p = rhs(xx + 0.5 * hh, yy + 0.5 * hh * k1y);
            const double k3y = pp + 0.5 * hh * k2p, k3p = rhs(xx + 0.5 * hh, yy + 0.5 * hh * k2y);
            const double k4y = pp + hh * k3p, k4p = rhs(xx + hh, yy + hh * k3y);
            yo = yy + hh / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            po = pp + hh / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        };
        double y1, p1, y2, p2, ym, pm;
        step(x, y, yp, h, y1, p1);
        step(x, y, yp, 0.5 * h, ym, pm);
        step(x + 0.5 * h, ym, pm, 0.5 * h, y2, p2);
        const double err = std::abs(y2 - y1) + std::abs(p2 - p1) * h;
        const double scale = std::max(1.0, std::abs(y));
        if (err > tol * scale && h > 1e-10) {
            h *= 0.5;
            continue;
        }
        x += h;
        y = y2 + (y2 - y1) / 15.0;
        yp = p2 + (p2 - p1) / 15.0;
        if (record) {
            out.xs.push_back(x);
            out.ys.push_back(y);
            out.yps.push_back(yp);
        }
        if (err < 0.02 * tol * scale) h *= 2.0;
        if (y <= 0.0) {
            out.hit_zero = true;
            // refine the crossing: bisect the step fraction from the previous node
            const double xp_ = x - h;
            double yp_prev, pp_prev;
            if (record) {
                yp_prev = out.ys[out.ys.size() - 2];
                pp_prev = out.yps[out.yps.size() - 2];
                out.xs.pop_back();
                out.ys.pop_back();
                out.yps.pop_back();
            } else {
                // re-derive the previous state by stepping backwards
                step(x, y, yp, -h, yp_prev, pp_prev);
            }
            double lo = 0.0, hi = h, yz = y, pz = yp;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                double ym_, pm_;
                step(xp_, yp_prev, pp_prev, mid, ym_, pm_);
                if (ym_ <= 0.0) {
                    hi = mid;
                    yz = ym_;
                    pz = pm_;
                } else {
                    lo = mid;
                }
            }
            (void)yz;
            out.x_cut = xp_ + hi;
            out.slope_cut = pz;
            if (record) {
                out.xs.push_back(out.x_cut);
                out.ys.push_back(0.0);
                out.yps.push_back(pz);
            }
            return out;
        }
        if (yp >= 0.0) {
            out.turned_up = true;
            out.x_cut = x;
            out.slope_cut = yp;
            return out;
        }
    }
    out.x_cut = x;
    out.slope_cut = yp;
    return out;
}

}  // namespace

double UniversalTF::y(double x) const {
    if (x <= 0.0) return 1.0;
    if (x >= xs.back()) {
        if (!neutral) return 0.0;
        // Sommerfeld tail y ~ 144/x^3 matched to the boundary value
        const double yb = ys.back(), xb = xs.back();
        return yb * std::pow(xb / x, 3.0);
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double h = xs[i + 1] - xs[i], t = (x - xs[i]) / h;
    const double y0 = ys[i], y1 = ys[i + 1], m0 = yps[i] * h, m1 = yps[i + 1] * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
}

double UniversalTF::yp(double x) const {
    if (x <= 0.0) return slope0;
    if (x >= xs.back()) {
        if (!neutral) return 0.0;
        const double yb = ys.back(), xb = xs.back();
        return -3.0 * yb * std::pow(xb, 3.0) / std::pow(x, 4.0);
    }
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double h = xs[i + 1] - xs[i], t = (x - xs[i]) / h;
    const double y0 = ys[i], y1 = ys[i + 1], m0 = yps[i] * h, m1 = yps[i + 1] * h;
    return ((6 * t * t - 6 * t) * y0 + (3 * t * t - 4 * t + 1) * m0 +
            (-6 * t * t + 6 * t) * y1 + (3 * t * t - 2 * t) * m1) / h;
}

double UniversalTF::slope_square_integral() const {
    // Simpson over a fine ladder in sqrt(x) (integrand smooth in that variable)
    const double xe = xs.back();
    const int n = 4000;  // even
    const double ds = std::sqrt(xe) / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = ds * i;
        const double f = yp(s * s) * yp(s * s) * 2.0 * s;  // dx = 2 s ds
        sum += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    double J = sum * ds / 3.0;
    if (neutral) J += yps.back() * yps.back() * xe / 7.0;  // y' ~ x^{-4} tail
    return J;
}

UniversalTF solve_universal_tf(double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw config_error("TF fraction N/Z must be in (0, 1]");
    UniversalTF u;
    const double x_max = 80.0;
    if (fraction > 1.0 - 1e-9) {
        // neutral branch: bisect the initial slope
        double lo = -1.62, hi = -1.55;
        for (int it = 0; it < 70; ++it) {
            const double mid = 0.5 * (lo + hi);
            Shot s = integrate(mid, x_max, false);
            if (s.hit_zero)
                lo = mid;  // too steep
            else
                hi = mid;
        }
        u.slope0 = 0.5 * (lo + hi);
        Shot s = integrate(u.slope0, x_max, true);
        u.neutral = true;
        u.x_cut = std::numeric_limits<double>::infinity();
        u.slope_cut = 0.0;
        u.xs = std::move(s.xs);
        u.ys = std::move(s.ys);
        u.yps = std::move(s.yps);
        return u;
    }
    // ionic branch: -X y'(X) = 1 - fraction at the zero crossing
    const double target = 1.0 - fraction;
    double lo = -std::max(60.0, 4.0 / fraction), hi = -1.588;  // steeper -> more ionized
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        Shot s = integrate(mid, 400.0, false);
        double mu = s.hit_zero ? -s.x_cut * s.slope_cut : 0.0;
        if (mu > target)
            lo = mid;
        else
            hi = mid;
    }
    u.slope0 = 0.5 * (lo + hi);
    Shot s = integrate(u.slope0, 400.0, true);
    if (!s.hit_zero) throw numerical_error("ionic TF shooting failed to reach the cut");
    u.neutral = false;
    u.x_cut = s.x_cut;
    u.slope_cut = s.slope_cut;
    u.xs = std::move(s.xs);
    u.ys = std::move(s.ys);
    u.yps = std::move(s.yps);
    return u;
}

double TFSolution::screened_potential(double r) const {
    if (r <= 0.0) throw singular_point_error("TF potential evaluated at r = 0");
    const double Ne = std::min(N, Z);
    if (!universal.neutral && r >= r_cut) {
        return (Z - Ne) * (1.0 / r - 1.0 / r_cut);
    }
    return Z * universal.y(r / b) / r;
}

double TFSolution::density(double r) const {
    const double u = screened_potential(r);
    if (u <= 0.0) return 0.0;
    const double c = std::sqrt(2.0) * q / (3.0 * kPi * kPi);
    return c * u * std::sqrt(u);
}

TFSolution solve_tf_atom(double Z, double N, int q) {
    if (!(Z > 0.0) || !(N > 0.0) || q < 1)
        throw config_error("solve_tf_atom requires Z > 0, N > 0, q >= 1");
    const double Ne = std::min(N, Z);
    const double r_min = 1e-6 / Z;
    const double r_max = 50.0 * std::pow(Z, -1.0 / 3.0) *
                         std::max(1.0, std::cbrt(Z / Ne));
    return solve_tf_atom(Z, N, q, RadialGrid::logarithmic(r_min, r_max, 2000));
}

TFSolution solve_tf_atom(double Z, double N, int q, const RadialGrid& grid) {
    if (!(Z > 0.0) || !(N > 0.0) || q < 1)
        throw config_error("solve_tf_atom requires Z > 0, N > 0, q >= 1");
    TFSolution sol;
    sol.Z = Z;
    sol.N = N;
    sol.q = q;
    const double Ne = std::min(N, Z);
    sol.universal = solve_universal_tf(Ne / Z);
    sol.b = std::pow(3.0 * kPi / (4.0 * std::sqrt(2.0) * q), 2.0 / 3.0) *
            std::pow(Z, -1.0 / 3.0);
    sol.r_cut = sol.universal.neutral ? std::numeric_limits<double>::infinity()
                                      : sol.b * sol.universal.x_cut;
    sol.nu = sol.universal.neutral ? 0.0 : -(Z - Ne) / sol.r_cut;
    sol.grid = grid;
    sol.rho.resize(grid.size());
    sol.W.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.node(i);
        sol.rho[i] = sol.density(r);
        sol.W[i] = sol.screened_potential(r) - sol.nu;
    }
    // Sommerfeld-identity energy: E = (Z^2/b) (I52/10 - I32/2) + nu Ne / 2 with
    //   I32 = y'(X) - y'(0),  I52 = y y'|_X - y'(0) - J,  J = int y'^2.
    const UniversalTF& u = sol.universal;
    const double J = u.slope_square_integral();
    double I32, I52;
    if (u.neutral) {
        I32 = -u.slope0;
        I52 = -u.slope0 - J;
    } else {
        I32 = u.slope_cut - u.slope0;
        I52 = -u.slope0 - J;  // y(X) = 0 kills the boundary term
    }
    sol.E_TF = (Z * Z / sol.b) * (I52 / 10.0 - I32 / 2.0) + 0.5 * sol.nu * Ne;
    return sol;
}

std::vector<double> radial_coulomb_potential(const RadialGrid& grid,
                                             const std::vector<double>& f) {
    // (|x|^{-1} * f)(r) = 4 pi [ (1/r) int_0^r f s^2 ds + int_r^inf f s ds ]
    const std::size_t n = grid.size();
    std::vector<double> inner(n, 0.0), outer(n, 0.0), out(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {  // trapezoid on the shared log mesh
        if (i) {
            const double dr = grid.node(i) - grid.node(i - 1);
            acc += 0.5 * dr * (f[i] * grid.node(i) * grid.node(i) +
                               f[i - 1] * grid.node(i - 1) * grid.node(i - 1));
        }
        inner[i] = acc;
    }
    acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        if (i + 1 < n) {
            const double dr = grid.node(i + 1) - grid.node(i);
            acc += 0.5 * dr * (f[i] * grid.node(i) + f[i + 1] * grid.node(i + 1));
        }
        outer[i] = acc;
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = 4.0 * kPi * (inner[i] / grid.node(i) + outer[i]);
    return out;
}

double coulomb_norm(const RadialGrid& grid, const std::vector<double>& f,
                    const std::vector<double>& g) {
    const std::vector<double> phi = radial_coulomb_potential(grid, g);
    std::vector<double> integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) integrand[i] = f[i] * phi[i];
    return 4.0 * kPi * grid.integrate(integrand);
}

double tf_energy(const TFSolution& sol) {
    const RadialGrid& g = sol.grid;
    const double ck = 0.3 * std::pow(6.0 * kPi * kPi / sol.q, 2.0 / 3.0);
    std::vector<double> kin(g.size()), att(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        kin[i] = ck * std::pow(sol.rho[i], 5.0 / 3.0);
        att[i] = sol.Z / g.node(i) * sol.rho[i];
    }
    double E = 4.0 * kPi * (g.integrate(kin) - g.integrate(att)) +
               0.5 * coulomb_norm(g, sol.rho, sol.rho);
    // analytic head below r_min where rho ~ ctilde r^{-3/2} (local coefficient,
    // exact for Coulomb cores, zero for vanishing densities)
    const double a = g.r_min();
    const double ct = sol.rho.front() * a * std::sqrt(a);
    const double sq = std::sqrt(a);
    const double kin_head = 4.0 * kPi * ck * std::pow(ct, 5.0 / 3.0) * 2.0 * sq;
    const double att_head = 4.0 * kPi * sol.Z * ct * 2.0 * sq;
    E += kin_head - att_head;
    return E;
}

double tf_energy_dual(const TFSolution& sol) {
    const RadialGrid& g = sol.grid;
    std::vector<double> pr(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        pr[i] = pressure_weyl(PressureKind::TF, sol.W[i] + sol.nu, sol.q, 0.0);
    double E = -4.0 * kPi * g.integrate(pr) - 0.5 * coulomb_norm(g, sol.rho, sol.rho) +
               sol.nu * sol.electron_count();
    // local-coefficient head: P(U(r)) ~ chat r^{-5/2} below r_min,
    // int_0^a chat r^{-5/2} 4 pi r^2 dr = 8 pi chat sqrt(a) = 8 pi P(U(a)) a^3
    const double a = g.r_min();
    E -= 8.0 * kPi * pr.front() * a * a * a;
    return E;
}

double mollifier_profile(double s) {
    // indicator of the unit ball, cubic-smoothed over the outer 10%;
    // normalization constant from the closed-form integral below.
    if (s >= 1.0) return 0.0;
    double shape = 1.0;
    if (s > 0.9) {
        const double t = (1.0 - s) / 0.1;  // 1 at s=0.9, 0 at s=1
        shape = t * t * (3.0 - 2.0 * t);
    }
    // int_0^inf shape(s) 4 pi s^2 ds = 4 pi [ 0.9^3/3 + int_.9^1 smooth s^2 ds ]
    static const double norm = [] {
        double acc = 0.9 * 0.9 * 0.9 / 3.0;
        const int n = 2000;
        const double h = 0.1 / n;
        for (int i = 0; i <= n; ++i) {
            const double s = 0.9 + h * i;
            const double t = (1.0 - s) / 0.1;
            const double f = t * t * (3.0 - 2.0 * t) * s * s;
            acc += f * h * ((i == 0 || i == n) ? 0.5 : 1.0);
        }
        return 4.0 * kPi * acc;
    }();
    return shape / norm;
}

std::vector<double> mollify_density(const RadialGrid& grid,
                                    const std::vector<double>& rho, double epsilon) {
    if (!(epsilon > 0.0)) throw config_error("mollifier needs epsilon > 0");
    // radial convolution: (rho * Phi_eps)(r) = (2 pi / r) int s rho(s) [G(u_hi)-G(u_lo)] ds,
    // G(a) = int_0^a t Phi_eps(t) dt, u_hi = r+s, u_lo = |r-s| (support t <= eps).
    const int ng = 400;
    std::vector<double> Gt(ng + 1);
    double acc = 0.0;
    for (int i = 1; i <= ng; ++i) {
        const double t0 = epsilon * (i - 1) / ng, t1 = epsilon * i / ng;
        const double f0 = t0 * mollifier_profile(t0 / epsilon) / (epsilon * epsilon * epsilon);
        const double f1 = t1 * mollifier_profile(t1 / epsilon) / (epsilon * epsilon * epsilon);
        acc += 0.5 * (f0 + f1) * (t1 - t0);
        Gt[i] = acc;
    }
    auto G = [&](double a) {
        if (a <= 0.0) return 0.0;
        if (a >= epsilon) return Gt[ng];
        const double pos = a / epsilon * ng;
        const int i0 = std::min(static_cast<int>(pos), ng - 1);
        const double f = pos - i0;
        return (1.0 - f) * Gt[i0] + f * Gt[i0 + 1];
    };
    // rho interpolant on the log grid (linear in log r, clamped)
    auto rho_at = [&](double r) -> double {
        if (r <= grid.r_min()) return rho.front();
        if (r >= grid.r_max()) return 0.0;
        const double pos = std::log(r / grid.r_min()) / grid.log_step();
        const std::size_t i0 = std::min(static_cast<std::size_t>(pos), grid.size() - 2);
        const double f = pos - static_cast<double>(i0);
        return (1.0 - f) * rho[i0] + f * rho[i0 + 1];
    };
    std::vector<double> out(grid.size());
    const int ns = 160;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double r = grid.node(k);
        const double s_lo = std::max(0.0, r - epsilon), s_hi = r + epsilon;
        const double h = (s_hi - s_lo) / ns;
        double sum = 0.0;
        for (int i = 0; i <= ns; ++i) {
            const double s = s_lo + h * i;
            const double f = s * rho_at(s) * (G(r + s) - G(std::abs(r - s)));
            sum += f * ((i == 0 || i == ns) ? 0.5 : 1.0);
        }
        out[k] = 2.0 * kPi / r * sum * h;
    }
    return out;
}

std::vector<double> mollify_potential(const TFSolution& sol, double epsilon) {
    const std::vector<double> rho_m = mollify_density(sol.grid, sol.rho, epsilon);
    const std::vector<double> phi = radial_coulomb_potential(sol.grid, rho_m);
    std::vector<double> W(sol.grid.size());
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
        W[i] = sol.Z / sol.grid.node(i) - phi[i];
    return W;
}

std::string tf_solution_to_text(const TFSolution& sol) {
    std::ostringstream out;
    out << "# atomtf tf-solution 1\n";
    out << "# Z=" << format_double(sol.Z) << " N=" << format_double(sol.N)
        << " q=" << sol.q << " nu=" << format_double(sol.nu)
        << " E_TF=" << format_double(sol.E_TF) << "\n";
    out << "# r rho W\n";
    for (std::size_t i = 0; i < sol.grid.size(); ++i)
        out << format_double(sol.grid.node(i)) << ' ' << format_double(sol.rho[i])
            << ' ' << format_double(sol.W[i]) << '\n';
    return out.str();
}

TFSolution tf_solution_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "# atomtf tf-solution 1")
        throw config_error("not a tf-solution file");
    if (!std::getline(in, line)) throw config_error("truncated tf-solution header");
    TFSolution sol;
    {
        std::istringstream hs(line);
        std::string tok;
        while (hs >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = tok.substr(0, eq);
            const double val = parse_double(tok.substr(eq + 1));
            if (key == "Z") sol.Z = val;
            else if (key == "N") sol.N = val;
            else if (key == "q") sol.q = static_cast<int>(val);
            else if (key == "nu") sol.nu = val;
            else if (key == "E_TF") sol.E_TF = val;
        }
    }
    std::getline(in, line);  // column header
    std::vector<double> r, rho, W;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double a, bb, c;
        ls >> a >> bb >> c;
        r.push_back(a);
        rho.push_back(bb);
        W.push_back(c);
    }
    // rebuild the universal solution so derived quantities stay usable; the
    // stored samples are kept verbatim for bit-exact round trips.
    TFSolution full = solve_tf_atom(sol.Z, sol.N, sol.q, RadialGrid::from_nodes(std::move(r)));
    full.rho = std::move(rho);
    full.W = std::move(W);
    full.nu = sol.nu;
    full.E_TF = sol.E_TF;
    return full;
}

}  // namespace atomtf
