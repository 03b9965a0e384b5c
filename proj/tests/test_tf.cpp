#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "atomtf/model.hpp"
#include "atomtf/tf.hpp"

using namespace atomtf;

namespace {

// Independent oracle: fixed-step RK4 on the TF equation in t = sqrt(x),
//   dy/dt = 2 t p,  dp/dt = 2 y_+^{3/2},
// bisecting the initial slope.  Energy from the slope identity
//   E(Z, q) = (3/7) (Z^2 / b) y'(0).
double tf_oracle_slope() {
    auto shoot = [](double s, double t_end) {
        double y = 1.0, p = s, t = 0.0;
        const double h = 5e-5;
        while (t < t_end) {
            auto f = [](double tt, double yy, double pp, double& dy, double& dp) {
                dy = 2.0 * tt * pp;
                dp = yy > 0.0 ? 2.0 * yy * std::sqrt(yy) : 0.0;
            };
            double k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
            f(t, y, p, k1y, k1p);
            f(t + 0.5 * h, y + 0.5 * h * k1y, p + 0.5 * h * k1p, k2y, k2p);
            f(t + 0.5 * h, y + 0.5 * h * k2y, p + 0.5 * h * k2p, k3y, k3p);
            f(t + h, y + h * k3y, p + h * k3p, k4y, k4p);
            y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
            t += h;
            if (y <= 0.0) return -1;  // slope too steep
            if (p >= 0.0) return +1;  // slope too shallow
        }
        return +1;  // survived without crossing: treat as shallow
    };
    double lo = -1.65, hi = -1.50;
    for (int it = 0; it < 55; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shoot(mid, 9.0) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double oracle_energy(double Z, int q) {
    static const double slope = tf_oracle_slope();
    const double b = std::pow(3.0 * kPi / (4.0 * std::sqrt(2.0) * q), 2.0 / 3.0) *
                     std::pow(Z, -1.0 / 3.0);
    return (3.0 / 7.0) * Z * Z / b * slope;
}

}  // namespace

TEST_CASE("oracle reproduces the literature TF constant") {
    // -0.768745 Z^{7/3} for q = 2 in atomic units
    CHECK(oracle_energy(1.0, 2) == doctest::Approx(-0.768745).epsilon(4e-4));
}

TEST_CASE("neutral atom: nu = 0 and E_TF matches the oracle") {
    TFSolution sol = solve_tf_atom(1.0, 1.0, 2);
    CHECK(sol.nu == 0.0);
    CHECK(std::abs(sol.E_TF - oracle_energy(1.0, 2)) < 5e-4);
    CHECK(std::abs(sol.E_TF + 0.7687) < 5e-4);
}

TEST_CASE("Z^{7/3} and q^{2/3} scaling laws hold to 1e-6 relative") {
    TFSolution s1 = solve_tf_atom(1.0, 1.0, 2);
    for (double Z : {10.0, 100.0}) {
        TFSolution sZ = solve_tf_atom(Z, Z, 2);
        CHECK(sZ.E_TF / s1.E_TF ==
              doctest::Approx(std::pow(Z, 7.0 / 3.0)).epsilon(1e-6));
    }
    for (int q : {1, 3}) {
        TFSolution sq = solve_tf_atom(1.0, 1.0, q);
        CHECK(sq.E_TF / s1.E_TF ==
              doctest::Approx(std::pow(q / 2.0, 2.0 / 3.0)).epsilon(1e-6));
    }
}

TEST_CASE("q-scaling of the density and potential fields") {
    // rho_q(x) = q^2 rho_1(q^{2/3} x), (W_q + nu)(x) = q^{2/3} (W_1 + nu)(q^{2/3} x)
    TFSolution s1 = solve_tf_atom(1.0, 1.0, 1);
    for (int q : {2, 3}) {
        TFSolution sq = solve_tf_atom(1.0, 1.0, q);
        const double qs = std::pow(q, 2.0 / 3.0);
        for (double r : {0.1, 0.7, 2.9}) {
            CHECK(sq.density(r) ==
                  doctest::Approx(q * q * s1.density(qs * r)).epsilon(1e-7));
            CHECK(sq.screened_potential(r) ==
                  doctest::Approx(qs * s1.screened_potential(qs * r)).epsilon(1e-7));
        }
    }
}

TEST_CASE("self-consistency and Poisson residual") {
    TFSolution sol = solve_tf_atom(10.0, 10.0, 2);
    const RadialGrid& g = sol.grid;
    // rho = P'_weyl(W + nu) pointwise
    for (std::size_t i = 0; i < g.size(); i += 97)
        CHECK(sol.rho[i] ==
              doctest::Approx(pressure_weyl(PressureKind::TFprime, sol.W[i] + sol.nu, 2, 0.0))
                  .epsilon(1e-12));
    // W = V - |x|^{-1} * rho within quadrature tolerance; the density tail
    // beyond r_max contributes the constant potential -(Z/b) y'(x_max).
    std::vector<double> phi = radial_coulomb_potential(g, sol.rho);
    const double x_end = g.r_max() / sol.b;
    const double phi_ext = -(sol.Z / sol.b) * sol.universal.yp(x_end);
    for (std::size_t i = 0; i < g.size(); i += 53) {
        const double r = g.node(i);
        const double w_check = sol.Z / r - phi[i] - phi_ext;
        const double scale = std::max(std::abs(sol.W[i]), 1.0 / r);
        CHECK(std::abs(w_check - sol.W[i]) / scale < 5e-4);
    }
    // charge: 4 pi int rho r^2 dr = min(N, Z); analytic head below r_min and
    // the exact exterior charge Z (y - x y') beyond r_max.
    const double a = g.r_min();
    const double ct = sol.rho.front() * a * std::sqrt(a);
    const double head = 4.0 * kPi * ct * 2.0 / 3.0 * a * std::sqrt(a);
    const double tail =
        sol.Z * (sol.universal.y(x_end) - x_end * sol.universal.yp(x_end));
    CHECK(4.0 * kPi * g.integrate(sol.rho) + head + tail ==
          doctest::Approx(10.0).epsilon(2e-4));
}

TEST_CASE("ionic branch: compact support, charge and chemical potential") {
    TFSolution sol = solve_tf_atom(10.0, 5.0, 2);
    CHECK(sol.nu < 0.0);
    CHECK(std::isfinite(sol.r_cut));
    CHECK(sol.nu == doctest::Approx(-(10.0 - 5.0) / sol.r_cut).epsilon(1e-10));
    CHECK(sol.density(sol.r_cut * 1.01) == 0.0);
    CHECK(sol.density(sol.r_cut * 0.8) > 0.0);
    const RadialGrid& g = sol.grid;
    const double a = g.r_min();
    const double ct = sol.rho.front() * a * std::sqrt(a);
    const double head = 4.0 * kPi * ct * 2.0 / 3.0 * a * std::sqrt(a);
    CHECK(4.0 * kPi * g.integrate(sol.rho) + head == doctest::Approx(5.0).epsilon(2e-4));
    // N > Z reduces to neutral
    TFSolution over = solve_tf_atom(5.0, 8.0, 2);
    CHECK(over.nu == 0.0);
    CHECK(over.electron_count() == doctest::Approx(5.0));
}

TEST_CASE("rho is radially decreasing; full support when neutral") {
    TFSolution neutral = solve_tf_atom(3.0, 3.0, 2);
    for (std::size_t i = 1; i < neutral.grid.size(); i += 19)
        CHECK(neutral.rho[i] <= neutral.rho[i - 1] * (1.0 + 1e-12));
    CHECK(neutral.rho.back() > 0.0);
}

TEST_CASE("coulomb norm: uniform ball and positivity") {
    RadialGrid g = RadialGrid::logarithmic(1e-5, 10.0, 16000);
    std::vector<double> ball(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        ball[i] = g.node(i) <= 1.0 ? 3.0 / (4.0 * kPi) : 0.0;
    // D is the full double integral; the classic electrostatic self-energy
    // 3/5 Q^2/R of the uniform ball is (1/2) D, so D = 6/5 here.
    CHECK(coulomb_norm(g, ball, ball) == doctest::Approx(1.2).epsilon(2e-3));
    CHECK(0.5 * coulomb_norm(g, ball, ball) == doctest::Approx(0.6).epsilon(2e-3));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> f(g.size());
        const double a1 = amp(rng), a2 = amp(rng), s1 = 0.5 + trial * 0.3;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double r = g.node(i);
            f[i] = a1 * std::exp(-s1 * r * r) + a2 * std::exp(-r);
        }
        CHECK(coulomb_norm(g, f, f) >= -1e-10);
    }
}

TEST_CASE("energy functional: route consistency and variational minimality") {
    TFSolution sol = solve_tf_atom(1.0, 1.0, 2);
    const double ef = tf_energy(sol);
    const double ed = tf_energy_dual(sol);
    CHECK(ef == doctest::Approx(sol.E_TF).epsilon(2e-3));
    CHECK(ed == doctest::Approx(sol.E_TF).epsilon(2e-3));

    // E[rho + delta] >= E[rho] for charge-preserving perturbations
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.2, 3.0);
    const double e0 = tf_energy(sol);
    for (int trial = 0; trial < 10; ++trial) {
        TFSolution pert = sol;
        const double c1 = U(rng), c2 = U(rng), amp = 0.02 * U(rng);
        std::vector<double> delta(sol.grid.size());
        for (std::size_t i = 0; i < delta.size(); ++i) {
            const double r = sol.grid.node(i);
            delta[i] = std::exp(-c1 * r * r) - std::exp(-c2 * r);
        }
        std::vector<double> one(delta.size(), 1.0);
        const double net = sol.grid.integrate(delta);
        const double vol = sol.grid.integrate(one);
        for (std::size_t i = 0; i < delta.size(); ++i) delta[i] -= net / vol;
        double worst = 1.0;
        for (std::size_t i = 0; i < delta.size(); ++i)
            if (delta[i] < 0.0 && sol.rho[i] + amp * delta[i] < 0.0)
                worst = std::min(worst, -sol.rho[i] / (amp * delta[i]));
        for (std::size_t i = 0; i < delta.size(); ++i)
            pert.rho[i] = std::max(sol.rho[i] + 0.9 * worst * amp * delta[i], 0.0);
        CHECK(tf_energy(pert) >= e0 - 1e-9 * std::abs(e0));
    }
}

TEST_CASE("screening bounds (V - W ordering) and scaled derivatives") {
    for (double Z : {1.0, 20.0}) {
        TFSolution sol = solve_tf_atom(Z, Z, 2);
        const double h = 1e-4;
        for (double ell : {0.05 / Z, 0.3, 1.0, 3.0}) {
            auto VmW = [&](double r) {
                return Z / r - (sol.screened_potential(r) - sol.nu);
            };
            const double zeta2 = std::min(std::pow(Z, 4.0 / 3.0), Z / ell);
            const double v = VmW(ell);
            CHECK(v >= -1e-9);
            CHECK(v <= 8.0 * zeta2);
            const double d1 = (VmW(ell * (1 + h)) - VmW(ell * (1 - h))) / (2 * h * ell);
            const double d2 = (VmW(ell * (1 + h)) - 2 * v + VmW(ell * (1 - h))) /
                              (h * ell * h * ell);
            CHECK(std::abs(d1) <= 8.0 * zeta2 / ell);
            CHECK(std::abs(d2) <= 40.0 * zeta2 / (ell * ell));
        }
    }
}

TEST_CASE("mollifier: normalization, charge conservation, convergence") {
    const int n = 40000;
    double I = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double s = 1.2 * i / n;
        I += mollifier_profile(s) * 4.0 * kPi * s * s * (1.2 / n) *
             ((i == 0 || i == n) ? 0.5 : 1.0);
    }
    CHECK(I == doctest::Approx(1.0).epsilon(1e-6));

    TFSolution sol = solve_tf_atom(2.0, 2.0, 2);
    const RadialGrid& g = sol.grid;
    const double q0 = 4.0 * kPi * g.integrate(sol.rho);
    double prev_err = 1e300;
    for (double eps : {0.5, 0.2, 0.08}) {
        std::vector<double> rm = mollify_density(g, sol.rho, eps);
        const double qm = 4.0 * kPi * g.integrate(rm);
        CHECK(qm == doctest::Approx(q0).epsilon(5e-3));
        std::vector<double> We = mollify_potential(sol, eps);
        double err = 0.0;  // sup norm over a fixed window away from the core
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.node(i) > 6.0 && g.node(i) < 15.0)
                err = std::max(err, std::abs(We[i] - sol.W[i]));
        CHECK(err < prev_err * 1.01);
        prev_err = err;
    }
    // mollification error bound: |W_eps - W| <= C (Z/l)^{3/2} eps^2 at l >= 10 eps
    const double eps = 0.08;
    std::vector<double> We = mollify_potential(sol, eps);
    double Cfit = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = g.node(i);
        if (r < 10.0 * eps || r > 5.0) continue;
        const double bound = std::pow(sol.Z / r, 1.5) * eps * eps;
        Cfit = std::max(Cfit, std::abs(We[i] - sol.W[i]) / bound);
    }
    CHECK(Cfit < 10.0);
}

TEST_CASE("serialization: bit-exact round trip") {
    TFSolution sol = solve_tf_atom(7.0, 6.0, 2);
    const std::string text = tf_solution_to_text(sol);
    TFSolution back = tf_solution_from_text(text);
    REQUIRE(back.grid.size() == sol.grid.size());
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        CHECK(back.grid.node(i) == sol.grid.node(i));
        CHECK(back.rho[i] == sol.rho[i]);
        CHECK(back.W[i] == sol.W[i]);
    }
    CHECK(back.E_TF == sol.E_TF);
    CHECK(back.nu == sol.nu);
    CHECK(tf_solution_to_text(back) == text);
}
