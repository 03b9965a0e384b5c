#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "atomtf/model.hpp"
#include "atomtf/spectral.hpp"
#include "atomtf/tf.hpp"

using namespace atomtf;

namespace {

std::vector<double> hydrogen_channel(int l, double Z, double lam_cut, std::size_t nodes,
                                     double r_max,
                                     std::vector<std::vector<double>>* vecs = nullptr) {
    TridiagonalChannel ch = build_radial_channel(
        l, [Z](double r) { return -Z / r; }, 1e-7 / Z, r_max, nodes);
    std::vector<double> ev;
    solve_tridiagonal(ch, -10.0 * Z * Z, lam_cut, ev, vecs);
    return ev;
}

}  // namespace

TEST_CASE("hydrogen channels hit -Z^2/(2 n^2) after Richardson") {
    for (int l = 0; l <= 2; ++l) {
        std::vector<double> e1 = hydrogen_channel(l, 1.0, -0.015, 9000, 160.0);
        std::vector<double> e2 = hydrogen_channel(l, 1.0, -0.015, 18000, 160.0);
        REQUIRE(e1.size() >= static_cast<std::size_t>(5 - l));
        for (int k = 0; k < 5 - l; ++k) {
            const int n = l + 1 + k;
            const double ext = (4.0 * e2[k] - e1[k]) / 3.0;
            CHECK(std::abs(ext + 0.5 / (n * n)) < 1e-6);
        }
    }
}

TEST_CASE("eigenvalues_below: exact hydrogen counts") {
    std::vector<double> e0 = hydrogen_channel(0, 1.0, -0.1, 9000, 120.0);
    REQUIRE(e0.size() == 2);  // exactly {-0.5, -0.125}
    CHECK(e0[0] == doctest::Approx(-0.5).epsilon(1e-4));
    CHECK(e0[1] == doctest::Approx(-0.125).epsilon(1e-4));
    std::vector<double> e1 = hydrogen_channel(1, 1.0, -0.1, 9000, 120.0);
    REQUIRE(e1.size() == 1);  // exactly {-0.125}
    CHECK(e1[0] == doctest::Approx(-0.125).epsilon(1e-4));
}

TEST_CASE("empty spectrum for the free operator") {
    TridiagonalChannel ch = build_radial_channel(
        0, [](double) { return 0.0; }, 1e-6, 80.0, 4000);
    std::vector<double> ev;
    solve_tridiagonal(ch, -100.0, -1e-10, ev, nullptr);
    CHECK(ev.empty());

    RadialOperatorSpec spec;
    spec.kind = KineticKind::Chandrasekhar;
    spec.beta = 0.3;
    spec.channel = 0;
    spec.coulomb_Z = 0.0;
    MomentumGrid mg = MomentumGrid::logarithmic(1e-3, 1e4, 300);
    MomentumChannel mch = build_momentum_channel(spec, mg);
    solve_momentum(mch, -1e-12, ev, nullptr);
    CHECK(ev.empty());
}

TEST_CASE("eigenvector quality: orthonormality and virial identity") {
    std::vector<std::vector<double>> vecs;
    TridiagonalChannel ch = build_radial_channel(
        0, [](double r) { return -1.0 / r; }, 1e-7, 160.0, 12000);
    std::vector<double> ev;
    solve_tridiagonal(ch, -10.0, -0.015, ev, &vecs);
    REQUIRE(ev.size() >= 4);
    // orthonormality under the grid inner product (w-metric, weight dx)
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a; b < 4; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < vecs[a].size(); ++i) dot += vecs[a][i] * vecs[b][i];
            dot *= ch.dx;
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
        }
    // virial <T> = -E: <T> = E + Z <1/r>
    for (std::size_t k = 0; k < 3; ++k) {
        double inv_r = 0.0;
        for (std::size_t i = 0; i < vecs[k].size(); ++i)
            inv_r += vecs[k][i] * vecs[k][i] / ch.r[i];
        inv_r *= ch.dx;
        const double T = ev[k] + inv_r;
        CHECK(T == doctest::Approx(-ev[k]).epsilon(1e-4));
    }
}

TEST_CASE("legendre_q: closed forms, recurrence, integral representation") {
    for (double x : {1.0 + 1e-8, 1.001, 1.5, 4.0, 1e3, 1e7}) {
        CHECK(legendre_q(0, x) ==
              doctest::Approx(0.5 * std::log((x + 1.0) / (x - 1.0))).epsilon(1e-12));
        CHECK(legendre_q(1, x) ==
              doctest::Approx(x * legendre_q(0, x) - 1.0).epsilon(1e-10));
    }
    // three-term recurrence residual
    for (double x : {1.01, 2.0, 50.0})
        for (int l = 1; l <= 40; ++l) {
            const double lhs = (l + 1.0) * legendre_q(l + 1, x);
            const double rhs = (2.0 * l + 1.0) * x * legendre_q(l, x) -
                               l * legendre_q(l - 1, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-7));
        }
    // independent integral representation Q_l(x) = int_0^inf (x + sqrt(x^2-1) cosh t)^{-(l+1)} dt
    for (int l : {0, 2, 7})
        for (double x : {1.2, 3.0}) {
            const int n = 200000;
            const double tmax = 40.0;
            double s = 0.0;
            for (int i = 0; i <= n; ++i) {
                const double t = tmax * i / n;
                const double f =
                    std::pow(x + std::sqrt(x * x - 1.0) * std::cosh(t), -(l + 1.0));
                s += f * ((i == 0 || i == n) ? 0.5 : 1.0);
            }
            s *= tmax / n;
            CHECK(legendre_q(l, x) == doctest::Approx(s).epsilon(1e-8));
        }
}

TEST_CASE("spherical bessel against the standard library") {
    for (int l : {0, 1, 5, 12, 30})
        for (double x : {1e-3, 0.5, 3.0, 25.0, 400.0}) {
            const double ref = std::sph_bessel(static_cast<unsigned>(l), x);
            CHECK(sph_bessel_j(l, x) == doctest::Approx(ref).epsilon(1e-10));
        }
}

TEST_CASE("momentum Coulomb kernel against position-space quadrature") {
    // <u | 1/r | u> for u = 2 r e^{-r} (hydrogen 1s reduced function) equals 1.
    // The channel momentum function is analytic: v(p) = sqrt(2/pi) 4 p / (1+p^2)^2.
    MomentumGrid mg = MomentumGrid::logarithmic(1e-4, 1e3, 800);
    std::vector<double> vt(mg.p.size(), 0.0);
    for (std::size_t ip = 0; ip < mg.p.size(); ++ip) {
        const double p = mg.p[ip];
        vt[ip] = std::sqrt(2.0 / kPi) * 4.0 * p / ((1.0 + p * p) * (1.0 + p * p));
    }
    // isometry check
    double nrm = 0.0;
    for (std::size_t ip = 0; ip < mg.p.size(); ++ip) nrm += mg.w[ip] * vt[ip] * vt[ip];
    CHECK(nrm == doctest::Approx(1.0).epsilon(1e-6));

    RadialOperatorSpec spec;
    spec.kind = KineticKind::NonRelativistic;
    spec.channel = 0;
    spec.coulomb_Z = 1.0;
    MomentumChannel ch = build_momentum_channel(spec, mg);
    // quadratic form of -Z * (coulomb kernel) is -(Z) <1/r>; subtract kinetic
    double form = 0.0, kin = 0.0;
    for (std::size_t i = 0; i < ch.n; ++i) {
        const double ci = std::sqrt(mg.w[i]) * vt[i];
        kin += 0.5 * mg.p[i] * mg.p[i] * ci * ci;
        for (std::size_t j = 0; j < ch.n; ++j)
            form += ci * ch.matrix[i * ch.n + j] * std::sqrt(mg.w[j]) * vt[j];
    }
    const double coulomb = kin - form;  // = Z <1/r>
    CHECK(coulomb == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(form == doctest::Approx(-0.5).epsilon(1e-4));  // exact 1s energy
}

TEST_CASE("momentum channel symmetry and hydrogen limit") {
    RadialOperatorSpec spec;
    spec.kind = KineticKind::Chandrasekhar;
    spec.beta = 1e-3;
    spec.channel = 0;
    spec.coulomb_Z = 1.0;
    MomentumGrid mg = MomentumGrid::logarithmic(1e-4, 1e4, 700);
    MomentumChannel ch = build_momentum_channel(spec, mg);
    double asym = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < ch.n; ++i)
        for (std::size_t j = i + 1; j < ch.n; ++j) {
            asym = std::max(asym, std::abs(ch.matrix[i * ch.n + j] - ch.matrix[j * ch.n + i]));
            scale = std::max(scale, std::abs(ch.matrix[i * ch.n + j]));
        }
    CHECK(asym <= 1e-12 * std::max(scale, 1.0));

    std::vector<double> ev;
    solve_momentum(ch, -1e-4, ev, nullptr);
    REQUIRE(ev.size() >= 3);
    CHECK(ev[0] == doctest::Approx(-0.5).epsilon(1e-3));
    CHECK(ev[1] == doctest::Approx(-0.125).epsilon(1e-3));
}

TEST_CASE("grid refinement: eigenvalues stable under doubling") {
    std::vector<double> e1 = hydrogen_channel(0, 1.0, -0.05, 8000, 120.0);
    std::vector<double> e2 = hydrogen_channel(0, 1.0, -0.05, 16000, 120.0);
    REQUIRE(e1.size() == e2.size());
    for (std::size_t k = 0; k < e1.size(); ++k)
        CHECK(std::abs(e1[k] - e2[k]) / std::abs(e2[k]) < 1e-5);
}

TEST_CASE("criticality: rejection above 2/pi, monotone trend, refinement ladder") {
    RadialOperatorSpec bad;
    bad.kind = KineticKind::Chandrasekhar;
    bad.beta = kCriticalCoupling + 0.02;
    bad.channel = 0;
    bad.coulomb_Z = 1.0;
    MomentumGrid mg = MomentumGrid::logarithmic(1e-3, 1e4, 200);
    CHECK_THROWS_AS(build_momentum_channel(bad, mg), config_error);

    auto ground = [](double zb, std::size_t n, double pmax) {
        RadialOperatorSpec spec;
        spec.kind = KineticKind::Chandrasekhar;
        spec.beta = zb;
        spec.channel = 0;
        spec.coulomb_Z = 1.0;
        MomentumGrid g = MomentumGrid::logarithmic(1e-3, pmax, n);
        MomentumChannel ch = build_momentum_channel(spec, g);
        std::vector<double> ev;
        solve_momentum(ch, -1e-6, ev, nullptr);
        REQUIRE(!ev.empty());
        return ev[0];
    };
    // |ground| increasing in Z*beta
    double prev = 0.0;
    for (double zb : {0.55, 0.60, 0.63}) {
        const double g0 = ground(zb, 700, 3e4);
        CHECK(g0 < prev);
        prev = g0;
    }
    // monotone divergence trend approaching 2/pi
    const double near = ground(kCriticalCoupling - 2e-4, 900, 1e5);
    CHECK(near < ground(0.55, 900, 1e5));
    CHECK(std::abs(near) > 1.3 * std::abs(ground(0.55, 900, 1e5)));
    // refinement ladder decreases monotonically at 2/pi - 0.02
    const double zb = kCriticalCoupling - 0.02;
    double last = 0.0;
    for (auto [n, pmax] : {std::pair{500, 1e4}, {800, 1e5}, {1200, 1e6}}) {
        const double g0 = ground(zb, n, pmax);
        CHECK(g0 < last);
        CHECK(g0 > -10.0);  // finite, well above the -C0 Z^2 scale
        last = g0;
    }
}

TEST_CASE("negative trace: trivial zero, Daubechies-style growth") {
    OperatorOptions opt;
    opt.L_max = 10;
    opt.nodes = 4000;
    opt.r_max = 60.0;
    // W <= 0 everywhere -> empty negative spectrum
    TraceResult zero = negative_trace(KineticKind::NonRelativistic, 0.0,
                                      [](double) { return -0.3; }, 0.0, 2, opt);
    CHECK(zero.value == 0.0);

    // TF atom potential: -Tr grows like Z^{7/3} at leading order.  At desk
    // scale the Z^2 core correction is sizeable, so fit the two-term model
    // a Z^{7/3} + b Z^2 and compare the leading coefficient with the
    // semiclassical prediction (2/3) |E_TF| / Z^{7/3} = 0.5125 (q = 2).
    std::vector<double> zs = {5.0, 10.0, 20.0};
    std::vector<double> vals;
    for (double Z : zs) {
        TFSolution tf = solve_tf_atom(Z, Z, 2);
        OperatorOptions o2;
        o2.L_max = 18 + static_cast<int>(2.0 * std::sqrt(Z));
        o2.nodes = 7000;
        o2.r_min = 1e-7;
        o2.r_max = 80.0;
        TraceResult tr = negative_trace(
            KineticKind::NonRelativistic, 0.0,
            [&tf](double r) { return std::max(tf.screened_potential(r), 0.0); }, 0.0, 2, o2);
        vals.push_back(-tr.value);
    }
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double f1 = std::pow(zs[i], 7.0 / 3.0), f2 = zs[i] * zs[i];
        s11 += f1 * f1;
        s12 += f1 * f2;
        s22 += f2 * f2;
        b1 += f1 * vals[i];
        b2 += f2 * vals[i];
    }
    const double det = s11 * s22 - s12 * s12;
    const double a = (b1 * s22 - b2 * s12) / det;
    const double bcoef = (s11 * b2 - s12 * b1) / det;
    CHECK(a == doctest::Approx(0.5125).epsilon(0.1));
    CHECK(std::abs(bcoef) < 1.5);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const double model = a * std::pow(zs[i], 7.0 / 3.0) + bcoef * zs[i] * zs[i];
        CHECK(vals[i] == doctest::Approx(model).epsilon(0.02));
    }
}

TEST_CASE("counting function: hydrogen shells and TF electron count") {
    OperatorOptions opt;
    opt.L_max = 4;
    opt.nodes = 9000;
    opt.r_min = 1e-7;
    opt.r_max = 200.0;
    // nu in the gap below the K-th shell: exactly sum_{n<=K} n^2 states at q = 1
    const int K = 3;
    const double nu = -0.5 / ((K + 0.5) * (K + 0.5));
    TraceResult c = counting_function(KineticKind::NonRelativistic, 0.0,
                                      [](double r) { return 1.0 / r; }, -nu, 1, opt);
    CHECK(c.value == doctest::Approx(14.0));  // 1 + 4 + 9

    TraceResult z = counting_function(KineticKind::NonRelativistic, 0.0,
                                      [](double) { return 0.0; }, 0.0, 2, opt);
    CHECK(z.value == 0.0);
}

TEST_CASE("density diagonals: normalization and e(x,x,lambda) bound") {
    std::vector<double> r;
    for (double rr = 1e-4; rr < 60.0; rr *= 1.05) r.push_back(rr);
    OperatorOptions opt;
    opt.L_max = 3;
    opt.nodes = 8000;
    opt.r_min = 1e-7;
    opt.r_max = 150.0;
    BoundChannels bc = bound_states(KineticKind::NonRelativistic, 0.0,
                                    [](double rr) { return 1.0 / rr; }, -0.02, opt, r);
    // below the ground state: empty
    std::vector<double> none = density_diagonal(bc, -1.0);
    for (double v : none) CHECK(v == 0.0);
    // int e(x,x,lambda) dx = counting function at lambda
    std::vector<double> rho = density_diagonal(bc, -0.02);
    double count = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i)
        count += 0.5 * (r[i] - r[i - 1]) *
                 (rho[i] * 4.0 * kPi * r[i] * r[i] + rho[i - 1] * 4.0 * kPi * r[i - 1] * r[i - 1]);
    double expected = 0.0;
    for (const auto& cs : bc.channels)
        for (double ev : cs.eigenvalues)
            if (ev <= -0.02) expected += cs.degeneracy;
    CHECK(count == doctest::Approx(expected).epsilon(1e-3));

    // e1 diagonal integrates to the |lambda|-weighted trace
    std::vector<double> e1 = e1_diagonal(bc);
    double tr = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i)
        tr += 0.5 * (r[i] - r[i - 1]) *
              (e1[i] * 4.0 * kPi * r[i] * r[i] + e1[i - 1] * 4.0 * kPi * r[i - 1] * r[i - 1]);
    double expected_tr = 0.0;
    for (const auto& cs : bc.channels)
        for (double ev : cs.eigenvalues)
            if (ev <= 0.0) expected_tr += cs.degeneracy * std::abs(ev);
    CHECK(tr == doctest::Approx(expected_tr).epsilon(1e-3));
}

TEST_CASE("relativistic density bound e(x,x,0) <= C Z^3 near the core") {
    // Z = 1 by scaling; sample radii below 1/Z for a subcritical ladder.
    std::vector<double> r;
    for (double rr = 1e-3; rr < 1.2; rr *= 1.6) r.push_back(rr);
    double C = 0.0;
    for (double t : {0.3, 0.55}) {
        OperatorOptions opt;
        opt.L_max = 2;
        opt.momentum_nodes = 500;
        opt.p_min = 1e-3;
        opt.p_max = 1e5;
        BoundChannels bc = bound_states(KineticKind::Chandrasekhar, t,
                                        [](double rr) { return 1.0 / rr; }, -1e-4, opt, r);
        std::vector<double> e = density_diagonal(bc, 0.0);
        for (double v : e) C = std::max(C, v);
    }
    CHECK(C < 5.0);  // single corpus-wide constant, Z = 1 scale
}

TEST_CASE("Prop 3-4(i): ground state above -C0 Z^2 across the coupling range") {
    double C0 = 0.0;
    for (double t : {0.1, 0.3, 0.5, kCriticalCoupling - 0.02}) {
        RadialOperatorSpec spec;
        spec.kind = KineticKind::Chandrasekhar;
        spec.beta = t;
        spec.channel = 0;
        spec.coulomb_Z = 1.0;
        MomentumGrid g = MomentumGrid::logarithmic(1e-3, 1e5, 700);
        MomentumChannel ch = build_momentum_channel(spec, g);
        std::vector<double> ev;
        solve_momentum(ch, -1e-6, ev, nullptr);
        REQUIRE(!ev.empty());
        C0 = std::max(C0, -ev[0]);
    }
    CHECK(C0 < kPi * kPi / 4.0);  // the critical-coupling bound pi^2/4 Z^2
}
