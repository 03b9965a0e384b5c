#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "atomtf/model.hpp"

using namespace atomtf;

TEST_CASE("coulomb potential: single and double nuclei") {
    auto one = NuclearConfiguration::atom(1.0, 2, 0.0, 1.0);
    CHECK(coulomb_potential(one, {2.0, 0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));

    NuclearConfiguration two({1.0, 1.0}, {Vec3{1, 0, 0}, Vec3{-1, 0, 0}}, 2, 0.0, 2.0);
    CHECK(coulomb_potential(two, {0.0, 0.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-14));

    auto heavy = NuclearConfiguration::atom(90.0, 2, 0.0, 90.0);
    CHECK(coulomb_potential(heavy, {1e-2, 0.0, 0.0}) == doctest::Approx(9000.0).epsilon(1e-12));
    CHECK_THROWS_AS(coulomb_potential(heavy, {0.0, 0.0, 0.0}), singular_point_error);
}

TEST_CASE("configuration invariants") {
    CHECK_THROWS_AS(NuclearConfiguration({1.0, 1.0}, {Vec3{0, 0, 0}, Vec3{0, 0, 0}}, 2, 0.0, 2.0),
                    config_error);
    auto cfg = NuclearConfiguration::atom(100.0, 2, 0.006, 100.0);
    CHECK(cfg.subcritical());             // 0.6 < 2/pi
    CHECK(!cfg.strictly_subcritical(0.05));
    auto super = NuclearConfiguration::atom(110.0, 2, 0.006, 110.0);
    CHECK(!super.subcritical());          // 0.66 > 2/pi
}

TEST_CASE("radial grid quadrature self-check") {
    RadialGrid g = RadialGrid::logarithmic(1e-6, 40.0, 2000);
    CHECK(g.exponential_check() < 5e-5);
    CHECK(g.node(0) < g.node(1));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.weight(i) > 0.0);
    // second-order convergence under refinement
    RadialGrid g2 = RadialGrid::logarithmic(1e-6, 40.0, 4000);
    CHECK(g2.exponential_check() < 0.35 * g.exponential_check());
}

TEST_CASE("pressure: pinned values and negative part") {
    for (auto kind : {PressureKind::TF, PressureKind::TFprime, PressureKind::RTF,
                      PressureKind::RTFprime})
        CHECK(pressure(kind, -1.0, 2, 0.1) == 0.0);

    // q=2, w=1, TF -> 2/(15 pi^2)
    CHECK(pressure(PressureKind::TF, 1.0, 2, 0.0) ==
          doctest::Approx(2.0 / (15.0 * kPi * kPi)).epsilon(1e-14));

    // beta = 0: RTF' == TF'
    for (double w : {0.3, 1.0, 7.5})
        CHECK(pressure(PressureKind::RTFprime, w, 2, 0.0) ==
              doctest::Approx(pressure(PressureKind::TFprime, w, 2, 0.0)).epsilon(1e-14));
}

TEST_CASE("RTF antiderivative: closed form vs adaptive quadrature") {
    // Simpson with many panels as the independent quadrature
    auto quad = [](double w, double b) {
        const int n = 20000;
        const double h = w / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double t = h * i;
            const double f = std::pow(t, 1.5) * std::pow(1.0 + b * t, 1.5);
            s += f * ((i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0));
        }
        return s * h / 3.0;
    };
    for (double b : {0.01, 0.3, 2.0, 40.0})
        for (double w : {0.2, 1.0, 5.0}) {
            const double exact = rtf_antiderivative(w, b);
            CHECK(exact == doctest::Approx(quad(w, b)).epsilon(1e-10));
        }
}

TEST_CASE("pressure gap matches the beta^2 w^{7/2} law for small beta^2 w") {
    const int q = 2;
    for (double beta : {1e-2, 1e-3})
        for (double w : {0.1, 1.0, 10.0, 100.0 * 0.9}) {
            if (beta * beta * w > 1e-2) continue;
            const double gap = pressure_gap(w, q, beta);
            const double law = q / (14.0 * kPi * kPi) * beta * beta * std::pow(w, 3.5);
            CHECK(gap == doctest::Approx(law).epsilon(1e-2));
        }
}

TEST_CASE("pressure monotonicity and RTF' >= TF'") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> wdist(-2.0, 20.0);
    for (int i = 0; i < 300; ++i) {
        const double w1 = wdist(rng), w2 = w1 + 0.3;
        for (auto kind : {PressureKind::TF, PressureKind::TFprime, PressureKind::RTF,
                          PressureKind::RTFprime}) {
            CHECK(pressure(kind, w2, 2, 0.2) >= pressure(kind, w1, 2, 0.2));
        }
        const double w = std::abs(w1);
        CHECK(pressure(PressureKind::RTFprime, w, 2, 0.2) >=
              pressure(PressureKind::TFprime, w, 2, 0.2));
    }
}

TEST_CASE("derivative consistency of TF/RTF pairs") {
    const double h = 1e-5;
    for (double w = 0.1; w <= 10.0; w *= 1.7) {
        const double dTF =
            (pressure(PressureKind::TF, w + h, 2, 0.0) - pressure(PressureKind::TF, w - h, 2, 0.0)) /
            (2.0 * h);
        CHECK(dTF == doctest::Approx(pressure(PressureKind::TFprime, w, 2, 0.0)).epsilon(1e-6));
        const double dRTF = (pressure(PressureKind::RTF, w + h, 2, 0.3) -
                             pressure(PressureKind::RTF, w - h, 2, 0.3)) /
                            (2.0 * h);
        CHECK(dRTF == doctest::Approx(pressure(PressureKind::RTFprime, w, 2, 0.3)).epsilon(1e-6));
    }
}

TEST_CASE("weyl pressure is the phase-space integral of the actual symbols") {
    // direct phase-space quadrature of (2pi)^{-3} q int (w - b(xi))_+ dxi
    auto weyl_quad = [](double w, int q, double beta) {
        const int n = 40000;
        const double pmax = beta > 0.0
                                ? std::sqrt(2.0 * w + beta * beta * w * w) * 1.0000001
                                : std::sqrt(2.0 * w);
        const double h = pmax / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double p = h * i;
            const double b = beta > 0.0
                                 ? p * p / (1.0 + std::sqrt(1.0 + beta * beta * p * p))
                                 : 0.5 * p * p;
            const double f = std::max(w - b, 0.0) * p * p;
            s += f * ((i == 0 || i == n) ? 0.5 : 1.0);
        }
        return q / (2.0 * kPi * kPi) * s * h;
    };
    for (double w : {0.5, 2.0})
        for (double beta : {0.0, 0.4}) {
            CHECK(pressure_weyl(PressureKind::RTF, w, 2, beta) ==
                  doctest::Approx(weyl_quad(w, 2, beta)).epsilon(1e-6));
        }
    CHECK(pressure_weyl(PressureKind::TF, 1.3, 2, 0.0) ==
          doctest::Approx(weyl_quad(1.3, 2, 0.0)).epsilon(1e-6));
}

TEST_CASE("zone map classification and scales") {
    auto cfg = NuclearConfiguration::atom(100.0, 2, 0.0, 100.0);
    auto zones = zone_map(cfg, {1e-4, 1.0});
    CHECK(zones[0].zone == Zone::Singular);
    CHECK(zones[1].zone == Zone::Semiclassical);
    CHECK(zones[1].zeta_sq == doctest::Approx(100.0));

    // beta = 0: no relativistic zone anywhere
    for (const auto& z : zones) CHECK(!z.relativistic);

    // h <= 1 exactly on the semiclassical zone (c = 1)
    std::vector<double> radii;
    for (double l = 1e-4; l < 10.0; l *= 1.37) radii.push_back(l);
    for (const auto& z : zone_map(cfg, radii)) CHECK((z.h <= 1.0) == z.semiclassical);

    auto rel = NuclearConfiguration::atom(50.0, 2, 0.01, 50.0);
    auto zr = zone_map(rel, {5e-3, 0.5});
    CHECK(zr[0].zone == Zone::Relativistic);
    CHECK(zr[1].zone == Zone::Semiclassical);
}
