#include <doctest.h>

#include <cmath>

#include "fht/gfunction.hpp"
#include "test_util.hpp"

using namespace fht;

namespace {
IntervalConfig symmetric() { return make_config(-1.0, 1.0, {0.0}, BandLabel::E); }

// closed-form Im g(x_+) of the symmetric case, both bands
double gim_closed(double x) { return std::log(std::abs(x) / (1.0 - std::sqrt(1.0 - x * x))) / M_PI; }
} // namespace

TEST_CASE("radical: branch and shore values") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    CHECK(g.radical(cplx(2.0, 0.0)).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(std::abs(g.radical(0.0, Shore::upper) - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(g.radical(0.3, Shore::upper) + g.radical(0.3, Shore::lower)) < 1e-15);
    // R(z) - z -> 0 at infinity (g = 0)
    CHECK(std::abs(g.radical(cplx(1e6, 0.0)) - cplx(1e6, 0.0)) < 1e-5);
    CHECK_THROWS_AS(g.radical(cplx(1.0, 0.0)), branch_point_error);
}

TEST_CASE("g boundary values on the symmetric case") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    const double want = std::log(2.0 + std::sqrt(3.0)) / M_PI; // 0.41924...
    cplx up = g.g_boundary(0.5, Shore::upper);
    CHECK(up.real() == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(up.imag() == doctest::Approx(want).epsilon(1e-12));
    cplx upE = g.g_boundary(-0.5, Shore::upper);
    CHECK(upE.real() == doctest::Approx(0.5).epsilon(1e-14));
    // Schwarz symmetry between shores
    cplx dn = g.g_boundary(0.5, Shore::lower);
    CHECK(std::abs(dn - std::conj(up)) < 1e-15);
}

TEST_CASE("g matches the closed form across both band interiors") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    for (int i = 1; i <= 40; ++i) {
        const double x = -1.0 + 2.0 * i / 41.0;
        if (std::abs(x) < 5e-3 || std::abs(std::abs(x) - 1.0) < 5e-3) continue;
        CHECK(g.g_im(x) == doctest::Approx(gim_closed(x)).epsilon(1e-11));
    }
}

TEST_CASE("jump relations g(x+) + g(x-) = chi on probe grids") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    for (int i = 0; i < 100; ++i) {
        const double t = (i + 0.5) / 100.0;
        const double xJ = 0.004 + t * (0.995 - 0.004);
        const cplx sum = g.g_boundary(xJ, Shore::upper) + g.g_boundary(xJ, Shore::lower);
        CHECK(std::abs(sum - cplx(-1.0, 0.0)) < 1e-8);
        const double xE = -xJ;
        const cplx sumE = g.g_boundary(xE, Shore::upper) + g.g_boundary(xE, Shore::lower);
        CHECK(std::abs(sumE - cplx(1.0, 0.0)) < 1e-8);
    }
}

TEST_CASE("|Re g| < 1/2 off the bands") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    std::mt19937_64 rng(17);
    int checked = 0;
    while (checked < 100) {
        const double re = -3.0 + 6.0 * testutil::unif(rng);
        const double im = -2.0 + 4.0 * testutil::unif(rng);
        if (std::abs(im) < 0.05 && re > -1.1 && re < 1.1) continue;
        const cplx v = g.g(cplx(re, im));
        CHECK(std::abs(v.real()) < 0.5);
        ++checked;
    }
}

TEST_CASE("g_im' sign pattern and finite-difference cross-check") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    CHECK(g.g_im_prime(0.5) < 0.0);  // J side
    CHECK(g.g_im_prime(-0.5) > 0.0); // E side
    // derived closed-form value at x = 1/2
    const double ref = (2.0 - (0.5 / std::sqrt(0.75)) / (1.0 - std::sqrt(0.75))) / M_PI;
    CHECK(g.g_im_prime(0.5) == doctest::Approx(ref).epsilon(1e-9));
    for (double x : {0.15, 0.45, 0.85, -0.3, -0.7}) {
        const double h = 1e-6;
        const double fd = (g.g_im(x + h) - g.g_im(x - h)) / (2.0 * h);
        CHECK(g.g_im_prime(x) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("g_im monotone decreasing on J toward a2, vanishing there") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    double prev = HUGE_VAL;
    for (int i = 1; i <= 30; ++i) {
        const double x = 0.01 + (0.985 - 0.01) * i / 30.0;
        const double v = g.g_im(x);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(g.g_im(0.995) < 0.05);
}

TEST_CASE("quadrature convergence: doubling panels moves g_boundary below 1e-9") {
    QuadratureSpec coarse;
    QuadratureSpec fine;
    fine.middle_panels = 2 * coarse.middle_panels;
    GEvaluator g1 = GEvaluator::from_config(symmetric(), coarse);
    GEvaluator g2 = GEvaluator::from_config(symmetric(), fine);
    for (double x : {0.3, 0.62, -0.47, -0.88}) {
        CHECK(std::abs(g1.g_boundary(x, Shore::upper) - g2.g_boundary(x, Shore::upper)) < 1e-9);
    }
}

TEST_CASE("exclusion zone and domain errors") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    CHECK_THROWS_AS(g.g_boundary(1e-4, Shore::upper), exclusion_error);
    CHECK_THROWS_AS(g.g_boundary(1.0 - 1e-4, Shore::upper), exclusion_error);
    CHECK_THROWS_AS(g.g_boundary(1.5, Shore::upper), std::domain_error);
}

TEST_CASE("solve_omegas: no gaps gives an empty list") {
    GEvaluator g = GEvaluator::from_config(symmetric());
    CHECK(g.omegas().empty());
}

TEST_CASE("solve_omegas: symmetric two-band system with even density has Omega = 0") {
    // same label on both bands makes the moment density odd
    BandSystem bs = BandSystem::from_bands({{-2.0, -1.0}, {1.0, 2.0}},
                                           {BandLabel::E, BandLabel::E});
    double res = 0.0, cond = 0.0;
    std::vector<double> om = solve_omegas(bs, {}, &res, &cond);
    REQUIRE(om.size() == 1);
    CHECK(std::abs(om[0]) < 1e-12);
    CHECK(res < 1e-10);
}

TEST_CASE("solve_omegas: E=[-2,-1], J=[1,2]") {
    BandSystem bs = BandSystem::from_bands({{-2.0, -1.0}, {1.0, 2.0}},
                                           {BandLabel::E, BandLabel::J});
    double res = 0.0, cond = 0.0;
    std::vector<double> om = solve_omegas(bs, {}, &res, &cond);
    REQUIRE(om.size() == 1);
    CHECK(res < 1e-10);
    CHECK(cond < 1e6);

    // independent oracle: Omega = (I_E + I_J) / I_gap with I = int 1/|R|
    auto integ = [&](double lo, double hi) {
        EndpointMesh m = endpoint_mesh(lo, hi, true, true, 1e-12, 8, 32);
        double s = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            double v = 1.0;
            for (double a : {-2.0, -1.0, 1.0, 2.0}) {
                if (m.prot[i] == a)
                    v *= std::sqrt(m.dist[i]);
                else
                    v *= std::sqrt(std::abs(m.x[i] - a));
            }
            s += m.w[i] / v;
        }
        return s;
    };
    const double want = (integ(-2.0, -1.0) + integ(1.0, 2.0)) / integ(-1.0, 1.0);
    CHECK(om[0] == doctest::Approx(want).epsilon(1e-10));

    // g stays bounded far away once the moments are killed
    GEvaluator g(bs);
    const cplx far = g.g(cplx(1e6, 0.0));
    CHECK(std::abs(far) < 10.0);
    CHECK(std::abs(far.real()) < 0.5);
    // and the gap jump is i Omega: g(x+) - g(x-) = i Omega on the gap
    const cplx up = g.g(cplx(0.3, 0.0));
    CHECK(std::abs(up.imag() - 0.5 * om[0]) < 1e-9); // upper-shore value carries i Omega/2
}

TEST_CASE("gapped g-function keeps |Re g| < 1/2 and satisfies band conditions") {
    BandSystem bs = BandSystem::from_bands({{-2.0, -1.0}, {1.0, 2.0}},
                                           {BandLabel::E, BandLabel::J});
    GEvaluator g(bs);
    CHECK(g.g_boundary(-1.5, Shore::upper).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(g.g_boundary(1.5, Shore::upper).real() == doctest::Approx(-0.5).epsilon(1e-13));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
        const cplx z(-3.0 + 6.0 * testutil::unif(rng), 0.1 + 2.0 * testutil::unif(rng));
        CHECK(std::abs(g.g(z).real()) < 0.5);
    }
}
