#include <doctest.h>

#include <cmath>

#include "fht/kernels.hpp"
#include "test_util.hpp"

using namespace fht;

namespace {
struct Fixture {
    IntervalConfig cfg = make_config(-1.0, 1.0, {0.0}, BandLabel::E);
    GEvaluator gfun = GEvaluator::from_config(cfg);
    KernelEvaluator ker{cfg, gfun};
};

struct Fixture2 {
    IntervalConfig cfg = make_config(0.0, 1.0, {0.25, 0.75}, BandLabel::E);
    GEvaluator gfun = GEvaluator::from_config(cfg);
    KernelEvaluator ker{cfg, gfun};
};

KernelPair pair_of(const IntervalConfig& cfg, double x, double y) {
    const bool xe = classify(cfg, x) == PointClass::interior_E;
    const bool ye = classify(cfg, y) == PointClass::interior_E;
    return xe ? (ye ? KernelPair::EE : KernelPair::EJ)
              : (ye ? KernelPair::JE : KernelPair::JJ);
}
} // namespace

TEST_CASE("kappa of lambda") {
    CHECK(kappa_of_lambda(0.02) == doctest::Approx(std::log(100.0)).epsilon(1e-15));
    CHECK(kappa_of_lambda(-0.02) == doctest::Approx(std::log(100.0)).epsilon(1e-15));
    CHECK_THROWS_AS(kappa_of_lambda(0.0), std::domain_error);
    CHECK_THROWS_AS(kappa_of_lambda(1.5), std::domain_error);
}

TEST_CASE("phi values: cosine envelope and special phase") {
    Fixture f;
    // kappa chosen so kappa g_im(1/2) = pi/4 makes phi_+ vanish
    const double kap = (M_PI / 4.0) / f.gfun.g_im(0.5);
    PhiPair p = f.ker.phi_values(0.5, kap);
    const double mod_plus = std::abs(f.ker.model().bn_quarter(0.5, Shore::upper, +1));
    CHECK(std::abs(p.phi_plus) < 1e-12 * mod_plus);

    std::mt19937_64 rng(61);
    for (int t = 0; t < 100; ++t) {
        const double x = (testutil::unif(rng) < 0.5 ? -1.0 : 1.0) *
                         (0.05 + 0.9 * testutil::unif(rng));
        const double k2 = std::log(2.0) + 10.0 * testutil::unif(rng);
        PhiPair q = f.ker.phi_values(x, k2);
        const double mp = std::abs(f.ker.model().bn_quarter(x, Shore::upper, +1));
        const double mm = std::abs(f.ker.model().bn_quarter(x, Shore::upper, -1));
        CHECK(std::abs(q.phi_plus) <= mp * (1 + 1e-14));
        CHECK(std::abs(q.phi_minus) <= mm * (1 + 1e-14));
        CHECK(std::abs(q.phi_tilde_plus) <= mp * (1 + 1e-14));
        CHECK(std::abs(q.phi_tilde_minus) <= mm * (1 + 1e-14));
        // trigonometric closed forms per band
        const double gim = f.gfun.g_im(x);
        if (x > 0) { // J side
            CHECK(q.phi_plus ==
                  doctest::Approx(mp * std::cos(k2 * gim + M_PI / 4)).epsilon(1e-12));
            CHECK(q.phi_minus ==
                  doctest::Approx(mm * std::cos(k2 * gim - M_PI / 4)).epsilon(1e-12));
        } else { // E side: phi-tilde carries the leading sign
            CHECK(q.phi_tilde_plus ==
                  doctest::Approx(mp * std::cos(k2 * gim + M_PI / 4)).epsilon(1e-12));
            CHECK(q.phi_tilde_minus ==
                  doctest::Approx(-mm * std::cos(k2 * gim - M_PI / 4)).epsilon(1e-12));
        }
    }
}

TEST_CASE("quadratic kernels: symmetry, parity, band mismatch") {
    Fixture f;
    CHECK(f.ker.quadratic_kernel(0.4, 0.6, 0.01, KernelPair::JJ) ==
          doctest::Approx(f.ker.quadratic_kernel(0.6, 0.4, 0.01, KernelPair::JJ))
              .epsilon(1e-13));
    // EE odd in lambda, EJ even
    CHECK(f.ker.quadratic_kernel(-0.4, -0.6, -0.01, KernelPair::EE) ==
          doctest::Approx(-f.ker.quadratic_kernel(-0.4, -0.6, 0.01, KernelPair::EE))
              .epsilon(1e-13));
    CHECK(f.ker.quadratic_kernel(-0.4, 0.6, -0.01, KernelPair::EJ) ==
          doctest::Approx(f.ker.quadratic_kernel(-0.4, 0.6, 0.01, KernelPair::EJ))
              .epsilon(1e-13));
    CHECK(f.ker.quadratic_kernel(0.4, -0.6, -0.01, KernelPair::JE) ==
          doctest::Approx(f.ker.quadratic_kernel(0.4, -0.6, 0.01, KernelPair::JE))
              .epsilon(1e-13));
    CHECK(f.ker.quadratic_kernel(0.4, 0.6, -0.01, KernelPair::JJ) ==
          doctest::Approx(-f.ker.quadratic_kernel(0.4, 0.6, 0.01, KernelPair::JJ))
              .epsilon(1e-13));
    CHECK_THROWS_AS(f.ker.quadratic_kernel(0.4, 0.6, 0.01, KernelPair::EE), std::domain_error);
}

TEST_CASE("Cholesky route equals the quadratic-form route") {
    Fixture2 f;
    std::mt19937_64 rng(71);
    const double excl = 2.0 * f.gfun.delta_excl();
    auto draw = [&](int seg) {
        const double lo = (seg == 0) ? 0.0 : (seg == 1 ? 0.25 : 0.75);
        const double hi = (seg == 0) ? 0.25 : (seg == 1 ? 0.75 : 1.0);
        return lo + excl + (hi - lo - 2 * excl) * testutil::unif(rng);
    };
    for (int t = 0; t < 500; ++t) {
        const double x = draw(static_cast<int>(testutil::unif(rng) * 3) % 3);
        const double y = draw(static_cast<int>(testutil::unif(rng) * 3) % 3);
        const double lam = (testutil::unif(rng) < 0.5 ? -1.0 : 1.0) *
                           std::pow(10.0, -1.0 - 3.0 * testutil::unif(rng));
        const double lhs = f.ker.approx_Eprime(x, y, lam);
        const double sgn = lam > 0 ? 1.0 : -1.0;
        const double rhs = (2.0 / (M_PI * M_PI)) * sgn *
                           f.ker.quadratic_kernel(x, y, lam, pair_of(f.cfg, x, y)) / 4.0;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("amplitudes: symmetric hand value and 1x1 block structure") {
    Fixture f;
    auto A = f.ker.amplitudes(0.5);
    REQUIRE(A.size() == 1);
    // (sqrt2/pi) |B^{-1/4}(0.5+)| (1/sqrt2) (1/(x-b)); |B_1| = (1-x^2)/x^2
    const double want = (2.0 / M_PI) * std::pow(3.0, -0.25);
    CHECK(A[0] == doctest::Approx(want).epsilon(1e-13));

    Fixture2 f2;
    auto A2 = f2.ker.amplitudes(0.5);
    REQUIRE(A2.size() == 2);
    // [C_- v_-]_1 reduces to the scalar block times 1/(x-b_1)
    const double c11 = f2.ker.chol().C1(0, 0);
    const double expect =
        (std::sqrt(2.0) / M_PI) * std::abs(f2.ker.model().bn_quarter(0.5, Shore::upper, -1)) *
        c11 / (0.5 - 0.25);
    CHECK(A2[0] == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("amplitude blow-up exponent at the double point is -1/2") {
    Fixture f;
    std::vector<double> xs, amps;
    for (double e : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) xs.push_back(e);
    KernelGrid grid = f.ker.precompute_grid(xs);
    double slope_sum = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double slope = (std::log(grid.amp[0][i + 1]) - std::log(grid.amp[0][i])) /
                             (std::log(xs[i + 1]) - std::log(xs[i]));
        slope_sum += slope;
        ++cnt;
    }
    CHECK(slope_sum / cnt == doctest::Approx(-0.5).epsilon(2e-3));
}

TEST_CASE("G kernels: signs, lambda flip, and composition") {
    Fixture f;
    const double lam = 0.02;
    const double kap = kappa_of_lambda(lam);
    // on E, j <= Ntilde: G_j = -A_j cos(kappa g_im - pi/4)
    auto GE = f.ker.g_kernels(-0.5, lam);
    auto A = f.ker.amplitudes(-0.5);
    const double gim = f.gfun.g_im(-0.5);
    CHECK(GE[0] == doctest::Approx(-A[0] * std::cos(kap * gim - M_PI / 4)).epsilon(1e-13));
    // lambda -> -lambda flips J, fixes E
    auto GJp = f.ker.g_kernels(0.5, lam);
    auto GJm = f.ker.g_kernels(0.5, -lam);
    CHECK(GJp[0] == doctest::Approx(-GJm[0]).epsilon(1e-13));
    auto GEm = f.ker.g_kernels(-0.5, -lam);
    CHECK(GE[0] == doctest::Approx(GEm[0]).epsilon(1e-13));
    // composition at x = 1/2, lambda = 0.02
    auto AJ = f.ker.amplitudes(0.5);
    const double want = AJ[0] * std::cos(kap * f.gfun.g_im(0.5) - M_PI / 4);
    CHECK(GJp[0] == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("approx_Eprime: Gram positivity, symmetry, rank bound") {
    Fixture2 f;
    std::mt19937_64 rng(83);
    std::vector<double> pts = {0.05, 0.12, 0.3, 0.42, 0.55, 0.68, 0.83, 0.93};
    const double lam = 3e-3;
    Eigen::MatrixXd gram(pts.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            gram(i, j) = f.ker.approx_Eprime(pts[i], pts[j], lam);
    CHECK((gram - gram.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    // Gram positivity for random coefficient vectors
    for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd c(pts.size());
        for (int i = 0; i < c.size(); ++i) c(i) = 2.0 * testutil::unif(rng) - 1.0;
        CHECK(c.dot(gram * c) >= -1e-12 * gram.norm() * c.squaredNorm());
    }
    // numerical rank <= n with a 10-order singular value gap
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
    const auto& s = svd.singularValues();
    CHECK(s(2) <= 1e-10 * s(0));
}

TEST_CASE("oscillation: zero spacing of G_1 matches pi/(kappa |g_im'|)") {
    Fixture f;
    const double kap = 20.0;
    const double lam = 2.0 * std::exp(-kap);
    // locate consecutive zeros of G_1 on (0.2, 0.8) by fine scan + bisection
    auto Gat = [&](double x) { return f.ker.g_kernels(x, lam)[0]; };
    std::vector<double> zeros;
    double prev = Gat(0.20), prev_x = 0.20;
    for (int i = 1; i <= 2000; ++i) {
        const double x = 0.20 + 0.6 * i / 2000.0;
        const double v = Gat(x);
        if (prev * v < 0.0) {
            double a = prev_x, b = x, fa = prev;
            for (int it = 0; it < 60; ++it) {
                const double mfv = Gat(0.5 * (a + b));
                if (fa * mfv <= 0.0) b = 0.5 * (a + b);
                else {
                    a = 0.5 * (a + b);
                    fa = mfv;
                }
            }
            zeros.push_back(0.5 * (a + b));
        }
        prev = v;
        prev_x = x;
    }
    REQUIRE(zeros.size() >= 2);
    for (std::size_t i = 0; i + 1 < zeros.size(); ++i) {
        const double mid = 0.5 * (zeros[i] + zeros[i + 1]);
        const double want = M_PI / (kap * std::abs(f.gfun.g_im_prime(mid)));
        CHECK(zeros[i + 1] - zeros[i] == doctest::Approx(want).epsilon(0.05));
    }
}

TEST_CASE("illposedness index: value, ratio law, monotonicity") {
    Fixture f;
    const double kap = std::log(100.0);
    const double ref = std::exp(kap / std::abs(f.gfun.g_im_prime(0.5)));
    CHECK(f.ker.illposedness_index(0.5, 0.02) == doctest::Approx(ref).epsilon(1e-12));
    // kappa shift by one: ratio exp(1/|g'|)
    const double r = f.ker.illposedness_index(0.5, 0.02 / M_E) / f.ker.illposedness_index(0.5, 0.02);
    CHECK(r == doctest::Approx(std::exp(1.0 / std::abs(f.gfun.g_im_prime(0.5)))).epsilon(1e-10));
    // monotone decreasing in |g_im'| at fixed lambda: 0.3 has larger |g'| than 0.55
    CHECK(std::abs(f.gfun.g_im_prime(0.3)) > std::abs(f.gfun.g_im_prime(0.55)));
    CHECK(f.ker.illposedness_index(0.3, 0.02) < f.ker.illposedness_index(0.55, 0.02));
}

TEST_CASE("select_sample_points: displacement bound, residual, convergence to seeds") {
    Fixture f;
    for (double lam : {1e-3, 1e-5, 1e-7}) {
        SamplePoints sp = f.ker.select_sample_points(lam, 0.3, 0.7, 1);
        REQUIRE(sp.x.size() == 1);
        CHECK(std::abs(sp.x[0] - sp.seeds[0]) <= sp.displacement_bound * (1 + 1e-12));
        // root residual against the bisection target; for n = 1 the phase
        // offset c0 maximizing |cos(c0 - pi/4)| is pi/4, and the target
        // family is spaced by half periods
        const double kap = kappa_of_lambda(lam);
        const double gv = f.gfun.g_im(sp.x[0]);
        const double frac = std::remainder(kap * gv - M_PI / 4.0, M_PI);
        CHECK(std::abs(frac) < 1e-8 * kap);
        CHECK(std::abs(sp.gram_det) > 1e-8);
    }
    // displacement bound shrinks like 1/kappa, so roots converge to seeds
    SamplePoints s3 = f.ker.select_sample_points(1e-3, 0.3, 0.7, 1);
    SamplePoints s7 = f.ker.select_sample_points(1e-7, 0.3, 0.7, 1);
    CHECK(s7.displacement_bound < 0.5 * s3.displacement_bound);
}

TEST_CASE("select_sample_points: two points in one band for n = 2") {
    Fixture2 f;
    SamplePoints sp = f.ker.select_sample_points(1e-4, 0.33, 0.67, 2);
    REQUIRE(sp.x.size() == 2);
    CHECK(sp.x[0] != sp.x[1]);
    for (int k = 0; k < 2; ++k)
        CHECK(std::abs(sp.x[k] - sp.seeds[k]) <= sp.displacement_bound * (1 + 1e-12));
    CHECK(std::abs(sp.gram_det) > 1e-8);
}

TEST_CASE("kernel evaluation refuses exclusion zones") {
    Fixture f;
    CHECK_THROWS_AS(f.ker.amplitudes(5e-4), exclusion_error);
    CHECK_THROWS_AS(f.ker.g_kernels(1.0 - 1e-4, 0.01), exclusion_error);
    CHECK_THROWS_AS(f.ker.illposedness_index(-1.0 + 1e-4, 0.01), exclusion_error);
}
