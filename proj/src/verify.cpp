#include "fht/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "fht/gfunction.hpp"
#include "fht/kernels.hpp"
#include "fht/model.hpp"
#include "fht/oracle.hpp"
#include "fht/parametrix4.hpp"
#include "fht/spectral_matrix.hpp"

namespace fht {

namespace {

double unif(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

IntervalConfig random_config(std::mt19937_64& rng, int max_n) {
    const int n = 1 + static_cast<int>(unif(rng) * max_n) % max_n;
    std::vector<double> bs;
    while (static_cast<int>(bs.size()) < n) {
        double b = 0.01 + 0.98 * unif(rng);
        bool ok = true;
        for (double o : bs)
            if (std::abs(o - b) < 0.02) ok = false;
        if (ok) bs.push_back(b);
    }
    std::sort(bs.begin(), bs.end());
    return make_config(0.0, 1.0, bs, BandLabel::E);
}

struct Battery {
    std::vector<CheckResult>& out;
    void add(const std::string& id, bool pass, const std::string& detail) {
        out.push_back(CheckResult{id, pass, detail});
    }
    template <typename Fn>
    void run(const std::string& id, Fn&& fn) {
        try {
            auto [pass, detail] = fn();
            add(id, pass, detail);
        } catch (const std::exception& e) {
            add(id, false, std::string("exception: ") + e.what());
        }
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

std::vector<CheckResult> run_verification(const IntervalConfig& cfg, const VerifyOptions& opt) {
    std::vector<CheckResult> results;
    Battery bat{results};

    // geometry identities on random configs
    bat.run("geometry.angle_identities", [&]() -> std::pair<bool, std::string> {
        std::mt19937_64 rng(opt.seed);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            IntervalConfig c = random_config(rng, 8);
            AngleSet a = angles(c);
            for (int j = 0; j < c.n(); ++j) {
                worst = std::max(worst, std::abs(std::sqrt(c.doubles[j] - c.a1) -
                                                 std::sqrt(c.width()) * std::cos(a.nu[j])));
                worst = std::max(worst, std::abs(std::sqrt(c.a2 - c.doubles[j]) -
                                                 std::sqrt(c.width()) * std::sin(a.nu[j])));
                for (int l = 0; l < j; ++l) {
                    const double lhs = c.doubles[j] - c.doubles[l];
                    const double rhs = c.width() * std::sin(a.nu[l] + a.nu[j]) *
                                       std::sin(a.nu[l] - a.nu[j]);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
            }
        }
        return {worst < 1e-12, "max residual " + fmt(worst)};
    });

    GEvaluator gfun = GEvaluator::from_config(cfg);
    const double btol = opt.tol > 0.0 ? opt.tol : 1e-8;

    bat.run("gfunction.boundary_conditions", [&]() -> std::pair<bool, std::string> {
        double worst = 0.0;
        const double excl = 2.0 * gfun.delta_excl();
        BandSystem bs = BandSystem::from_config(cfg);
        for (const Segment& s : bs.bands()[0].segments) {
            for (int i = 0; i < 25; ++i) {
                const double x = s.lo + (s.hi - s.lo) * (i + 1) / 26.0;
                if (std::min(x - s.lo, s.hi - x) <= excl) continue;
                const cplx up = gfun.g_boundary(x, Shore::upper);
                const cplx dn = gfun.g_boundary(x, Shore::lower);
                const double want = (s.label == BandLabel::E) ? 0.5 : -0.5;
                worst = std::max(worst, std::abs(up.real() - want));
                worst = std::max(worst, std::abs(up + dn - cplx(2.0 * want, 0.0)));
            }
        }
        return {worst < btol, "max boundary residual " + fmt(worst)};
    });

    bat.run("gfunction.derivative_cross_check", [&]() -> std::pair<bool, std::string> {
        double worst = 0.0;
        BandSystem bs = BandSystem::from_config(cfg);
        for (const Segment& s : bs.bands()[0].segments) {
            const double x = 0.5 * (s.lo + s.hi);
            const double h = 1e-6 * cfg.width();
            const double fd = (gfun.g_im(x + h) - gfun.g_im(x - h)) / (2.0 * h);
            const double an = gfun.g_im_prime(x);
            worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
        }
        return {worst < 1e-6, "max rel fd mismatch " + fmt(worst)};
    });

    bat.run("model.route_agreement", [&]() -> std::pair<bool, std::string> {
        ModelEvaluator model(cfg);
        std::mt19937_64 rng(opt.seed + 1);
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            const double r = 0.3 + 2.0 * unif(rng);
            const double th = 0.1 + 6.0 * unif(rng);
            const cplx z = cplx(0.5 * (cfg.a1 + cfg.a2), 0.0) +
                           cplx(r * cfg.width() * std::cos(th), r * cfg.width() * std::sin(th));
            worst = std::max(worst, (model.psi(z) - model.psi_exp(z)).cwiseAbs().maxCoeff());
            worst = std::max(worst,
                             std::abs(model.tilde_g_closed(z) - model.tilde_g_integral(z)));
            worst = std::max(worst, std::abs(model.psi(z).determinant() - cplx(1.0)));
        }
        return {worst < 1e-8, "max route mismatch " + fmt(worst)};
    });

    bat.run("matrix.three_routes_and_positivity", [&]() -> std::pair<bool, std::string> {
        std::mt19937_64 rng(opt.seed + 2);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            IntervalConfig c = random_config(rng, 8);
            AngleSet a = angles(c);
            ModelCoefficients co = coefficients(c, a);
            MMatrix m1 = build_sums(c, a, co);
            MMatrix m2 = build_factored(c, a, co);
            worst = std::max(worst, (m1.block1 - m2.block1).cwiseAbs().maxCoeff());
            if (m1.block2.size() > 0)
                worst = std::max(worst, (m1.block2 - m2.block2).cwiseAbs().maxCoeff());
            std::vector<double> dts, ds, dtc, dc;
            diag_sums(c, a, co, dts, ds);
            diag_closed(a, dtc, dc);
            for (std::size_t i = 0; i < dts.size(); ++i) {
                worst = std::max(worst, std::abs(dts[i] - dtc[i]));
                if (!(dtc[i] > 0.0)) return {false, "nonpositive closed diagonal"};
            }
            for (std::size_t i = 0; i < ds.size(); ++i) {
                worst = std::max(worst, std::abs(ds[i] - dc[i]));
                if (!(dc[i] > 0.0)) return {false, "nonpositive closed diagonal"};
            }
            CholeskyFactor f = cholesky(m1); // throws if not SPD
            (void)f;
        }
        return {worst < 1e-10, "max route mismatch " + fmt(worst)};
    });

    bat.run("kernels.cholesky_vs_quadratic_form", [&]() -> std::pair<bool, std::string> {
        KernelEvaluator ker(cfg, gfun);
        std::mt19937_64 rng(opt.seed + 3);
        BandSystem bs = BandSystem::from_config(cfg);
        std::vector<Segment> segs = bs.bands()[0].segments;
        double worst = 0.0;
        const double excl = 2.0 * gfun.delta_excl();
        for (int t = 0; t < 200; ++t) {
            const Segment& sx = segs[static_cast<std::size_t>(unif(rng) * segs.size()) % segs.size()];
            const Segment& sy = segs[static_cast<std::size_t>(unif(rng) * segs.size()) % segs.size()];
            const double x = sx.lo + excl + (sx.hi - sx.lo - 2 * excl) * unif(rng);
            const double y = sy.lo + excl + (sy.hi - sy.lo - 2 * excl) * unif(rng);
            const double lambda = (unif(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, -4.0 * unif(rng));
            KernelPair which;
            const bool xe = sx.label == BandLabel::E, ye = sy.label == BandLabel::E;
            which = xe ? (ye ? KernelPair::EE : KernelPair::EJ)
                       : (ye ? KernelPair::JE : KernelPair::JJ);
            const double lhs = ker.approx_Eprime(x, y, lambda);
            const double sgn = lambda > 0 ? 1.0 : -1.0;
            const double rhs =
                (2.0 / (M_PI * M_PI)) * sgn * ker.quadratic_kernel(x, y, lambda, which) / 4.0;
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return {worst < 1e-12, "max identity residual " + fmt(worst)};
    });

    bat.run("oracle.spectrum", [&]() -> std::pair<bool, std::string> {
        DiscreteOperator op = build_discrete(cfg, 512, 1e-6, opt.exec);
        SpectrumReport rep = svd_spectrum(op);
        bool symmetric = true;
        const auto& s = rep.signed_spectrum;
        for (std::size_t i = 0; i < s.size(); ++i)
            symmetric = symmetric && s[i] == -s[s.size() - 1 - i];
        const bool pass = rep.sigma_max <= 1.05 && symmetric;
        return {pass, "sigma_max " + fmt(rep.sigma_max)};
    });

    bat.run("kernels.sample_points", [&]() -> std::pair<bool, std::string> {
        KernelEvaluator ker(cfg, gfun);
        // window in the interior of the first J segment
        BandSystem bs = BandSystem::from_config(cfg);
        double lo = 0.0, hi = 0.0;
        for (const Segment& s : bs.bands()[0].segments) {
            if (s.label != BandLabel::J) continue;
            lo = s.lo + 0.2 * (s.hi - s.lo);
            hi = s.lo + 0.8 * (s.hi - s.lo);
            break;
        }
        // the construction is asymptotic: the window must hold n roots, so
        // step lambda down until the phase span suffices
        std::string err;
        for (double lam : {1e-4, 1e-6, 1e-8, 1e-10}) {
            try {
                SamplePoints sp = ker.select_sample_points(lam, lo, hi, cfg.n(), 1e-10);
                bool ok = std::abs(sp.gram_det) > 1e-10;
                for (std::size_t k = 0; k < sp.x.size(); ++k)
                    ok = ok &&
                         std::abs(sp.x[k] - sp.seeds[k]) <= sp.displacement_bound * (1 + 1e-12);
                return {ok, "gram det " + fmt(sp.gram_det) + " at lambda " + fmt(lam)};
            } catch (const std::exception& e) {
                err = e.what();
            }
        }
        return {false, err};
    });

    bat.run("parametrix4.coincidence", [&]() -> std::pair<bool, std::string> {
        // compare against the symmetric Appendix model on a rescaled config:
        // only meaningful when the configuration is itself symmetric
        if (cfg.n() != 1 || std::abs((cfg.doubles[0] - cfg.a1) - (cfg.a2 - cfg.doubles[0])) >
                                1e-14 * cfg.width())
            return {true, "skipped (config not symmetric about its double point)"};
        if (cfg.doubles[0] != 0.0) return {true, "skipped (double point not at the origin)"};
        SymmetricModel sym(cfg.a2);
        ModelEvaluator model(cfg);
        std::mt19937_64 rng(opt.seed + 5);
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const cplx z(0.3 + 2.0 * unif(rng), 0.2 + 1.5 * unif(rng));
            worst = std::max(worst,
                             (model.psi(z) - sym.psi4(z, KappaBranch::upper)).cwiseAbs().maxCoeff());
        }
        return {worst < 1e-10, "max coincidence gap " + fmt(worst)};
    });

    return results;
}

} // namespace fht
