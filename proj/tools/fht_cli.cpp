// Command-line surface: configuration ingestion, grid evaluation,
// verification suites, and CSV/JSON emission.
//
// Exit codes: 0 success, 1 invariant failure, 2 usage/config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fht/gfunction.hpp"
#include "fht/kernels.hpp"
#include "fht/model.hpp"
#include "fht/oracle.hpp"
#include "fht/spectral_matrix.hpp"
#include "fht/verify.hpp"

using json = nlohmann::json;
using namespace fht;

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int grid = 101;
    std::vector<double> lambdas = {0.02};
    int nodes = 512;
    std::uint64_t seed = 20240915ull;
    double tol = 0.0;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

IntervalConfig parse_config(const json& j) {
    if (!j.contains("a") || !j["a"].is_array() || j["a"].size() != 2)
        throw std::runtime_error("config field 'a' must be [a1, a2]");
    if (!j.contains("doubles") || !j["doubles"].is_array())
        throw std::runtime_error("config field 'doubles' must be an array");
    std::vector<double> doubles = j["doubles"].get<std::vector<double>>();
    BandLabel first = BandLabel::E;
    if (j.contains("first_band")) {
        const std::string s = j["first_band"].get<std::string>();
        if (s == "E") first = BandLabel::E;
        else if (s == "J") first = BandLabel::J;
        else throw std::runtime_error("config field 'first_band' must be \"E\" or \"J\"");
    }
    ValidationResult r = validate_config(j["a"][0].get<double>(), j["a"][1].get<double>(),
                                         doubles, first);
    if (!r.ok()) {
        json errs = json::array();
        for (const auto& e : r.errors) errs.push_back(e);
        std::cerr << json{{"error", "invalid configuration"}, {"violations", errs}}.dump(2)
                  << "\n";
        std::exit(kExitConfig);
    }
    return *r.config;
}

std::ofstream open_out(const Options& opt, const std::string& name) {
    std::filesystem::create_directories(opt.out_dir);
    const std::string path = opt.out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << std::setprecision(17);
    return out;
}

std::string band_name(BandLabel b) { return b == BandLabel::E ? "E" : "J"; }

int cmd_validate(const IntervalConfig& cfg) {
    AngleSet a = angles(cfg);
    json out;
    out["a"] = {cfg.a1, cfg.a2};
    out["doubles"] = cfg.doubles;
    out["first_band"] = band_name(cfg.first_band);
    out["n"] = cfg.n();
    out["nu"] = a.nu;
    out["alpha"] = a.alpha;
    double worst = 0.0;
    for (int j = 0; j < cfg.n(); ++j)
        for (int l = 0; l < j; ++l)
            worst = std::max(worst, std::abs(cfg.doubles[j] - cfg.doubles[l] -
                                             cfg.width() * std::sin(a.nu[l] + a.nu[j]) *
                                                 std::sin(a.nu[l] - a.nu[j])));
    out["angle_identity_residual"] = worst;
    std::cout << out.dump(2) << "\n";
    return worst < 1e-12 ? 0 : kExitInvariant;
}

// grid strictly inside (lo, hi): x_i = lo + (i+1)(hi-lo)/(N+1)
std::vector<double> interior_grid(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * (i + 1) / (n + 1.0);
    return xs;
}

int cmd_gfun(const IntervalConfig& cfg, const Options& opt, double lo, double hi) {
    GEvaluator g = GEvaluator::from_config(cfg);
    std::ofstream out = open_out(opt, "gfun.csv");
    out << "x,re_g,im_g,im_g_prime\n";
    for (double x : interior_grid(lo, hi, opt.grid)) {
        try {
            const cplx v = g.g_boundary(x, Shore::upper);
            out << x << ',' << v.real() << ',' << v.imag() << ',' << g.g_im_prime(x) << "\n";
        } catch (const exclusion_error&) {
            // points inside exclusion zones are skipped
        } catch (const std::domain_error&) {
        }
    }
    return 0;
}

int cmd_matrix(const IntervalConfig& cfg, const Options& opt) {
    AngleSet a = angles(cfg);
    ModelCoefficients co = coefficients(cfg, a);
    MMatrix M1 = build_sums(cfg, a, co);
    MMatrix M2 = build_factored(cfg, a, co);
    CholeskyFactor C = cholesky(M1);
    double route = (M1.block1 - M2.block1).cwiseAbs().maxCoeff();
    if (M1.block2.size() > 0)
        route = std::max(route, (M1.block2 - M2.block2).cwiseAbs().maxCoeff());
    std::vector<double> dtc, dc, dts, ds;
    diag_closed(a, dtc, dc);
    diag_sums(cfg, a, co, dts, ds);
    double diag = 0.0;
    for (std::size_t i = 0; i < dtc.size(); ++i) diag = std::max(diag, std::abs(dtc[i] - dts[i]));
    for (std::size_t i = 0; i < dc.size(); ++i) diag = std::max(diag, std::abs(dc[i] - ds[i]));
    const Eigen::MatrixXd Cf = C.full();
    Eigen::MatrixXd Mf = Eigen::MatrixXd::Zero(cfg.n(), cfg.n());
    Mf.topLeftCorner(M1.block1.rows(), M1.block1.rows()) = M1.block1;
    Mf.bottomRightCorner(M1.block2.rows(), M1.block2.rows()) = M1.block2;
    const double roundtrip = (Cf.transpose() * Cf - Mf).cwiseAbs().maxCoeff();

    json out;
    auto dump = [](const Eigen::MatrixXd& m) {
        json rows = json::array();
        for (int i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
            rows.push_back(row);
        }
        return rows;
    };
    out["M1"] = dump(M1.block1);
    out["M2"] = dump(M1.block2);
    out["C"] = dump(Cf);
    out["verification"] = {{"route_agreement", route},
                           {"diag_identity", diag},
                           {"cholesky_roundtrip", roundtrip}};
    std::ofstream f = open_out(opt, "matrix.json");
    f << out.dump(2) << "\n";
    std::cout << out["verification"].dump(2) << "\n";
    const bool ok = route < 1e-10 && diag < 1e-10 && roundtrip < 1e-12;
    return ok ? 0 : kExitInvariant;
}

int cmd_kernels(const IntervalConfig& cfg, const Options& opt, double lo, double hi) {
    GEvaluator g = GEvaluator::from_config(cfg);
    KernelEvaluator ker(cfg, g);
    std::ofstream out = open_out(opt, "kernels.csv");
    out << "x";
    for (int j = 1; j <= cfg.n(); ++j) out << ",A_" << j;
    for (double lam : opt.lambdas)
        for (int j = 1; j <= cfg.n(); ++j) out << ",G_" << j << "(lambda=" << lam << ")";
    out << "\n";
    for (double x : interior_grid(lo, hi, opt.grid)) {
        try {
            std::vector<double> A = ker.amplitudes(x);
            out << x;
            for (double v : A) out << ',' << v;
            for (double lam : opt.lambdas) {
                std::vector<double> G = ker.g_kernels(x, lam);
                for (double v : G) out << ',' << v;
            }
            out << "\n";
        } catch (const exclusion_error&) {
        } catch (const std::domain_error&) {
        }
    }
    return 0;
}

int cmd_illposed(const IntervalConfig& cfg, const Options& opt, double lo, double hi) {
    GEvaluator g = GEvaluator::from_config(cfg);
    KernelEvaluator ker(cfg, g);
    std::ofstream out = open_out(opt, "illposed.csv");
    out << "x";
    for (double lam : opt.lambdas) out << ",index(lambda=" << lam << ")";
    out << "\n";
    for (double x : interior_grid(lo, hi, opt.grid)) {
        try {
            std::ostringstream line;
            line << std::setprecision(17) << x;
            for (double lam : opt.lambdas) line << ',' << ker.illposedness_index(x, lam);
            out << line.str() << "\n";
        } catch (const exclusion_error&) {
        } catch (const std::domain_error&) {
        }
    }
    return 0;
}

int cmd_svd(const IntervalConfig& cfg, const Options& opt) {
    DiscreteOperator op = build_discrete(cfg, opt.nodes, 1e-12, default_exec());
    SpectrumReport rep = svd_spectrum(op);
    std::ofstream out = open_out(opt, "svd.csv");
    out << "index,sigma\n";
    for (std::size_t i = 0; i < rep.singular.size(); ++i)
        out << i << ',' << rep.singular[i] << "\n";
    json summary;
    summary["nodes"] = rep.nodes;
    summary["sigma_max"] = rep.sigma_max;
    summary["dyadic_bin_counts"] = rep.bin_counts;
    std::cout << summary.dump(2) << "\n";
    return rep.sigma_max <= 1.05 ? 0 : kExitInvariant;
}

int cmd_residual(const IntervalConfig& cfg, const Options& opt, double lo, double hi) {
    GEvaluator g = GEvaluator::from_config(cfg);
    KernelEvaluator ker(cfg, g);
    std::ofstream out = open_out(opt, "residual.csv");
    out << "lambda";
    for (int j = 1; j <= cfg.n(); ++j) out << ",r_" << j;
    out << ",control\n";
    bool ok = true;
    for (double lam : opt.lambdas) {
        ResidualReport rep =
            eigen_residual(ker, lam, lo, hi, 41, default_exec(), true, opt.seed & 0xffffffffu);
        out << lam;
        for (double r : rep.r) {
            out << ',' << r;
            ok = ok && r < 0.5;
        }
        out << ',' << rep.control << "\n";
    }
    return ok ? 0 : kExitInvariant;
}

int cmd_verify(const IntervalConfig& cfg, const Options& opt) {
    VerifyOptions vo;
    vo.seed = opt.seed;
    vo.exec = default_exec();
    std::vector<CheckResult> results = run_verification(cfg, vo);
    bool all = true;
    json failed = json::array();
    for (const auto& r : results) {
        std::cout << (r.pass ? "pass " : "FAIL ") << r.id << ": " << r.detail << "\n";
        if (!r.pass) {
            failed.push_back(r.id);
            all = false;
        }
    }
    if (!all) std::cout << json{{"failed_checks", failed}}.dump() << "\n";
    return all ? 0 : kExitInvariant;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"small-lambda spectral asymptotics of the multi-interval "
                 "finite Hilbert transform pair"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    Options opt;
    double lo = 0.0, hi = 0.0;
    app.add_option("--config", opt.config_path, "configuration JSON")->required();
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--grid", opt.grid, "grid size for CSV emission");
    app.add_option("--lambda", opt.lambdas, "spectral values")->delimiter(',');
    app.add_option("--nodes", opt.nodes, "quadrature nodes for the discrete operator");
    app.add_option("--seed", opt.seed, "seed for the property suites");
    app.add_option("--tol", opt.tol, "tolerance override (verification)");
    app.add_option("--lo", lo, "window lower edge");
    app.add_option("--hi", hi, "window upper edge");

    auto* c_validate = app.add_subcommand("validate", "geometry report");
    auto* c_gfun = app.add_subcommand("gfun", "CSV: x, Re g, Im g, (Im g)'");
    auto* c_matrix = app.add_subcommand("matrix", "M, Cholesky factor, verification report");
    auto* c_kernels = app.add_subcommand("kernels", "CSV: x, A_j, G_j per lambda");
    auto* c_illposed = app.add_subcommand("illposed", "CSV: x, exp(kappa/|g_im'|)");
    auto* c_svd = app.add_subcommand("svd", "singular values and dyadic bin counts");
    auto* c_residual = app.add_subcommand("residual", "per-j residual table");
    auto* c_verify = app.add_subcommand("verify", "full invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        json j = load_json(opt.config_path);
        IntervalConfig cfg = parse_config(j);
        // per-command window block, overridable by --lo/--hi
        auto range_for = [&](const char* name) -> std::pair<double, double> {
            double wlo = cfg.a1, whi = cfg.a2;
            if (j.contains(name) && j[name].contains("range")) {
                wlo = j[name]["range"][0].get<double>();
                whi = j[name]["range"][1].get<double>();
            }
            if (hi > lo) { // --lo/--hi override the config block
                wlo = lo;
                whi = hi;
            }
            return {wlo, whi};
        };

        if (c_validate->parsed()) return cmd_validate(cfg);
        if (c_gfun->parsed()) {
            auto [wlo, whi] = range_for("gfun");
            return cmd_gfun(cfg, opt, wlo, whi);
        }
        if (c_matrix->parsed()) return cmd_matrix(cfg, opt);
        if (c_kernels->parsed()) {
            auto [wlo, whi] = range_for("kernels");
            return cmd_kernels(cfg, opt, wlo, whi);
        }
        if (c_illposed->parsed()) {
            auto [wlo, whi] = range_for("illposed");
            return cmd_illposed(cfg, opt, wlo, whi);
        }
        if (c_svd->parsed()) return cmd_svd(cfg, opt);
        if (c_residual->parsed()) {
            auto [wlo, whi] = range_for("residual");
            if (whi - wlo == cfg.width()) {
                // default window: central 40% of the first J segment
                BandSystem bs = BandSystem::from_config(cfg);
                for (const Segment& s : bs.bands()[0].segments) {
                    if (s.label != BandLabel::J) continue;
                    wlo = s.lo + 0.3 * (s.hi - s.lo);
                    whi = s.lo + 0.7 * (s.hi - s.lo);
                    break;
                }
            }
            return cmd_residual(cfg, opt, wlo, whi);
        }
        if (c_verify->parsed()) return cmd_verify(cfg, opt);
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
