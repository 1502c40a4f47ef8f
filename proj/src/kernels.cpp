#include "fht/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fht {

double kappa_of_lambda(double lambda) {
    const double a = std::abs(lambda);
    if (!(a > 0.0) || a > 1.0)
        throw std::domain_error("kappa_of_lambda: need 0 < |lambda| <= 1");
    return -std::log(0.5 * a);
}

KernelEvaluator::KernelEvaluator(const IntervalConfig& cfg, const GEvaluator& gfun)
    : cfg_(cfg), gfun_(gfun), model_(cfg), ang_(angles(cfg)), co_(coefficients(cfg, ang_)) {
    M_ = build_sums(cfg_, ang_, co_);
    chol_ = cholesky(M_);
}

void KernelEvaluator::check_point(double x) const {
    const PointClass pc = classify(cfg_, x);
    if (pc != PointClass::interior_E && pc != PointClass::interior_J)
        throw std::domain_error("kernels: x must be a band interior point");
    const double excl = gfun_.delta_excl();
    if (std::min(x - cfg_.a1, cfg_.a2 - x) <= excl)
        throw exclusion_error("kernels: exclusion zone (endpoint)");
    for (double b : cfg_.doubles)
        if (std::abs(x - b) <= excl) throw exclusion_error("kernels: exclusion zone (double point)");
}

int KernelEvaluator::band_of(double x) const {
    const PointClass pc = classify(cfg_, x);
    if (pc == PointClass::interior_E) return +1;
    if (pc == PointClass::interior_J) return -1;
    throw std::domain_error("kernels: x must be a band interior point");
}

PhiPair KernelEvaluator::phi_values(double x, double kappa) const {
    check_point(x);
    if (kappa < std::log(2.0) - 1e-12)
        throw std::domain_error("phi_values: kappa below ln 2 (|lambda| > 1)");
    const double gim = gfun_.g_im(x);
    const cplx bplus = model_.bn_quarter(x, Shore::upper, +1);
    const cplx bminus = model_.bn_quarter(x, Shore::upper, -1);
    const cplx eplus = std::polar(1.0, kappa * gim);
    PhiPair p;
    p.x = x;
    p.kappa = kappa;
    p.phi_plus = (eplus * bplus).real();
    p.phi_minus = (eplus * bminus).real();
    p.phi_tilde_plus = (std::conj(eplus) * bplus).real();
    p.phi_tilde_minus = -(std::conj(eplus) * bminus).real();
    return p;
}

void KernelEvaluator::vminus(double x, Eigen::VectorXd& v) const {
    const int nt = n_tilde();
    v.resize(nt);
    for (int j = 0; j < nt; ++j) v(j) = 1.0 / (x - cfg_.doubles[2 * j]);
}

void KernelEvaluator::vplus(double x, Eigen::VectorXd& v) const {
    const int N = block2_size(cfg_.n());
    v.resize(N);
    for (int j = 0; j < N; ++j) v(j) = 1.0 / (x - cfg_.doubles[2 * j + 1]);
}

namespace {
void fh_vector(const PhiPair& p, bool h_type, const Eigen::VectorXd& vm,
               const Eigen::VectorXd& vp, Eigen::VectorXd& out) {
    const double c_minus = h_type ? p.phi_tilde_minus : p.phi_minus;
    const double c_plus = h_type ? p.phi_tilde_plus : p.phi_plus;
    out.resize(vm.size() + vp.size());
    out.head(vm.size()) = c_minus * vm;
    out.tail(vp.size()) = c_plus * vp;
}
} // namespace

double KernelEvaluator::quadratic_kernel(double x, double y, double lambda,
                                         KernelPair which) const {
    const double kap = kappa_of_lambda(lambda);
    const int bx = band_of(x);
    const int by = band_of(y);
    auto expect = [&](int want_x, int want_y) {
        if (bx != want_x || by != want_y)
            throw std::domain_error("quadratic_kernel: band mismatch for requested pair");
    };
    const double sgn = (lambda > 0.0) ? 1.0 : -1.0;
    Eigen::VectorXd vmx, vpx, vmy, vpy, wx, wy;
    vminus(x, vmx);
    vplus(x, vpx);
    vminus(y, vmy);
    vplus(y, vpy);
    const PhiPair px = phi_values(x, kap);
    const PhiPair py = phi_values(y, kap);

    auto quad = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        const int nt = n_tilde();
        double s = u.head(nt).dot(M_.block1 * v.head(nt));
        if (block2_size(cfg_.n()) > 0)
            s += u.tail(block2_size(cfg_.n())).dot(M_.block2 * v.tail(block2_size(cfg_.n())));
        return s;
    };

    switch (which) {
    case KernelPair::EE:
        expect(+1, +1);
        fh_vector(px, true, vmx, vpx, wx);
        fh_vector(py, true, vmy, vpy, wy);
        return sgn * 4.0 * quad(wy, wx);
    case KernelPair::EJ:
        expect(+1, -1);
        fh_vector(px, true, vmx, vpx, wx);
        fh_vector(py, false, vmy, vpy, wy);
        return 4.0 * quad(wx, wy);
    case KernelPair::JE:
        expect(-1, +1);
        fh_vector(px, false, vmx, vpx, wx);
        fh_vector(py, true, vmy, vpy, wy);
        return 4.0 * quad(wx, wy);
    case KernelPair::JJ:
        expect(-1, -1);
        fh_vector(px, false, vmx, vpx, wx);
        fh_vector(py, false, vmy, vpy, wy);
        return sgn * 4.0 * quad(wy, wx);
    }
    throw std::logic_error("quadratic_kernel: unknown pair");
}

std::vector<double> KernelEvaluator::amplitudes_at(double x) const {
    const int nt = n_tilde();
    const int N = block2_size(cfg_.n());
    Eigen::VectorXd vm, vp;
    vminus(x, vm);
    vplus(x, vp);
    const double mod_minus = std::abs(model_.bn_quarter(x, Shore::upper, -1));
    const double mod_plus = std::abs(model_.bn_quarter(x, Shore::upper, +1));
    Eigen::VectorXd am = chol_.C1 * vm;
    Eigen::VectorXd ap = (N > 0) ? Eigen::VectorXd(chol_.C2 * vp) : Eigen::VectorXd();
    std::vector<double> A(cfg_.n());
    const double c = std::sqrt(2.0) / M_PI;
    for (int j = 0; j < nt; ++j) A[j] = c * mod_minus * am(j);
    for (int j = 0; j < N; ++j) A[nt + j] = c * mod_plus * ap(j);
    return A;
}

std::vector<double> KernelEvaluator::amplitudes(double x) const {
    check_point(x);
    return amplitudes_at(x);
}

std::vector<double> KernelEvaluator::g_kernels(double x, double lambda) const {
    check_point(x);
    const double kap = kappa_of_lambda(lambda);
    const double gim = gfun_.g_im(x);
    const int band = band_of(x);
    const double sgn = (lambda > 0.0) ? 1.0 : -1.0;
    std::vector<double> A = amplitudes_at(x);
    std::vector<double> G(cfg_.n());
    for (int j = 0; j < cfg_.n(); ++j) {
        const double sj = (j < n_tilde()) ? -1.0 : 1.0;
        const double base = A[j] * std::cos(kap * gim + sj * M_PI / 4.0);
        G[j] = base * ((band > 0) ? sj : sgn);
    }
    return G;
}

double KernelEvaluator::approx_Eprime(double x, double y, double lambda) const {
    std::vector<double> gx = g_kernels(x, lambda);
    std::vector<double> gy = g_kernels(y, lambda);
    double s = 0.0;
    for (int j = 0; j < cfg_.n(); ++j) s += gx[j] * gy[j];
    return s;
}

double KernelEvaluator::illposedness_index(double x0, double lambda) const {
    check_point(x0);
    const double kap = kappa_of_lambda(lambda);
    return std::exp(kap / std::abs(gfun_.g_im_prime(x0)));
}

SamplePoints KernelEvaluator::select_sample_points(double lambda, double lo, double hi, int count,
                                                   double det_floor) const {
    if (!(lo < hi) || count < 1)
        throw std::invalid_argument("select_sample_points: bad window or count");
    check_point(lo);
    check_point(hi);
    if (band_of(lo) != band_of(hi))
        throw std::domain_error("select_sample_points: window must lie in one band interior");
    const double kap = kappa_of_lambda(lambda);

    // c0 maximizing min_j |cos(c0 + c_j)| over a 1-degree grid
    double c0 = 0.0, best = -1.0;
    for (int deg = 0; deg < 360; ++deg) {
        const double c = deg * M_PI / 180.0;
        double mn = HUGE_VAL;
        for (int j = 0; j < cfg_.n(); ++j) {
            const double cj = ((j < n_tilde()) ? -1.0 : 1.0) * M_PI / 4.0;
            mn = std::min(mn, std::abs(std::cos(c + cj)));
        }
        if (mn > best + 1e-15) {
            best = mn;
            c0 = c;
        }
    }

    double min_slope = HUGE_VAL;
    const int probe = 65;
    for (int i = 0; i < probe; ++i) {
        const double x = lo + (hi - lo) * i / (probe - 1.0);
        min_slope = std::min(min_slope, std::abs(gfun_.g_im_prime(x)));
    }
    const double bound = 2.0 * M_PI / (kap * min_slope);

    SamplePoints out;
    out.displacement_bound = bound;
    for (int k = 0; k < count; ++k) {
        const double seed = lo + (hi - lo) * (k + 1) / (count + 1.0);
        out.seeds.push_back(seed);
        const double gseed = gfun_.g_im(seed);
        // phase targets c0 + pi m keep cos(c0 + c_j) nonzero up to a sign,
        // so the half-period family is admissible; try the targets nearest
        // the seed first
        std::vector<double> targets;
        const double m0 = std::round((kap * gseed - c0) / M_PI);
        for (int dm : {0, -1, 1, -2, 2, -3, 3})
            targets.push_back((c0 + M_PI * (m0 + dm)) / kap);
        bool placed = false;
        for (double target : targets) {
            auto h = [&](double x) { return gfun_.g_im(x) - target; };
            // scan outward from the seed for a bracket inside the window
            const double step = std::max(std::min(bound / 8.0, (hi - lo) / 64.0),
                                         1e-12 * cfg_.width());
            double a = seed, b = seed;
            double ha = h(seed), hb = ha;
            bool found = (ha == 0.0);
            for (int it = 1; it <= 256 && !found; ++it) {
                const double xl = std::max(lo, seed - it * step);
                const double xr = std::min(hi, seed + it * step);
                const double hl = h(xl);
                if (hl == 0.0 || hl * ha < 0.0) {
                    b = std::max(lo, seed - (it - 1) * step);
                    a = xl;
                    hb = ha;
                    found = true;
                    break;
                }
                const double hr = h(xr);
                if (hr == 0.0 || hr * hb < 0.0) {
                    a = std::min(hi, seed + (it - 1) * step);
                    b = xr;
                    ha = hb;
                    found = true;
                    break;
                }
                ha = hl;
                hb = hr;
                if (xl == lo && xr == hi) break;
            }
            if (!found) continue;
            double fa = h(a);
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = h(mid);
                if (fm == 0.0 || 0.5 * std::abs(b - a) < 1e-15 * cfg_.width()) {
                    a = b = mid;
                    break;
                }
                if (fa * fm < 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            const double root = 0.5 * (a + b);
            bool duplicate = false;
            for (double prev : out.x)
                if (std::abs(prev - root) < 1e-6 * cfg_.width()) duplicate = true;
            if (duplicate) continue; // distinct points are required for the Gram matrix
            out.x.push_back(root);
            placed = true;
            break;
        }
        if (!placed) throw std::runtime_error("select_sample_points: no root in window");
    }

    Eigen::MatrixXd gram(count, count);
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j) gram(i, j) = approx_Eprime(out.x[i], out.x[j], lambda);
    out.gram_det = gram.determinant();
    if (!(std::abs(out.gram_det) > det_floor)) {
        std::ostringstream os;
        os << "select_sample_points: degenerate Gram determinant " << out.gram_det;
        throw std::runtime_error(os.str());
    }
    return out;
}

KernelGrid KernelEvaluator::precompute_grid(const std::vector<double>& xs, Exec exec) const {
    KernelGrid grid;
    grid.x = xs;
    const std::size_t m = xs.size();
    grid.gim.resize(m);
    grid.band.resize(m);
    grid.amp.assign(cfg_.n(), std::vector<double>(m));
    std::vector<std::vector<double>> cols(m);
    parallel_for(static_cast<std::ptrdiff_t>(m), exec, [&](std::ptrdiff_t i) {
        grid.gim[i] = gfun_.g_im_unchecked(xs[i]);
        grid.band[i] = band_of(xs[i]);
        cols[i] = amplitudes_at(xs[i]);
    });
    for (std::size_t i = 0; i < m; ++i)
        for (int j = 0; j < cfg_.n(); ++j) grid.amp[j][i] = cols[i][j];
    return grid;
}

void KernelEvaluator::g_on_grid(const KernelGrid& grid, double lambda, int j,
                                std::vector<double>& out) const {
    const double kap = kappa_of_lambda(lambda);
    const double sgn = (lambda > 0.0) ? 1.0 : -1.0;
    const double sj = (j < n_tilde()) ? -1.0 : 1.0;
    const std::size_t m = grid.x.size();
    out.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double base = grid.amp[j][i] * std::cos(kap * grid.gim[i] + sj * M_PI / 4.0);
        out[i] = base * ((grid.band[i] > 0) ? sj : sgn);
    }
}

double KernelEvaluator::approx_Eprime_from_grid(const KernelGrid& grid, int i1, int i2,
                                                double lambda) const {
    const double kap = kappa_of_lambda(lambda);
    const double sgn = (lambda > 0.0) ? 1.0 : -1.0;
    double s = 0.0;
    for (int j = 0; j < cfg_.n(); ++j) {
        const double sj = (j < n_tilde()) ? -1.0 : 1.0;
        const double g1 = grid.amp[j][i1] * std::cos(kap * grid.gim[i1] + sj * M_PI / 4.0) *
                          ((grid.band[i1] > 0) ? sj : sgn);
        const double g2 = grid.amp[j][i2] * std::cos(kap * grid.gim[i2] + sj * M_PI / 4.0) *
                          ((grid.band[i2] > 0) ? sj : sgn);
        s += g1 * g2;
    }
    return s;
}

} // namespace fht
