#include "fht/model.hpp"

#include <cmath>
#include <stdexcept>

namespace fht {

namespace {
const cplx I(0.0, 1.0);
} // namespace

const Mat2 kSigma1 = [] {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}();
const Mat2 kSigma2 = [] {
    Mat2 m;
    m << 0, -I, I, 0;
    return m;
}();
const Mat2 kSigma3 = [] {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}();

Mat2 sigma1_power(cplx q) {
    if (q == cplx(0.0)) throw std::domain_error("sigma1_power: zero base");
    const cplx a = 0.5 * (q + 1.0 / q);
    const cplx b = 0.5 * (q - 1.0 / q);
    Mat2 m;
    m << a, b, b, a;
    return m;
}

Mat2 sigma3_exp(cplx c) {
    Mat2 m;
    m << std::exp(c), 0, 0, std::exp(-c);
    return m;
}

ModelCoefficients coefficients(const IntervalConfig& cfg, const AngleSet& ang) {
    if (cfg.first_band != BandLabel::E)
        throw std::invalid_argument("model coefficients: requires the first band to be E");
    const int n = cfg.n();
    const double width = cfg.width();
    const double alpha = ang.alpha;
    ModelCoefficients co;
    co.k.resize(n);
    co.m.resize(n);
    co.n_coef.resize(n);
    co.khat.resize(n);
    co.shat.resize(n);
    for (int j = 1; j <= n; ++j) {
        const double nu = ang.nu[j - 1];
        double prod = 1.0;
        for (int l = 1; l <= n; ++l) {
            if (l == j) continue;
            const double s = std::sin(std::abs(ang.nu[l - 1] - nu));
            // exponent (-1)^l for odd j, (-1)^{l+1} for even j
            const int e = (j % 2 == 1) ? ((l % 2 == 0) ? +1 : -1) : ((l % 2 == 0) ? -1 : +1);
            prod *= (e > 0) ? s : 1.0 / s;
        }
        double kj;
        if (j % 2 == 1) {
            const int p = (n % 2 == 1) ? 1 : 0; // (1-(-1)^n)/2
            kj = 0.5 * width * std::cos(nu) * std::pow(std::sin(nu), p) * prod;
            co.m[j - 1] = -kj * std::sin(nu - alpha);
            co.n_coef[j - 1] = -kj * std::cos(nu - alpha);
        } else {
            const int p = (n % 2 == 0) ? 1 : 0; // (1+(-1)^n)/2
            kj = 0.5 * width * std::pow(std::sin(nu), p) * prod;
            co.m[j - 1] = kj * std::cos(nu + alpha);
            co.n_coef[j - 1] = kj * std::sin(nu + alpha);
        }
        co.k[j - 1] = kj;

        double khat = 1.0;
        for (int s = 1; s <= n; ++s) {
            if (s == j) continue;
            const double d = std::abs(cfg.doubles[j - 1] - cfg.doubles[s - 1]);
            khat *= (s % 2 == 0) ? std::sqrt(d) : 1.0 / std::sqrt(d);
        }
        co.khat[j - 1] = khat;
        double shat = 1.0;
        for (int kk = 1; kk <= n; ++kk) {
            const double s = std::sin(nu + ang.nu[kk - 1]);
            shat *= (kk % 2 == 1) ? s : 1.0 / s;
        }
        co.shat[j - 1] = shat;
    }
    return co;
}

ModelEvaluator::ModelEvaluator(const IntervalConfig& cfg, int quad_order)
    : cfg_(cfg), ang_(angles(cfg)), co_(coefficients(cfg, ang_)),
      bs_(BandSystem::from_config(cfg)) {
    excl_ = 1e-3 * cfg.width();
    // J-segment meshes for the integral route of gtilde
    const double floor_w = 1e-13 * cfg.width();
    for (const Segment& s : bs_.bands()[0].segments) {
        if (s.label != BandLabel::J) continue;
        JMesh m;
        m.lo = s.lo;
        m.hi = s.hi;
        const bool sq_lo = (s.lo == cfg.a1);
        const bool sq_hi = (s.hi == cfg.a2);
        EndpointMesh em = endpoint_mesh(s.lo, s.hi, sq_lo, sq_hi, floor_w, 8, quad_order);
        m.x = std::move(em.x);
        m.w = std::move(em.w);
        m.invR.resize(m.x.size());
        for (std::size_t i = 0; i < m.x.size(); ++i)
            m.invR[i] = 1.0 / bs_.abs_radical(m.x[i], em.prot[i], em.dist[i]);
        jmesh_.push_back(std::move(m));
    }
}

void ModelEvaluator::check_off_branch_points(cplx z) const {
    if (z.imag() != 0.0) return;
    const double x = z.real();
    if (x == cfg_.a1 || x == cfg_.a2) throw branch_point_error("model: branch point");
    for (double b : cfg_.doubles)
        if (x == b) throw branch_point_error("model: branch point");
}

cplx ModelEvaluator::s_function(cplx z, double b) const {
    check_off_branch_points(z);
    return I * pow_cut(z, cfg_.a1, 0.5) * std::sqrt(cfg_.a2 - b) +
           pow_cut(z, cfg_.a2, 0.5) * std::sqrt(b - cfg_.a1);
}

cplx ModelEvaluator::s_function(double x, double b, Shore shore) const {
    return I * pow_cut(x, cfg_.a1, 0.5, shore) * std::sqrt(cfg_.a2 - b) +
           pow_cut(x, cfg_.a2, 0.5, shore) * std::sqrt(b - cfg_.a1);
}

cplx ModelEvaluator::tilde_Bn(cplx z) const {
    check_off_branch_points(z);
    cplx v = 1.0;
    for (int j = 1; j <= cfg_.n(); ++j)
        v *= pow_cut(z, cfg_.doubles[j - 1], (j % 2 == 0) ? 0.5 : -0.5);
    return v;
}

cplx ModelEvaluator::tilde_Bn(double x, Shore shore) const {
    cplx v = 1.0;
    for (int j = 1; j <= cfg_.n(); ++j)
        v *= pow_cut(x, cfg_.doubles[j - 1], (j % 2 == 0) ? 0.5 : -0.5, shore);
    return v;
}

namespace {
template <typename SFun>
cplx tilde_g_from_parts(const IntervalConfig& cfg, cplx btilde, SFun&& s_of_b) {
    const int n = cfg.n();
    cplx prod = btilde;
    for (int k = 1; k <= n; ++k) {
        cplx s = s_of_b(cfg.doubles[k - 1]);
        prod *= (k % 2 == 1) ? s : 1.0 / s;
    }
    const double pref = std::pow(cfg.width(), (n % 2 == 0 ? 0.0 : -0.5));
    return std::log(pref * prod);
}
} // namespace

cplx ModelEvaluator::tilde_g_closed(cplx z) const {
    check_off_branch_points(z);
    return tilde_g_from_parts(cfg_, tilde_Bn(z), [&](double b) { return s_function(z, b); });
}

cplx ModelEvaluator::tilde_g_closed(double x, Shore shore) const {
    return tilde_g_from_parts(cfg_, tilde_Bn(x, shore),
                              [&](double b) { return s_function(x, b, shore); });
}

cplx ModelEvaluator::tilde_g_infinity() const { return cplx(0.0, ang_.alpha); }

cplx ModelEvaluator::tilde_g_integral(cplx z) const {
    check_off_branch_points(z);
    if (z.imag() == 0.0 && z.real() > cfg_.a1 && z.real() < cfg_.a2)
        return tilde_g_integral(z.real(), Shore::upper);
    cplx acc = 0.0;
    for (const JMesh& m : jmesh_)
        for (std::size_t i = 0; i < m.x.size(); ++i) acc += m.invR[i] * m.w[i] / (m.x[i] - z);
    return -0.5 * I * bs_.radical(z) * acc;
}

cplx ModelEvaluator::tilde_g_integral(double x, Shore shore) const {
    if (x <= cfg_.a1 || x >= cfg_.a2) return tilde_g_integral(cplx(x, 0.0));
    const double sh = (shore == Shore::upper) ? 1.0 : -1.0;
    bool in_J = false;
    double acc = 0.0;
    for (const JMesh& m : jmesh_) {
        if (x > m.lo && x < m.hi) {
            in_J = true;
            const double fx = 1.0 / bs_.abs_radical(x);
            for (std::size_t i = 0; i < m.x.size(); ++i)
                acc += (m.invR[i] - fx) / (m.x[i] - x) * m.w[i];
            acc += fx * std::log((m.hi - x) / (x - m.lo));
        } else {
            for (std::size_t i = 0; i < m.x.size(); ++i)
                acc += m.invR[i] / (m.x[i] - x) * m.w[i];
        }
    }
    cplx val = sh * 0.5 * bs_.abs_radical(x) * acc;
    if (in_J) val += I * M_PI * 0.5;
    return val;
}

cplx ModelEvaluator::bn_quarter(cplx z, int s) const {
    check_off_branch_points(z);
    const double e = 0.25 * s;
    cplx v = pow_cut(z, cfg_.a1, e) * pow_cut(z, cfg_.a2, (cfg_.n() % 2 == 0 ? -e : e));
    cplx bt = tilde_Bn(z);
    return v * ((s > 0) ? bt : cplx(1.0) / bt);
}

cplx ModelEvaluator::bn_quarter(double x, Shore shore, int s) const {
    const double e = 0.25 * s;
    cplx v = pow_cut(x, cfg_.a1, e, shore) * pow_cut(x, cfg_.a2, (cfg_.n() % 2 == 0 ? -e : e), shore);
    cplx bt = tilde_Bn(x, shore);
    return v * ((s > 0) ? bt : cplx(1.0) / bt);
}

BnQuarter ModelEvaluator::bn_quarter_boundary(double x) const {
    const PointClass pc = classify(cfg_, x);
    if (pc != PointClass::interior_E && pc != PointClass::interior_J)
        throw std::domain_error("bn_quarter_boundary: x must be a band interior point");
    for (double b : cfg_.doubles)
        if (std::abs(x - b) <= excl_) throw exclusion_error("bn_quarter_boundary: exclusion zone");
    if (std::min(std::abs(x - cfg_.a1), std::abs(x - cfg_.a2)) <= excl_)
        throw exclusion_error("bn_quarter_boundary: exclusion zone");
    const cplx v = bn_quarter(x, Shore::upper, +1);
    return BnQuarter{std::abs(v), std::arg(v)};
}

Mat2 ModelEvaluator::hat_part(cplx z) const {
    Mat2 m = Mat2::Identity();
    for (int j = 1; j <= cfg_.n(); ++j) {
        const double sj = (j % 2 == 0) ? 1.0 : -1.0;
        Mat2 proj = Mat2::Identity() + sj * kSigma1;
        m += (co_.m[j - 1] / (z - cfg_.doubles[j - 1])) * proj;
    }
    return m;
}

Mat2 ModelEvaluator::breve_part(cplx z) const {
    Mat2 m = Mat2::Zero();
    for (int j = 1; j <= cfg_.n(); ++j) {
        const double sj = (j % 2 == 0) ? 1.0 : -1.0;
        Mat2 proj = kSigma3 * (Mat2::Identity() + sj * kSigma1);
        m += (co_.n_coef[j - 1] / (z - cfg_.doubles[j - 1])) * proj;
    }
    return m;
}

Mat2 ModelEvaluator::s_matrix(cplx z) const { return hat_part(z) + I * breve_part(z); }

Mat2 ModelEvaluator::psi(cplx z) const {
    check_off_branch_points(z);
    return s_matrix(z) * sigma1_power(bn_quarter(z, +1));
}

Mat2 ModelEvaluator::psi(double x, Shore shore) const {
    return s_matrix(cplx(x, 0.0)) * sigma1_power(bn_quarter(x, shore, +1));
}

Mat2 ModelEvaluator::psi_exp(cplx z) const {
    check_off_branch_points(z);
    const cplx q = pow_cut(z, cfg_.a1, 0.25) * pow_cut(z, cfg_.a2, -0.25);
    return sigma3_exp(tilde_g_infinity()) * sigma1_power(q) * sigma3_exp(-tilde_g_closed(z));
}

Mat2 ModelEvaluator::psi_exp(double x, Shore shore) const {
    const cplx q = pow_cut(x, cfg_.a1, 0.25, shore) * pow_cut(x, cfg_.a2, -0.25, shore);
    return sigma3_exp(tilde_g_infinity()) * sigma1_power(q) * sigma3_exp(-tilde_g_closed(x, shore));
}

Mat2 ModelEvaluator::psi_hat(cplx z) const {
    check_off_branch_points(z);
    return hat_part(z) * sigma1_power(bn_quarter(z, +1));
}

Mat2 ModelEvaluator::psi_hat(double x, Shore shore) const {
    return hat_part(cplx(x, 0.0)) * sigma1_power(bn_quarter(x, shore, +1));
}

Mat2 ModelEvaluator::psi_breve(cplx z) const {
    check_off_branch_points(z);
    return breve_part(z) * sigma1_power(bn_quarter(z, +1));
}

Mat2 ModelEvaluator::psi_breve(double x, Shore shore) const {
    return breve_part(cplx(x, 0.0)) * sigma1_power(bn_quarter(x, shore, +1));
}

Mat2 ModelEvaluator::residue_at_infinity() const {
    Mat2 sum = Mat2::Zero();
    for (int j = 1; j <= cfg_.n(); ++j) {
        const double sj = (j % 2 == 0) ? 1.0 : -1.0;
        Mat2 proj = Mat2::Identity() + sj * kSigma1;
        Mat2 bj = (co_.m[j - 1] * Mat2::Identity() + I * co_.n_coef[j - 1] * kSigma3) * proj;
        sum += bj;
    }
    // scalar factor B_n^{1/4} contributes c1 sigma_1 with
    // c1 = (-a1 + (-1)^n a2)/4 - (1/2) sum (-1)^j b_j
    double c1 = (-cfg_.a1 + (cfg_.n() % 2 == 0 ? cfg_.a2 : -cfg_.a2)) / 4.0;
    for (int j = 1; j <= cfg_.n(); ++j)
        c1 -= 0.5 * ((j % 2 == 0) ? 1.0 : -1.0) * cfg_.doubles[j - 1];
    sum += c1 * kSigma1;
    return sum;
}

} // namespace fht
