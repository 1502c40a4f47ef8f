#include "fht/gfunction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fht {

GEvaluator::GEvaluator(BandSystem bs, QuadratureSpec spec) : bs_(std::move(bs)), spec_(spec) {
    width_ = bs_.endpoints().back() - bs_.endpoints().front();
    excl_ = spec_.excl_factor * width_;
    floor_ = 1e-13 * width_;
    min_dist_ = 1e-11 * width_;
    build_meshes();
    if (bs_.genus() > 0) solve_omegas();
}

void GEvaluator::build_meshes() {
    const auto& bands = bs_.bands();
    for (std::size_t j = 0; j < bands.size(); ++j) {
        for (const Segment& s : bands[j].segments) {
            SegMesh m;
            m.band = static_cast<int>(j);
            m.lo = s.lo;
            m.hi = s.hi;
            m.chi = s.chi();
            m.eps = bs_.band_sign(static_cast<int>(j));
            const bool simple_lo = (s.lo == bands[j].lo);
            const bool simple_hi = (s.hi == bands[j].hi);
            EndpointMesh em = endpoint_mesh(s.lo, s.hi, simple_lo, simple_hi, floor_,
                                            spec_.middle_panels, spec_.order);
            m.x = std::move(em.x);
            m.w = std::move(em.w);
            m.density.resize(m.x.size());
            for (std::size_t i = 0; i < m.x.size(); ++i)
                m.density[i] =
                    m.chi * m.eps / bs_.abs_radical(m.x[i], em.prot[i], em.dist[i]);
            segs_.push_back(std::move(m));
        }
    }
    for (int j = 0; j < bs_.genus(); ++j) {
        auto [lo, hi] = bs_.gap(j);
        GapMesh m;
        m.index = j;
        m.lo = lo;
        m.hi = hi;
        m.rho = bs_.gap_sign(j);
        EndpointMesh em = endpoint_mesh(lo, hi, true, true, floor_, spec_.middle_panels,
                                        spec_.order);
        m.x = std::move(em.x);
        m.w = std::move(em.w);
        m.invR.resize(m.x.size());
        for (std::size_t i = 0; i < m.x.size(); ++i)
            m.invR[i] = 1.0 / bs_.abs_radical(m.x[i], em.prot[i], em.dist[i]);
        gaps_.push_back(std::move(m));
    }
}

void GEvaluator::solve_omegas() {
    const int g = bs_.genus();
    Eigen::MatrixXd A(g, g);
    Eigen::VectorXd rhs(g);
    for (int p = 0; p < g; ++p) {
        for (int j = 0; j < g; ++j) {
            double s = 0.0;
            const GapMesh& m = gaps_[j];
            for (std::size_t i = 0; i < m.x.size(); ++i)
                s += std::pow(m.x[i], p) * m.invR[i] * m.w[i];
            A(p, j) = m.rho * s;
        }
        double r = 0.0;
        for (const SegMesh& m : segs_)
            for (std::size_t i = 0; i < m.x.size(); ++i)
                r += std::pow(m.x[i], p) * m.density[i] * m.w[i];
        rhs(p) = r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    moment_condition_ =
        lu.isInvertible() ? A.norm() * lu.inverse().norm() : std::numeric_limits<double>::infinity();
    if (!lu.isInvertible()) {
        std::ostringstream os;
        os << "singular moment matrix in omega solve, condition " << moment_condition_;
        throw std::runtime_error(os.str());
    }
    Eigen::VectorXd omega = lu.solve(rhs);
    moment_residual_ = (A * omega - rhs).lpNorm<Eigen::Infinity>();
    omegas_.assign(omega.data(), omega.data() + g);
}

std::vector<double> solve_omegas(const BandSystem& bs, QuadratureSpec spec, double* residual,
                                 double* condition) {
    GEvaluator ev(bs, spec);
    if (residual) *residual = ev.moment_residual();
    if (condition) *condition = ev.moment_condition();
    return ev.omegas();
}

cplx GEvaluator::radical(cplx z) const {
    if (z.imag() == 0.0 && bs_.is_endpoint(z.real()))
        throw branch_point_error("radical: branch point");
    return bs_.radical(z);
}

cplx GEvaluator::radical(double x, Shore shore) const {
    if (bs_.is_endpoint(x)) throw branch_point_error("radical: branch point");
    return bs_.radical(x, shore);
}

cplx GEvaluator::g(cplx z) const {
    if (z.imag() == 0.0) {
        double x = z.real();
        if (bs_.is_endpoint(x)) throw branch_point_error("g: branch point");
        if (bs_.band_index_of(x) >= 0) return g_boundary(x, Shore::upper);
        int gj = bs_.gap_index_of(x);
        if (gj >= 0) {
            for (double a : bs_.endpoints())
                if (std::abs(x - a) <= min_dist_)
                    throw exclusion_error("g: too close to a gap endpoint");
            // upper-shore value across the gap cut: jump i Omega_j
            const double rsign = bs_.gap_sign(gj);
            const cplx pv = -rsign * bs_.abs_radical(x) * pv_total(x) / (2.0 * M_PI);
            return pv + cplx(0.0, 0.5 * omegas_[gj]);
        }
    }
    cplx acc = 0.0;
    for (const SegMesh& m : segs_)
        for (std::size_t i = 0; i < m.x.size(); ++i) acc += m.density[i] * m.w[i] / (m.x[i] - z);
    for (const GapMesh& m : gaps_) {
        const double om = omegas_[m.index] * m.rho;
        for (std::size_t i = 0; i < m.x.size(); ++i) acc -= om * m.invR[i] * m.w[i] / (m.x[i] - z);
    }
    return -bs_.radical(z) * acc / (2.0 * M_PI);
}

void GEvaluator::check_interior(double x, double min_dist) const {
    if (bs_.band_index_of(x) < 0) throw std::domain_error("g_boundary: x not inside a band");
    for (double a : bs_.endpoints())
        if (std::abs(x - a) <= min_dist)
            throw exclusion_error("g_boundary: exclusion zone (endpoint)");
    for (const Band& b : bs_.bands())
        for (const Segment& s : b.segments) {
            if (s.lo != b.lo && std::abs(x - s.lo) <= min_dist)
                throw exclusion_error("g_boundary: exclusion zone (double point)");
        }
}

double GEvaluator::seg_density(const SegMesh& s, double x) const {
    return s.chi * s.eps / bs_.abs_radical(x);
}

void GEvaluator::density_derivs(const SegMesh& s, double x, double& f, double& f1, double& f2,
                                double& f3) const {
    f = seg_density(s, x);
    double l1 = 0.0, l2 = 0.0, l3 = 0.0;
    for (double a : bs_.endpoints()) {
        const double d = x - a;
        l1 += 0.5 / d;
        l2 -= 0.5 / (d * d);
        l3 += 1.0 / (d * d * d);
    }
    f1 = -l1 * f;
    f2 = (l1 * l1 - l2) * f;
    f3 = (-l1 * l1 * l1 + 3.0 * l1 * l2 - l3) * f;
}

double GEvaluator::pv_total(double x) const {
    double acc = 0.0;
    for (const SegMesh& m : segs_) {
        if (x > m.lo && x < m.hi) {
            const double fx = seg_density(m, x);
            double s = 0.0;
            for (std::size_t i = 0; i < m.x.size(); ++i)
                s += (m.density[i] - fx) / (m.x[i] - x) * m.w[i];
            s += fx * std::log((m.hi - x) / (x - m.lo));
            acc += s;
        } else {
            for (std::size_t i = 0; i < m.x.size(); ++i)
                acc += m.density[i] / (m.x[i] - x) * m.w[i];
        }
    }
    for (const GapMesh& m : gaps_) {
        const double om = omegas_[m.index] * m.rho;
        if (x > m.lo && x < m.hi) {
            const double fx = -om / bs_.abs_radical(x);
            double s = 0.0;
            for (std::size_t i = 0; i < m.x.size(); ++i)
                s += (-om * m.invR[i] - fx) / (m.x[i] - x) * m.w[i];
            s += fx * std::log((m.hi - x) / (x - m.lo));
            acc += s;
        } else {
            for (std::size_t i = 0; i < m.x.size(); ++i)
                acc -= om * m.invR[i] / (m.x[i] - x) * m.w[i];
        }
    }
    return acc;
}

double GEvaluator::pv_total_prime(double x) const {
    double acc = 0.0;
    for (const SegMesh& m : segs_) {
        if (x > m.lo && x < m.hi) {
            double fx, f1, f2, f3;
            density_derivs(m, x, fx, f1, f2, f3);
            const double tau = 1e-3 * std::min({m.hi - m.lo, x - m.lo, m.hi - x});
            double s = 0.0;
            for (std::size_t i = 0; i < m.x.size(); ++i) {
                const double d = m.x[i] - x;
                double val;
                if (std::abs(d) < tau) {
                    val = 0.5 * f2 + f3 * d / 6.0;
                } else {
                    val = (m.density[i] - fx - f1 * d) / (d * d);
                }
                s += val * m.w[i];
            }
            s += f1 * std::log((m.hi - x) / (x - m.lo));
            s += fx * (-1.0 / (m.hi - x) - 1.0 / (x - m.lo));
            acc += s;
        } else {
            for (std::size_t i = 0; i < m.x.size(); ++i) {
                const double d = m.x[i] - x;
                acc += m.density[i] / (d * d) * m.w[i];
            }
        }
    }
    for (const GapMesh& m : gaps_) {
        const double om = omegas_[m.index] * m.rho;
        for (std::size_t i = 0; i < m.x.size(); ++i) {
            const double d = m.x[i] - x;
            acc -= om * m.invR[i] / (d * d) * m.w[i];
        }
    }
    return acc;
}

cplx GEvaluator::g_boundary(double x, Shore shore) const {
    check_interior(x, excl_);
    const int chi = bs_.chi(x);
    const int eps = bs_.band_sign(bs_.band_index_of(x));
    const double im = -eps * bs_.abs_radical(x) * pv_total(x) / (2.0 * M_PI);
    cplx up(0.5 * chi, im);
    return shore == Shore::upper ? up : std::conj(up);
}

double GEvaluator::g_im(double x) const {
    check_interior(x, excl_);
    const int eps = bs_.band_sign(bs_.band_index_of(x));
    return -eps * bs_.abs_radical(x) * pv_total(x) / (2.0 * M_PI);
}

double GEvaluator::g_im_unchecked(double x) const {
    check_interior(x, min_dist_);
    const int eps = bs_.band_sign(bs_.band_index_of(x));
    return -eps * bs_.abs_radical(x) * pv_total(x) / (2.0 * M_PI);
}

double GEvaluator::g_im_prime(double x) const {
    check_interior(x, excl_);
    const int eps = bs_.band_sign(bs_.band_index_of(x));
    const double absR = bs_.abs_radical(x);
    const double dabsR = absR * bs_.dlog_abs_radical(x);
    return -eps * (dabsR * pv_total(x) + absR * pv_total_prime(x)) / (2.0 * M_PI);
}

} // namespace fht
