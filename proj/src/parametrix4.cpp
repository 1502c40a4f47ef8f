#include "fht/parametrix4.hpp"

#include <cmath>
#include <stdexcept>

namespace fht {

namespace {
const cplx I(0.0, 1.0);
double branch_sign(KappaBranch b) { return b == KappaBranch::upper ? 1.0 : -1.0; }
} // namespace

SymmetricModel::SymmetricModel(double a, int quad_order) : a_(a) {
    if (!(a > 0.0)) throw std::invalid_argument("SymmetricModel: a must be positive");
    EndpointMesh em = endpoint_mesh(0.0, a, false, true, 1e-13 * a, 8, quad_order);
    qx_ = std::move(em.x);
    qw_ = std::move(em.w);
    qinvR_.resize(qx_.size());
    for (std::size_t i = 0; i < qx_.size(); ++i) {
        const double da = (em.prot[i] == a_) ? em.dist[i] : a_ - qx_[i];
        qinvR_[i] = 1.0 / std::sqrt(da * (a_ + qx_[i]));
    }
}

void SymmetricModel::check_point(cplx z) const {
    if (z.imag() != 0.0) return;
    const double x = z.real();
    if (x == a_ || x == -a_) throw branch_point_error("SymmetricModel: branch point");
    if (x == 0.0) throw branch_point_error("SymmetricModel: double point");
}

cplx SymmetricModel::r2(cplx z) const {
    check_point(z);
    return pow_cut(z, -a_, 0.5) * pow_cut(z, a_, 0.5);
}

cplx SymmetricModel::r2(double x, Shore shore) const {
    check_point(cplx(x, 0.0));
    return pow_cut(x, -a_, 0.5, shore) * pow_cut(x, a_, 0.5, shore);
}

cplx SymmetricModel::g4(cplx z) const {
    check_point(z);
    return std::log((a_ + I * r2(z)) / z) / (I * M_PI) - 0.5;
}

cplx SymmetricModel::g4(double x, Shore shore) const {
    check_point(cplx(x, 0.0));
    if (std::abs(x) > a_) {
        return std::log((a_ + I * r2(x, shore)) / x) / (I * M_PI) - 0.5;
    }
    // inside the cut: (a + i R2(x+-)) is real and the argument of w is 0 on
    // (0,a) and +pi on (-a,0), approached from either shore
    const double s = std::sqrt((a_ - x) * (a_ + x));
    const double w = (shore == Shore::upper) ? (a_ - s) / x : (a_ + s) / x;
    if (x > 0.0) return cplx(-0.5, -std::log(w) / M_PI);
    return cplx(0.5, -std::log(-w) / M_PI);
}

cplx SymmetricModel::tilde_g4(cplx z, KappaBranch branch) const {
    check_point(z);
    const double s = branch_sign(branch);
    if (z.imag() == 0.0 && std::abs(z.real()) < a_)
        return tilde_g4(z.real(), Shore::upper, branch);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < qx_.size(); ++i) acc += qinvR_[i] * qw_[i] / (qx_[i] - z);
    return -0.5 * I * s * r2(z) * acc;
}

cplx SymmetricModel::tilde_g4(double x, Shore shore, KappaBranch branch) const {
    check_point(cplx(x, 0.0));
    const double s = branch_sign(branch);
    if (std::abs(x) >= a_) return tilde_g4(cplx(x, 0.0), branch);
    const double sh = (shore == Shore::upper) ? 1.0 : -1.0;
    const double absR = std::sqrt((a_ - x) * (a_ + x));
    if (x > 0.0) {
        // principal value on the density support (0, a)
        const double fx = 1.0 / absR;
        double acc = 0.0;
        for (std::size_t i = 0; i < qx_.size(); ++i)
            acc += (qinvR_[i] - fx) / (qx_[i] - x) * qw_[i];
        acc += fx * std::log((a_ - x) / x);
        return cplx(sh * 0.5 * s * absR * acc, s * 0.5 * M_PI);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < qx_.size(); ++i) acc += qinvR_[i] / (qx_[i] - x) * qw_[i];
    return cplx(sh * 0.5 * s * absR * acc, 0.0);
}

cplx SymmetricModel::root_quarter(cplx z) const {
    return pow_cut(z, a_, 0.25) * pow_cut(z, -a_, 0.25) * pow_cut(z, 0.0, -0.5);
}

cplx SymmetricModel::root_quarter(double x, Shore shore) const {
    return pow_cut(x, a_, 0.25, shore) * pow_cut(x, -a_, 0.25, shore) *
           pow_cut(x, 0.0, -0.5, shore);
}

cplx SymmetricModel::ratio_quarter(cplx z) const {
    return pow_cut(z, -a_, 0.25) * pow_cut(z, a_, -0.25);
}

cplx SymmetricModel::ratio_quarter(double x, Shore shore) const {
    return pow_cut(x, -a_, 0.25, shore) * pow_cut(x, a_, -0.25, shore);
}

namespace {
Mat2 psi4_from_parts(double a, cplx z, cplx rq, KappaBranch branch) {
    const Mat2 B = kSigma3 - cplx(0.0, 1.0) * kSigma2;
    const double s = (branch == KappaBranch::lower) ? 1.0 : -1.0;
    Mat2 m = Mat2::Identity() + s * (cplx(0.0, 0.5) * a / z) * B;
    return m * sigma1_power(rq);
}
} // namespace

Mat2 SymmetricModel::psi4(cplx z, KappaBranch branch) const {
    check_point(z);
    return psi4_from_parts(a_, z, root_quarter(z), branch);
}

Mat2 SymmetricModel::psi4(double x, Shore shore, KappaBranch branch) const {
    return psi4_from_parts(a_, cplx(x, 0.0), root_quarter(x, shore), branch);
}

Mat2 SymmetricModel::psi4_exp(cplx z, KappaBranch branch) const {
    check_point(z);
    const cplx ginf = I * branch_sign(branch) * M_PI / 4.0; // gtilde4 at infinity
    return sigma3_exp(ginf) * sigma1_power(ratio_quarter(z)) * sigma3_exp(-tilde_g4(z, branch));
}

Mat2 SymmetricModel::psi4_exp(double x, Shore shore, KappaBranch branch) const {
    const cplx ginf = I * branch_sign(branch) * M_PI / 4.0;
    return sigma3_exp(ginf) * sigma1_power(ratio_quarter(x, shore)) *
           sigma3_exp(-tilde_g4(x, shore, branch));
}

} // namespace fht
