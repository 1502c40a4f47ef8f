#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fht/bands.hpp"
#include "fht/geometry.hpp"
#include "fht/quadrature.hpp"

namespace fht {

using Mat2 = Eigen::Matrix2cd;

/// Coefficient families of the rational prefactor S(z): residue scalars
/// m_j, n_j with their common magnitude k_j, and the local-model constants
/// khat_j, shat_j describing exp(gtilde) near each double point.
struct ModelCoefficients {
    std::vector<double> k;
    std::vector<double> m;
    std::vector<double> n_coef;
    std::vector<double> khat;
    std::vector<double> shat;
};

ModelCoefficients coefficients(const IntervalConfig& cfg, const AngleSet& ang);

/// Modulus and phase of B_n^{1/4}(x_+); the phase is +-pi/4 depending on the band.
struct BnQuarter {
    double modulus = 0.0;
    double phase = 0.0;
};

/// Closed-form outer model for the single-interval configuration with the
/// first band E: the scalar s(z,b), the root product Btilde_n, the explicit
/// gtilde, and the matrix solutions Psi = Psi_hat + i Psi_breve.
///
/// Branch convention: all root factors are cut on (-infty, c) and boundary
/// values are produced by shore-flagged evaluation, never by offsetting z.
/// The branch of gtilde is the one with gtilde(infinity) = i alpha, i.e. the
/// continuation from the upper kappa half-plane.
class ModelEvaluator {
  public:
    explicit ModelEvaluator(const IntervalConfig& cfg, int quad_order = 32);

    const IntervalConfig& config() const { return cfg_; }
    const AngleSet& angle_set() const { return ang_; }
    const ModelCoefficients& coeffs() const { return co_; }
    double delta_excl() const { return excl_; }

    cplx s_function(cplx z, double b) const;
    cplx s_function(double x, double b, Shore shore) const;

    cplx tilde_Bn(cplx z) const;
    cplx tilde_Bn(double x, Shore shore) const;

    cplx tilde_g_closed(cplx z) const;
    cplx tilde_g_closed(double x, Shore shore) const;
    cplx tilde_g_infinity() const; // i alpha

    /// Quadrature route for gtilde; oracle for the closed form.
    cplx tilde_g_integral(cplx z) const;
    cplx tilde_g_integral(double x, Shore shore) const;

    /// B_n^{s/4}(z) for s = +1 or -1.
    cplx bn_quarter(cplx z, int s) const;
    cplx bn_quarter(double x, Shore shore, int s) const;
    BnQuarter bn_quarter_boundary(double x) const;

    /// Outer model solution, rational route S(z) (B_n^{1/4})^{sigma_1}.
    Mat2 psi(cplx z) const;
    Mat2 psi(double x, Shore shore) const;
    /// Exponential route e^{gt(inf) s3} ((z-a1)/(z-a2))^{s1/4} e^{-gt(z) s3}.
    Mat2 psi_exp(cplx z) const;
    Mat2 psi_exp(double x, Shore shore) const;

    Mat2 psi_hat(cplx z) const;
    Mat2 psi_hat(double x, Shore shore) const;
    Mat2 psi_breve(cplx z) const;
    Mat2 psi_breve(double x, Shore shore) const;

    /// Residue at infinity of Psi - 1: sum_j B_j plus the sigma_1 part that
    /// the scalar factor B_n^{1/4} contributes.
    Mat2 residue_at_infinity() const;

  private:
    void check_off_branch_points(cplx z) const;
    Mat2 s_matrix(cplx z) const;
    Mat2 hat_part(cplx z) const;   // 1 + sum m_j (1 + (-1)^j s1)/(z - b_j)
    Mat2 breve_part(cplx z) const; // sum n_j s3 (1 + (-1)^j s1)/(z - b_j)

    IntervalConfig cfg_;
    AngleSet ang_;
    ModelCoefficients co_;
    BandSystem bs_;
    double excl_ = 0.0;
    // quadrature mesh over the J-segments for tilde_g_integral
    struct JMesh {
        double lo = 0.0, hi = 0.0;
        std::vector<double> x, w, invR;
    };
    std::vector<JMesh> jmesh_;
};

/// sigma_1 power of a nonzero scalar: q^{sigma_1} = diag-symmetric 2x2.
Mat2 sigma1_power(cplx q);
/// e^{c sigma_3}.
Mat2 sigma3_exp(cplx c);

extern const Mat2 kSigma1;
extern const Mat2 kSigma2;
extern const Mat2 kSigma3;

} // namespace fht
