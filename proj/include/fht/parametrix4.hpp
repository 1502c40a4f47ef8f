#pragma once

#include "fht/model.hpp"

namespace fht {

/// Continuation branch in the spectral variable kappa.
enum class KappaBranch { upper, lower };

/// Symmetric two-interval model E = [-a, 0], J = [0, a]: the closed-form
/// g4, the scalar gtilde4 (by quadrature), and the model matrix Psi4 with
/// its nilpotent correction. Independent of the generic model machinery,
/// so the two constructions can be cross-checked.
class SymmetricModel {
  public:
    explicit SymmetricModel(double a, int quad_order = 40);

    double a() const { return a_; }

    /// R2(z) = sqrt(z^2 - a^2), branch R2 ~ z at infinity.
    cplx r2(cplx z) const;
    cplx r2(double x, Shore shore) const;

    /// g4(z) = (1/(i pi)) ln((a + i R2(z))/z) - 1/2.
    cplx g4(cplx z) const;
    cplx g4(double x, Shore shore) const;

    /// gtilde4 by quadrature; odd in the branch.
    cplx tilde_g4(cplx z, KappaBranch branch) const;
    cplx tilde_g4(double x, Shore shore, KappaBranch branch) const;

    /// Psi4: (1 + i a B/(2z)) ((z-a)(z+a)/z^2)^{sigma_1/4} on the lower
    /// branch, sigma_1-conjugated on the upper branch.
    Mat2 psi4(cplx z, KappaBranch branch) const;
    Mat2 psi4(double x, Shore shore, KappaBranch branch) const;

    /// Exponential construction e^{gt4(inf) s3} ((z+a)/(z-a))^{s1/4} e^{-gt4(z) s3};
    /// coincides with psi4 on the matching branch.
    Mat2 psi4_exp(cplx z, KappaBranch branch) const;
    Mat2 psi4_exp(double x, Shore shore, KappaBranch branch) const;

  private:
    cplx root_quarter(cplx z) const;             // ((z-a)(z+a)/z^2)^{1/4}, factor cuts
    cplx root_quarter(double x, Shore shore) const;
    cplx ratio_quarter(cplx z) const;            // ((z+a)/(z-a))^{1/4}
    cplx ratio_quarter(double x, Shore shore) const;
    void check_point(cplx z) const;

    double a_ = 1.0;
    std::vector<double> qx_, qw_, qinvR_; // mesh over (0, a) with 1/|R2|
};

} // namespace fht
