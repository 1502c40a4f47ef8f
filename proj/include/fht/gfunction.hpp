#pragma once

#include <vector>

#include "fht/bands.hpp"
#include "fht/quadrature.hpp"

namespace fht {

struct QuadratureSpec {
    int order = 32;          // Gauss-Legendre order per panel
    int middle_panels = 16;  // uniform panels in the central section of a segment
    double excl_factor = 1e-3; // delta_excl = excl_factor * (a2 - a1)
};

/// Principal-value evaluator for the g-function
///
///   g(z) = R(z)/(2 pi i) [ int_U chi / ((zeta - z) R_+(zeta)) d zeta
///                          + sum_j int_gap_j i Omega_j / ((zeta - z) R(zeta)) d zeta ],
///
/// with the gap constants Omega_j solved from the moment system that makes
/// g analytic at infinity. Boundary values are reduced to real principal-value
/// integrals with singularity subtraction, so Re g(x_+) = chi(x)/2 holds by
/// construction and Im g carries all quadrature error.
class GEvaluator {
  public:
    explicit GEvaluator(BandSystem bs, QuadratureSpec spec = {});
    static GEvaluator from_config(const IntervalConfig& cfg, QuadratureSpec spec = {}) {
        return GEvaluator(BandSystem::from_config(cfg), spec);
    }

    const BandSystem& bands() const { return bs_; }
    const QuadratureSpec& spec() const { return spec_; }
    double delta_excl() const { return excl_; }

    /// Gap constants Omega_j (empty when g = 0).
    const std::vector<double>& omegas() const { return omegas_; }
    /// Max-norm residual of the solved moment system.
    double moment_residual() const { return moment_residual_; }
    /// Condition estimate of the moment matrix (1 when g = 0).
    double moment_condition() const { return moment_condition_; }

    cplx radical(cplx z) const;
    cplx radical(double x, Shore shore) const;

    /// g(z) for z off the closed bands.
    cplx g(cplx z) const;
    /// Boundary value g(x_+-) for x strictly inside a band, away from
    /// endpoints and double points by delta_excl.
    cplx g_boundary(double x, Shore shore) const;
    /// Im g(x_+).
    double g_im(double x) const;
    /// d/dx Im g(x_+), by differentiation under the integral sign.
    double g_im_prime(double x) const;
    /// Im g(x_+) without the delta_excl guard; only the quadrature floor
    /// (1e-11 of the total width) is enforced. For integration over full
    /// bands, where the integrable blow-up must be sampled.
    double g_im_unchecked(double x) const;

  private:
    struct SegMesh {
        int band = 0;
        double lo = 0.0, hi = 0.0;
        int chi = +1;
        int eps = +1; // band sign: R_+ = i eps |R|
        std::vector<double> x, w;
        std::vector<double> density; // chi * eps / |R|
    };
    struct GapMesh {
        int index = 0;
        double lo = 0.0, hi = 0.0;
        int rho = +1; // R = rho |R| on the gap
        std::vector<double> x, w;
        std::vector<double> invR; // 1 / |R|
    };

    void build_meshes();
    void solve_omegas();
    void check_interior(double x, double min_dist) const;
    double pv_total(double x) const;   // P.V. density integral entering Im g
    double pv_total_prime(double x) const;
    double seg_density(const SegMesh& s, double x) const;
    // log-derivatives of the density at x, for the subtraction Taylor guard
    void density_derivs(const SegMesh& s, double x, double& f, double& f1, double& f2,
                        double& f3) const;

    BandSystem bs_;
    QuadratureSpec spec_;
    double excl_ = 0.0;
    double width_ = 0.0;
    double floor_ = 0.0;    // mesh grading floor
    double min_dist_ = 0.0; // hard evaluation floor for unchecked access
    std::vector<SegMesh> segs_;
    std::vector<GapMesh> gaps_;
    std::vector<double> omegas_;
    double moment_residual_ = 0.0;
    double moment_condition_ = 1.0;
};

/// Standalone moment-system solve for the gap constants.
std::vector<double> solve_omegas(const BandSystem& bs, QuadratureSpec spec = {},
                                 double* residual = nullptr, double* condition = nullptr);

} // namespace fht
