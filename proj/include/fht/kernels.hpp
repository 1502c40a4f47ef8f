#pragma once

#include <vector>

#include "fht/gfunction.hpp"
#include "fht/model.hpp"
#include "fht/parallel.hpp"
#include "fht/spectral_matrix.hpp"

namespace fht {

/// kappa = -ln(|lambda|/2); requires 0 < |lambda| <= 1.
double kappa_of_lambda(double lambda);

struct PhiPair {
    double x = 0.0;
    double kappa = 0.0;
    double phi_plus = 0.0;
    double phi_minus = 0.0;
    double phi_tilde_plus = 0.0;
    double phi_tilde_minus = 0.0;
};

enum class KernelPair { EE, EJ, JE, JJ };

struct SamplePoints {
    std::vector<double> x;
    std::vector<double> seeds;
    double gram_det = 0.0;
    double displacement_bound = 0.0; // 2 pi / (kappa min |g_im'|)
};

/// Values of the kernels on a fixed node set, with the expensive g_im
/// evaluations done once. amp[j][i] = A_{j+1}(x_i).
struct KernelGrid {
    std::vector<double> x;
    std::vector<double> gim;
    std::vector<int> band; // +1 on E, -1 on J
    std::vector<std::vector<double>> amp;
};

/// Small-lambda spectral kernels of the single-interval configuration:
/// phi pairs, the quadratic forms in M, the Cholesky amplitudes A_j, the
/// kernels G_j, and the approximate resolution-of-identity derivative.
class KernelEvaluator {
  public:
    KernelEvaluator(const IntervalConfig& cfg, const GEvaluator& gfun);

    const IntervalConfig& config() const { return cfg_; }
    const ModelEvaluator& model() const { return model_; }
    const MMatrix& M() const { return M_; }
    const CholeskyFactor& chol() const { return chol_; }
    const GEvaluator& gfun() const { return gfun_; }
    int n() const { return cfg_.n(); }
    int n_tilde() const { return block1_size(cfg_.n()); }

    PhiPair phi_values(double x, double kappa) const;

    /// Real value v with Rtilde_XY = v / (i pi); EE/JJ carry sgn(lambda).
    double quadratic_kernel(double x, double y, double lambda, KernelPair which) const;

    std::vector<double> amplitudes(double x) const;
    std::vector<double> g_kernels(double x, double lambda) const;
    /// sum_j G_j(x) G_j(y)  (the |lambda|-scaled kernel).
    double approx_Eprime(double x, double y, double lambda) const;

    SamplePoints select_sample_points(double lambda, double lo, double hi, int count,
                                      double det_floor = 1e-8) const;

    double illposedness_index(double x0, double lambda) const;

    /// Bulk evaluation without the exclusion-zone guard; used for quadrature
    /// over full bands where the integrable blow-up must be sampled.
    KernelGrid precompute_grid(const std::vector<double>& xs, Exec exec = Exec::serial) const;
    void g_on_grid(const KernelGrid& grid, double lambda, int j, std::vector<double>& out) const;
    double approx_Eprime_from_grid(const KernelGrid& grid, int i1, int i2, double lambda) const;

  private:
    void check_point(double x) const;
    int band_of(double x) const; // +1 E, -1 J (throws on non-interior)
    std::vector<double> amplitudes_at(double x) const; // unguarded
    void vminus(double x, Eigen::VectorXd& v) const;
    void vplus(double x, Eigen::VectorXd& v) const;

    IntervalConfig cfg_;
    const GEvaluator& gfun_;
    ModelEvaluator model_;
    AngleSet ang_;
    ModelCoefficients co_;
    MMatrix M_;
    CholeskyFactor chol_;
};

} // namespace fht
