#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "fht/geometry.hpp"
#include "fht/kernels.hpp"
#include "fht/parallel.hpp"

namespace fht {

/// Quadrature nodes over the E and J parts of U, with panels graded toward
/// the double points, and the symmetrized cross block
///   A(i,j) = sqrt(wJ_i wE_j) / (pi (xJ_i - xE_j)).
/// Same-band entries of the full kernel matrix vanish identically.
struct DiscreteOperator {
    IntervalConfig cfg;
    std::vector<double> xE, wE;
    std::vector<double> xJ, wJ;
    Eigen::MatrixXd A; // rows: J nodes, cols: E nodes
    double delta_h = 0.0;
    int nodes() const { return static_cast<int>(xE.size() + xJ.size()); }
    /// Full symmetric matrix ordered [E nodes, J nodes].
    Eigen::MatrixXd full() const;
};

DiscreteOperator build_discrete(const IntervalConfig& cfg, int nodes_total,
                                double delta_h_factor = 1e-6, Exec exec = Exec::serial);

struct SpectrumReport {
    std::vector<double> singular;        // descending
    std::vector<double> signed_spectrum; // +-sigma pairs, plus exact zeros
    std::vector<int> bin_counts;         // bin k counts sigma in [2^-k-1, 2^-k)
    double sigma_max = 0.0;
    int nodes = 0;
};

SpectrumReport svd_spectrum(const DiscreteOperator& op);

/// Full SVD of the cross block, for singular-vector probes.
struct SvdResult {
    Eigen::VectorXd sigma;
    Eigen::MatrixXd U; // J side
    Eigen::MatrixXd V; // E side
};
SvdResult svd_full(const DiscreteOperator& op);

/// Integration mesh over the segments of one band label, graded toward the
/// segment ends and truncated at the evaluation floor. Ends truncated at a
/// double point are recorded so the integrable |y-b|^{-1/2} tail can be
/// restored in closed form.
struct BandMesh {
    BandLabel label = BandLabel::E;
    std::vector<double> x, w;
    double trunc = 0.0;
    struct TruncatedEnd {
        double b = 0.0;    // double point
        double edge = 0.0; // b +- trunc, inside the segment
    };
    std::vector<TruncatedEnd> ends;
};
BandMesh band_mesh(const IntervalConfig& cfg, BandLabel label, int order = 24);

/// Action of the operator kernel K on samples of f living on the mesh band:
/// (K f)(x) for x inside the other band. Near-singularity subtraction is
/// applied when x comes close to the integration band.
double apply_fht(const IntervalConfig& cfg, const BandMesh& src,
                 const std::vector<double>& fvals, double x);
double apply_fht(const IntervalConfig& cfg, const BandMesh& src,
                 const std::function<double(double)>& f, double x);

struct ResidualReport {
    double lambda = 0.0;
    std::vector<double> r;  // per-j relative residuals over the window grid
    double control = 0.0;   // residual of a smooth non-eigenfunction control
};

/// || K G_j - lambda G_j || / || lambda G_j || over a window grid, with K
/// applied by quadrature over the full bands.
ResidualReport eigen_residual(const KernelEvaluator& ker, double lambda, double win_lo,
                              double win_hi, int grid_points = 41, Exec exec = Exec::serial,
                              bool with_control = false, unsigned control_seed = 7u);

/// Local wavenumber of a sampled oscillatory function near x0: pi over the
/// mean zero spacing. Requires at least six sign changes in the window.
double local_wavenumber(const std::vector<double>& xs, const std::vector<double>& vals,
                        double x0, double half_width);

/// Wavenumber estimate for slowly oscillating samples that carry too few
/// zeros for the spacing route: fit v ~ env(x) [a cos(k phase(x)) +
/// b sin(k phase(x))] over the window and return k |phase'(x0)|. With less
/// than one oscillation in the window the rate k is identifiable only
/// against the known phase and envelope shapes; used with phase = g_im and
/// env = A_j to probe spectral vectors at moderate kappa.
double local_wavenumber(const std::vector<double>& xs, const std::vector<double>& vals,
                        double x0, double half_width,
                        const std::function<double(double)>& phase,
                        const std::function<double(double)>& envelope = nullptr);

} // namespace fht
