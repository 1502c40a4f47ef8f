#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fht/geometry.hpp"
#include "fht/model.hpp"

namespace fht {

struct not_positive_definite : std::runtime_error {
    int pivot;
    not_positive_definite(const std::string& msg, int piv)
        : std::runtime_error(msg), pivot(piv) {}
};

/// Block diagonal matrix M = diag(M1, M2); M1 couples the odd-indexed double
/// points (size Ntilde), M2 the even-indexed ones (size N).
struct MMatrix {
    Eigen::MatrixXd block1;
    Eigen::MatrixXd block2;
    int n() const { return static_cast<int>(block1.rows() + block2.rows()); }
};

int block2_size(int n);                  // N
inline int block1_size(int n) { return n - block2_size(n); } // Ntilde

/// Defining entries: diagonal sums plus antisymmetric-ratio off-diagonals.
MMatrix build_sums(const IntervalConfig& cfg, const AngleSet& ang, const ModelCoefficients& co);

/// Factored form M1 = Kt Dt + 2 Kt Ct Kt/(a2-a1), M2 = K D + 2 K C K/(a2-a1).
MMatrix build_factored(const IntervalConfig& cfg, const AngleSet& ang,
                       const ModelCoefficients& co);

/// Closed-form diagonal entries of Dt and D (residue identities).
void diag_closed(const AngleSet& ang, std::vector<double>& dt, std::vector<double>& d);
/// Defining-sum diagonal entries of Dt and D.
void diag_sums(const IntervalConfig& cfg, const AngleSet& ang, const ModelCoefficients& co,
               std::vector<double>& dt, std::vector<double>& d);

enum class DetMethod { elimination, product };
/// Determinant of [csc(theta_i + theta_j)]; both routes must agree.
double cosecant_det(const std::vector<double>& theta, DetMethod method);

/// Upper-triangular Cholesky factor with positive diagonal, blockwise.
struct CholeskyFactor {
    Eigen::MatrixXd C1; // factor of M1 (C_-)
    Eigen::MatrixXd C2; // factor of M2 (C_+)
    Eigen::MatrixXd full() const;
};

/// Plain right-looking factorization, no pivoting; throws
/// not_positive_definite on a non-positive pivot.
Eigen::MatrixXd upper_cholesky(const Eigen::MatrixXd& M);
CholeskyFactor cholesky(const MMatrix& M);

} // namespace fht
