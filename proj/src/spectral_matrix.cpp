#include "fht/spectral_matrix.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace fht {

int block2_size(int n) { return n / 2; }

MMatrix build_sums(const IntervalConfig& cfg, const AngleSet& ang, const ModelCoefficients& co) {
    const int n = cfg.n();
    const int N = block2_size(n);
    const int Nt = block1_size(n);
    MMatrix M;
    M.block1.resize(Nt, Nt);
    M.block2.resize(N, N);
    const auto& b = cfg.doubles;
    const auto& nu = ang.nu;
    const double alpha = ang.alpha;

    for (int l = 0; l < Nt; ++l) {
        const int gl = 2 * l;       // global 0-based index of b_{2l-1}
        double diag = co.k[gl] * std::cos(nu[gl] - alpha);
        for (int j = 0; j < Nt; ++j) {
            if (j == l) continue;
            const int gj = 2 * j;
            diag -= 2.0 * co.k[gl] * co.k[gj] * std::sin(nu[gl] - nu[gj]) / (b[gj] - b[gl]);
        }
        M.block1(l, l) = diag;
        for (int j = 0; j < Nt; ++j) {
            if (j == l) continue;
            const int gj = 2 * j;
            M.block1(j, l) =
                2.0 * co.k[gj] * co.k[gl] * std::sin(nu[gj] - nu[gl]) / (b[gl] - b[gj]);
        }
    }
    for (int l = 0; l < N; ++l) {
        const int gl = 2 * l + 1;   // global 0-based index of b_{2l}
        double diag = co.k[gl] * std::sin(nu[gl] + alpha);
        for (int j = 0; j < N; ++j) {
            if (j == l) continue;
            const int gj = 2 * j + 1;
            diag -= 2.0 * co.k[gl] * co.k[gj] * std::sin(nu[gl] - nu[gj]) / (b[gj] - b[gl]);
        }
        M.block2(l, l) = diag;
        for (int j = 0; j < N; ++j) {
            if (j == l) continue;
            const int gj = 2 * j + 1;
            M.block2(j, l) =
                2.0 * co.k[gj] * co.k[gl] * std::sin(nu[gj] - nu[gl]) / (b[gl] - b[gj]);
        }
    }
    return M;
}

void diag_sums(const IntervalConfig& cfg, const AngleSet& ang, const ModelCoefficients& co,
               std::vector<double>& dt, std::vector<double>& d) {
    const int n = cfg.n();
    const int N = block2_size(n);
    const int Nt = block1_size(n);
    const double width = cfg.width();
    dt.assign(Nt, 0.0);
    d.assign(N, 0.0);
    for (int m = 0; m < Nt; ++m) {
        double s = std::cos(ang.alpha - ang.nu[2 * m]);
        for (int j = 0; j < Nt; ++j)
            s -= 2.0 * co.k[2 * j] / (width * std::sin(ang.nu[2 * j] + ang.nu[2 * m]));
        dt[m] = s;
    }
    for (int m = 0; m < N; ++m) {
        double s = std::sin(ang.alpha + ang.nu[2 * m + 1]);
        for (int j = 0; j < N; ++j)
            s -= 2.0 * co.k[2 * j + 1] / (width * std::sin(ang.nu[2 * j + 1] + ang.nu[2 * m + 1]));
        d[m] = s;
    }
}

void diag_closed(const AngleSet& ang, std::vector<double>& dt, std::vector<double>& d) {
    const int n = static_cast<int>(ang.nu.size());
    const int N = block2_size(n);
    const int Nt = n - N;
    dt.assign(Nt, 0.0);
    d.assign(N, 0.0);
    for (int m = 0; m < Nt; ++m) {
        const double nu = ang.nu[2 * m];
        double v = std::cos(nu);
        if (n % 2 == 1) v *= std::sin(nu); // (sin nu)^{(1-(-1)^n)/2}
        for (int s = 0; s < N; ++s) v *= std::sin(nu + ang.nu[2 * s + 1]);
        for (int s = 0; s < Nt; ++s) v /= std::sin(nu + ang.nu[2 * s]);
        dt[m] = v;
    }
    for (int m = 0; m < N; ++m) {
        const double nu = ang.nu[2 * m + 1];
        double v = (n % 2 == 0) ? std::sin(nu) : 1.0; // (sin nu)^{(1+(-1)^n)/2}
        for (int s = 0; s < Nt; ++s) v *= std::sin(nu + ang.nu[2 * s]);
        for (int s = 0; s < N; ++s) v /= std::sin(nu + ang.nu[2 * s + 1]);
        d[m] = v;
    }
}

MMatrix build_factored(const IntervalConfig& cfg, const AngleSet& ang,
                       const ModelCoefficients& co) {
    const int n = cfg.n();
    const int N = block2_size(n);
    const int Nt = block1_size(n);
    std::vector<double> dt, d;
    diag_sums(cfg, ang, co, dt, d);
    MMatrix M;
    M.block1.resize(Nt, Nt);
    M.block2.resize(N, N);
    const double width = cfg.width();
    for (int i = 0; i < Nt; ++i)
        for (int j = 0; j < Nt; ++j) {
            double v = 2.0 * co.k[2 * i] * co.k[2 * j] /
                       (width * std::sin(ang.nu[2 * i] + ang.nu[2 * j]));
            if (i == j) v += co.k[2 * i] * dt[i];
            M.block1(i, j) = v;
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double v = 2.0 * co.k[2 * i + 1] * co.k[2 * j + 1] /
                       (width * std::sin(ang.nu[2 * i + 1] + ang.nu[2 * j + 1]));
            if (i == j) v += co.k[2 * i + 1] * d[i];
            M.block2(i, j) = v;
        }
    return M;
}

double cosecant_det(const std::vector<double>& theta, DetMethod method) {
    const int N = static_cast<int>(theta.size());
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            if (theta[i] == theta[j]) throw std::invalid_argument("cosecant_det: coincident angles");
    if (method == DetMethod::elimination) {
        Eigen::MatrixXd A(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) A(i, j) = 1.0 / std::sin(theta[i] + theta[j]);
        // plain Gaussian elimination without pivoting
        double det = 1.0;
        for (int k = 0; k < N; ++k) {
            det *= A(k, k);
            if (A(k, k) == 0.0) return 0.0;
            for (int i = k + 1; i < N; ++i) {
                const double f = A(i, k) / A(k, k);
                for (int j = k; j < N; ++j) A(i, j) -= f * A(k, j);
            }
        }
        return det;
    }
    // Cauchy product formula with xi_j = exp(2 i theta_j)
    std::vector<std::complex<double>> xi(N);
    for (int j = 0; j < N; ++j) xi[j] = std::polar(1.0, 2.0 * theta[j]);
    double num = 1.0, den = 1.0;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            num *= std::norm(xi[i] - xi[j]);
            den *= std::norm(std::conj(xi[i]) - xi[j]);
        }
    for (int j = 0; j < N; ++j) den *= std::sin(2.0 * theta[j]);
    return num / den;
}

Eigen::MatrixXd upper_cholesky(const Eigen::MatrixXd& M) {
    const int n = static_cast<int>(M.rows());
    if (M.cols() != n) throw std::invalid_argument("upper_cholesky: square matrix required");
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double s = M(i, i);
        for (int k = 0; k < i; ++k) s -= C(k, i) * C(k, i);
        if (!(s > 0.0)) {
            std::ostringstream os;
            os << "not positive definite: pivot " << i << " = " << s;
            throw not_positive_definite(os.str(), i);
        }
        C(i, i) = std::sqrt(s);
        for (int j = i + 1; j < n; ++j) {
            double t = M(i, j);
            for (int k = 0; k < i; ++k) t -= C(k, i) * C(k, j);
            C(i, j) = t / C(i, i);
        }
    }
    return C;
}

CholeskyFactor cholesky(const MMatrix& M) {
    CholeskyFactor f;
    f.C1 = upper_cholesky(M.block1);
    f.C2 = upper_cholesky(M.block2);
    return f;
}

Eigen::MatrixXd CholeskyFactor::full() const {
    const int n1 = static_cast<int>(C1.rows());
    const int n2 = static_cast<int>(C2.rows());
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    C.topLeftCorner(n1, n1) = C1;
    C.bottomRightCorner(n2, n2) = C2;
    return C;
}

} // namespace fht
