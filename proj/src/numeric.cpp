#include "cee/numeric.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace cee {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_input: return "invalid_input";
        case ErrorCode::non_convergent: return "non_convergent";
        case ErrorCode::singular_normalization: return "singular_normalization";
        case ErrorCode::path_singular: return "path_singular";
        case ErrorCode::singular_L: return "singular_L";
        case ErrorCode::unstable_A: return "unstable_A";
        case ErrorCode::unstable_sigma: return "unstable_sigma";
        case ErrorCode::unequal_indices: return "unequal_indices";
        case ErrorCode::infeasible: return "infeasible";
        case ErrorCode::step_collapse: return "step_collapse";
        case ErrorCode::jacobian_singular: return "jacobian_singular";
        case ErrorCode::inconsistent_P: return "inconsistent_P";
        case ErrorCode::not_psd: return "not_psd";
        case ErrorCode::saturated: return "saturated";
        case ErrorCode::unstable_factor: return "unstable_factor";
        case ErrorCode::insufficient_data: return "insufficient_data";
        case ErrorCode::singular_basis: return "singular_basis";
        case ErrorCode::rejection_exhausted: return "rejection_exhausted";
        case ErrorCode::degenerate_data: return "degenerate_data";
        case ErrorCode::io_error: return "io_error";
    }
    return "unknown";
}

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b);
}

double cond(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0) return 0.0;
    double smin = s(s.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
}

double spectral_radius(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

CVector general_eigenvalues(const Matrix& m) {
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues();
}

Vector symmetric_eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Matrix solve_discrete_lyapunov(const Matrix& A, const Matrix& Q, double residual_tol) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || Q.rows() != n || Q.cols() != n)
        throw Error(ErrorCode::invalid_input, "Lyapunov solve needs square conformant matrices");
    if (n > 200)
        throw Error(ErrorCode::invalid_input,
                    "Lyapunov solve limited to dimension 200 (column-stacked direct solve)");

    Matrix lhs = Matrix::Identity(n * n, n * n) - kron(A, A);
    Vector x = lhs.partialPivLu().solve(vec(Q));
    Matrix X = unvec(x, n, n);
    X = 0.5 * (X + X.transpose().eval());

    double resid = max_abs(X - A * X * A.transpose() - Q);
    if (resid > residual_tol * std::max(1.0, max_abs(X)))
        throw Error(ErrorCode::non_convergent,
                    "Lyapunov residual " + std::to_string(resid) + " above tolerance");
    return X;
}

Matrix sqrtm_psd(const Matrix& m, double clip) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    Vector lam = es.eigenvalues();
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) < -clip)
            throw Error(ErrorCode::not_psd,
                        "matrix square root: eigenvalue " + std::to_string(lam(i)));
        lam(i) = std::sqrt(std::max(lam(i), 0.0));
    }
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on the raw uniform stream keeps seeded runs portable.
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
}

}  // namespace cee
