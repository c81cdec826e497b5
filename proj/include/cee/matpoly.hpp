#pragma once

#include <utility>
#include <vector>

#include "cee/numeric.hpp"
#include "cee/structure.hpp"

namespace cee {

enum class PolyRole { generic, A, B, Sigma };

/// An ell x ell matrix polynomial in the observer parameterization
/// P(z) = D(z) + Pi(z) C with D(z) = diag(z^{t_i}) and C the n*ell x ell
/// coefficient matrix. The reversed polynomial P_*(z) = D(z) P(1/z) is
/// I + C_1 z + ... + C_t z^t with C_k = N_k C.
class MatrixPolynomial {
public:
    MatrixPolynomial() = default;  ///< empty placeholder; not usable until assigned
    MatrixPolynomial(StructureSpec spec, Matrix coeff, PolyRole role = PolyRole::generic);

    const StructureSpec& spec() const { return spec_; }
    const Matrix& coeff() const { return coeff_; }
    PolyRole role() const { return role_; }

    CMatrix eval(Complex z) const;

    /// Evaluation of the reversed polynomial; eval_reversed(0) = I.
    CMatrix eval_reversed(Complex z) const;

    /// C_k = N_k C for k = 1..t.
    Matrix coefficient_block(int k) const;

    /// Companion form J - C H whose eigenvalues are the zeros of det P(z).
    Matrix companion() const;

private:
    StructureSpec spec_;
    Matrix coeff_;
    PolyRole role_;
};

struct SchurResult {
    bool stable = false;
    CVector eigenvalues;
};

/// Schur stability via the companion form; stable iff every eigenvalue
/// modulus is below 1 - 1e-12.
SchurResult is_schur(const MatrixPolynomial& poly);

struct PosRealResult {
    bool ok = false;
    double min_eig = 0.0;
};

/// Minimum over a unit-circle grid of the smallest eigenvalue of
/// Phi(z) + Phi(z)^H with Phi = A(z)^{-1} B(z) / 2. Requires A Schur
/// stable (throws unstable_A otherwise); ok iff min_eig >= -1e-10.
PosRealResult positive_real_check(const MatrixPolynomial& A, const MatrixPolynomial& B,
                                  int grid = 512);

/// Stacked coefficient matrices of the reversed polynomial:
/// S is the (n+1)ell square block upper-triangular Toeplitz of
/// (I, C_1, ..., C_n) and M stacks (I; C_1'; ...; C_n'). Requires equal
/// observability indices.
std::pair<Matrix, Matrix> build_S_M(const MatrixPolynomial& poly);

/// Relative max-norm deviation, over a unit-circle grid, of
/// A(z) B(1/z)' + B(z) A(1/z)' from 2 Sigma(z) R R' Sigma(1/z)'.
double spectral_identity_residual(const MatrixPolynomial& A, const MatrixPolynomial& B,
                                  const MatrixPolynomial& Sigma, const Matrix& R,
                                  int grid = 512);

/// Minimum-phase spectral factor V(z) = A(z)^{-1} Sigma(z) R.
struct SpectralFactor {
    MatrixPolynomial A;
    MatrixPolynomial Sigma;
    Matrix R;
};

/// Reversed-coefficient blocks (X_1..X_n) -> coefficient matrix, for equal
/// observability indices.
Matrix coeff_from_blocks(const StructureSpec& spec, const std::vector<Matrix>& blocks);

namespace detail {
/// Grid minimum of the smallest eigenvalue of Phi(z) + Phi(z)^H for an
/// arbitrary evaluator; shared by positive_real_check and tests.
template <typename F>
PosRealResult hermitian_min_on_grid(F&& phi, int grid) {
    PosRealResult res;
    res.min_eig = std::numeric_limits<double>::infinity();
    for (int q = 0; q < grid; ++q) {
        double theta = 2.0 * M_PI * q / grid;
        CMatrix p = phi(Complex(std::cos(theta), std::sin(theta)));
        CMatrix herm = p + p.adjoint();
        Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
        res.min_eig = std::min(res.min_eig, es.eigenvalues()(0));
    }
    res.ok = res.min_eig >= -1e-10;
    return res;
}
}  // namespace detail

}  // namespace cee
