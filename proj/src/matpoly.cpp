#include "cee/matpoly.hpp"

#include <cmath>

namespace cee {

MatrixPolynomial::MatrixPolynomial(StructureSpec spec, Matrix coeff, PolyRole role)
    : spec_(std::move(spec)), coeff_(std::move(coeff)), role_(role) {
    spec_.validate();
    if (coeff_.rows() != spec_.n * spec_.ell || coeff_.cols() != spec_.ell)
        throw Error(ErrorCode::invalid_input, "coefficient matrix must be n*ell x ell");
}

CMatrix MatrixPolynomial::eval(Complex z) const {
    const int ell = spec_.ell;
    CMatrix out = CMatrix::Zero(ell, ell);
    int off = 0;
    for (int i = 0; i < ell; ++i) {
        const int ti = spec_.indices[i];
        // Row i of Pi(z) covers block i with powers z^{t_i-1}..z^0.
        Complex zp(1.0, 0.0);
        for (int r = ti - 1; r >= 0; --r) {
            out.row(i) += zp * coeff_.row(off + r).cast<Complex>();
            zp *= z;
        }
        out(i, i) += zp;  // z^{t_i}
        off += ti;
    }
    return out;
}

CMatrix MatrixPolynomial::eval_reversed(Complex z) const {
    const int ell = spec_.ell;
    CMatrix out = CMatrix::Identity(ell, ell);
    int off = 0;
    for (int i = 0; i < ell; ++i) {
        const int ti = spec_.indices[i];
        Complex zp = z;
        for (int r = 0; r < ti; ++r) {
            out.row(i) += zp * coeff_.row(off + r).cast<Complex>();
            zp *= z;
        }
        off += ti;
    }
    return out;
}

Matrix MatrixPolynomial::coefficient_block(int k) const {
    if (k < 1 || k > spec_.t())
        throw Error(ErrorCode::invalid_input, "coefficient block index out of range");
    const int ell = spec_.ell;
    Matrix out = Matrix::Zero(ell, ell);
    int off = 0;
    for (int i = 0; i < ell; ++i) {
        if (k <= spec_.indices[i]) out.row(i) = coeff_.row(off + k - 1);
        off += spec_.indices[i];
    }
    return out;
}

Matrix MatrixPolynomial::companion() const {
    CanonicalMatrices cm = build_canonical(spec_);
    return cm.J - coeff_ * cm.H;
}

SchurResult is_schur(const MatrixPolynomial& poly) {
    SchurResult res;
    res.eigenvalues = general_eigenvalues(poly.companion());
    res.stable = res.eigenvalues.cwiseAbs().maxCoeff() < 1.0 - 1e-12;
    return res;
}

PosRealResult positive_real_check(const MatrixPolynomial& A, const MatrixPolynomial& B,
                                  int grid) {
    if (!is_schur(A).stable)
        throw Error(ErrorCode::unstable_A, "positive-real check needs a Schur-stable A");
    return detail::hermitian_min_on_grid(
        [&](Complex z) -> CMatrix {
            return 0.5 * A.eval(z).partialPivLu().solve(B.eval(z));
        },
        grid);
}

std::pair<Matrix, Matrix> build_S_M(const MatrixPolynomial& poly) {
    const StructureSpec& spec = poly.spec();
    if (!spec.equal_indices())
        throw Error(ErrorCode::unequal_indices,
                    "stacked coefficient matrices need equal observability indices");
    const int ell = spec.ell, n = spec.n;

    std::vector<Matrix> blocks(n + 1);
    blocks[0] = Matrix::Identity(ell, ell);
    for (int k = 1; k <= n; ++k) blocks[k] = poly.coefficient_block(k);

    Matrix S = Matrix::Zero((n + 1) * ell, (n + 1) * ell);
    Matrix M((n + 1) * ell, ell);
    for (int i = 0; i <= n; ++i) {
        for (int j = i; j <= n; ++j) S.block(i * ell, j * ell, ell, ell) = blocks[j - i];
        M.middleRows(i * ell, ell) = blocks[i].transpose();
    }
    return {S, M};
}

double spectral_identity_residual(const MatrixPolynomial& A, const MatrixPolynomial& B,
                                  const MatrixPolynomial& Sigma, const Matrix& R,
                                  int grid) {
    Matrix RR = R * R.transpose();
    double worst = 0.0;
    for (int q = 0; q < grid; ++q) {
        double theta = 2.0 * M_PI * q / grid;
        Complex z(std::cos(theta), std::sin(theta));
        Complex zi = 1.0 / z;
        CMatrix lhs = A.eval(z) * B.eval(zi).transpose() + B.eval(z) * A.eval(zi).transpose();
        CMatrix rhs = 2.0 * Sigma.eval(z) * RR.cast<Complex>() * Sigma.eval(zi).transpose();
        double denom = 1.0 + rhs.norm();
        worst = std::max(worst, (lhs - rhs).norm() / denom);
    }
    return worst;
}

Matrix coeff_from_blocks(const StructureSpec& spec, const std::vector<Matrix>& blocks) {
    if (!spec.equal_indices())
        throw Error(ErrorCode::unequal_indices, "block assembly needs equal indices");
    if (static_cast<int>(blocks.size()) != spec.n)
        throw Error(ErrorCode::invalid_input, "need n coefficient blocks");
    Matrix coeff(spec.n * spec.ell, spec.ell);
    for (int i = 0; i < spec.ell; ++i)
        for (int k = 1; k <= spec.n; ++k) coeff.row(i * spec.n + k - 1) = blocks[k - 1].row(i);
    return coeff;
}

}  // namespace cee
