#pragma once

#include <vector>

#include "cee/numeric.hpp"

namespace cee {

/// Observer-canonical structure: matrix dimension ell, degree parameter n,
/// and observability indices t_1..t_ell summing to n*ell.
struct StructureSpec {
    int ell = 0;
    int n = 0;
    std::vector<int> indices;

    int t() const;  ///< largest observability index
    bool equal_indices() const;
    void validate() const;
};

/// The structural matrices determined by a StructureSpec alone.
///
/// J is the block shift, H the block selector with one 1 per row, and
/// N[k-1] the k-th coefficient selector of D(z) Pi(1/z) (a zero row where
/// the block is shorter than k).
struct CanonicalMatrices {
    StructureSpec spec;
    Matrix J;                ///< n*ell square
    Matrix H;                ///< ell x n*ell
    std::vector<Matrix> N;   ///< N_1..N_t, each ell x n*ell
    Matrix N_stack;          ///< [N_1; ...; N_t], ell*t x n*ell
};

CanonicalMatrices build_canonical(const StructureSpec& spec);

/// Gamma = J - Sigma H for a prior coefficient matrix Sigma (n*ell x ell).
Matrix build_gamma(const CanonicalMatrices& canonical, const Matrix& sigma_coeff);

/// V = [ (Z e) (x) I, (Z^2 e) (x) I, ..., (Z^t e) (x) I ],  ell(n+1) x ell*t.
Matrix build_V(const Matrix& Z, const Vector& e, const StructureSpec& spec);

/// Splits V N = [0; L]. The top ell rows must vanish (z_0 = 0); L is the
/// square lower block. Throws singular_L when cond(L) > 1e12, which is the
/// numerical signature of unequal observability indices or a degenerate
/// node set.
struct LFactor {
    Matrix L;
    double condition = 0.0;
};
LFactor build_L(const Matrix& V, const CanonicalMatrices& canonical);

/// The interpolation-side operators entering the solver:
///   u    = (VN)^+ That
///   U(Q) = (VN)^+ (Z (x) N_1 Q + ... + Z^t (x) N_t Q) That
/// with (VN)^+ = [0 | L^{-1}]. Umat is the dense matrix of U acting on
/// column-stacked n*ell x ell arguments.
struct InterpolationOperators {
    Matrix L;
    double cond_L = 0.0;
    Matrix u;     ///< n*ell x ell
    Matrix Umat;  ///< (ell^2 n) square

    Matrix apply_U(const Matrix& Q) const {
        return unvec(Umat * vec(Q), Q.rows(), Q.cols());
    }
};

InterpolationOperators build_u_U(const Matrix& Z, const Vector& e, const Matrix& That,
                                 const StructureSpec& spec, const CanonicalMatrices& canonical);

}  // namespace cee
