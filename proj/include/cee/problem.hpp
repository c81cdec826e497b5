#pragma once

#include <utility>
#include <vector>

#include "cee/numeric.hpp"

namespace cee {

/// A multivariable analytic interpolation problem on the open unit disc.
///
/// values[j][k] is the ell x ell matrix W_jk prescribing the k-th scaled
/// derivative F^(k)(z_j)/k! of the interpolant at node z_j. Convention:
/// z_0 = 0 and W_00 = I/2.
struct InterpolationProblem {
    int ell = 0;
    std::vector<double> nodes;
    std::vector<int> multiplicities;
    std::vector<std::vector<Matrix>> values;

    /// Number of nodes (m + 1 in the usual indexing).
    int num_nodes() const { return static_cast<int>(nodes.size()); }

    /// Degree parameter: sum of multiplicities minus one.
    int n() const;

    /// Throws invalid_input unless all structural invariants hold:
    /// z_0 = 0, nodes distinct with |z_j| < 1, W_00 = I/2 within 1e-12,
    /// complete ell x ell value set for every (j, k).
    void validate() const;
};

/// Everything derived from the raw data that the solver pipeline consumes.
struct ProblemMatrices {
    Matrix Z;     ///< (n+1) x (n+1) block-diagonal Jordan-type node matrix
    Vector e;     ///< n+1 vector of leading-entry selectors
    Matrix W;     ///< ell(n+1) square block-lower-triangular value matrix
    Matrix S;     ///< solution of S = Z S Z' + e e'
    Matrix T;     ///< (W - I/2)(W + I/2)^{-1}
    Matrix That;  ///< T (e (x) I_ell), the stacked first block column of T
};

Matrix build_Z(const InterpolationProblem& problem);
Vector build_e(const InterpolationProblem& problem);
Matrix build_W(const InterpolationProblem& problem);

/// Unique solution of S = Z S Z' + e e'; requires spectral_radius(Z) < 1.
/// Throws non_convergent if the residual exceeds 1e-12 or S is not
/// positive definite.
Matrix solve_S(const Matrix& Z, const Vector& e);

struct PickResult {
    bool feasible = false;
    double min_eig = 0.0;
};

/// Smallest eigenvalue of W (S (x) I) + (S (x) I) W'. Feasible iff it
/// exceeds 1e-10 times the max-norm of the Pick matrix.
PickResult pick_check(const Matrix& W, const Matrix& S, int ell);

/// T = (W - I/2)(W + I/2)^{-1} together with That = T (e (x) I).
/// Throws singular_normalization if W + I/2 has condition above 1e12.
std::pair<Matrix, Matrix> build_T_That(const Matrix& W, const Vector& e, int ell);

/// Deformed value matrix W(lambda) = (I - lambda T)^{-1} - I/2, which
/// interpolates between I/2 (lambda = 0) and W (lambda = 1).
Matrix deform_W(const Matrix& T, double lambda);

ProblemMatrices derive_matrices(const InterpolationProblem& problem);

}  // namespace cee
