#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cee/solver.hpp"

namespace cee {

struct CertificationReport {
    double interp_residual = 0.0;
    double spectral_residual = 0.0;
    double pr_min_eig = 0.0;
    bool stable_A = false;
    int rank_P = 0;
    bool pass = false;
};

/// Scaled derivative values F^(k)(z_j)/k! of F(z) = I/2 + z H (I - z F)^{-1} G
/// at the given real nodes, computed by the exact resolvent recursion
/// F^(k)/k! = H X^2 (F X)^{k-1} G with X = (I - z F)^{-1}.
std::vector<std::vector<Matrix>> taylor_values(const Matrix& F, const Matrix& G,
                                               const Matrix& H,
                                               const std::vector<double>& nodes,
                                               const std::vector<int>& multiplicities);

/// Max over (j, k) of the deviation of the interpolant determined by (A, B)
/// from the prescribed values. Throws unstable_A when A is not Schur.
double interpolation_residual(const MatrixPolynomial& A, const MatrixPolynomial& B,
                              const InterpolationProblem& problem);

/// Same residual through the matrix-function identity F(Z (x) I) = W;
/// an independent route used to cross-check the derivative-based one.
double interpolation_residual_matrixfn(const MatrixPolynomial& A, const MatrixPolynomial& B,
                                       const InterpolationProblem& problem);

/// Runs all certification checks on a solution. Pass thresholds:
/// interpolation and spectral residuals at 1e-8, positive-real minimum
/// eigenvalue at -1e-10, A Schur stable.
CertificationReport certify(const CeeSolution& solution, const InterpolationProblem& problem,
                            int grid = 512);

std::string report_to_text(const CertificationReport& report);

/// Scalar-case construction of (u, U) through the similarity
/// [u U] = [0 I] [e V]^{-1} (W + 1/2)^{-1} (W - 1/2) [e V].
/// Requires ell = 1; throws singular_basis when [e V] is ill conditioned.
std::pair<Vector, Matrix> scalar_uU(const InterpolationProblem& problem);

/// Max deviation between the scalar construction and the general-path
/// operators.
double scalar_uU_crosscheck(const InterpolationProblem& problem,
                            const InterpolationOperators& ops);

/// Recomputes (a, b) from the solution's P by the scalar recovery formulas
/// and returns the max deviation from the solver's coefficients.
double scalar_recovery_crosscheck(const CeeSolution& solution,
                                  const InterpolationProblem& problem);

/// A synthetic instance with known solution: Schur-stable A and Sigma are
/// drawn at random, (B, R R') solved from the coefficient identity, and the
/// interpolation data generated from the resulting interpolant. `pad`
/// common linear factors lower the McMillan degree below n*ell while
/// keeping the frame size, for exercising the degree = rank(P) law.
struct GroundTruth {
    StructureSpec spec;
    Matrix A_coeff;
    Matrix B_coeff;
    Matrix Sigma_coeff;
    Matrix R;
    InterpolationProblem problem;
    int degree = 0;
};

GroundTruth roundtrip_oracle(const StructureSpec& spec, const std::vector<double>& nodes,
                             const std::vector<int>& multiplicities, std::uint64_t seed,
                             int pad = 0);

/// Overload that also draws the node pattern from the seed.
GroundTruth roundtrip_oracle(const StructureSpec& spec, std::uint64_t seed, int pad = 0);

}  // namespace cee
