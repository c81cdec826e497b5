#pragma once

#include <utility>
#include <vector>

#include "cee/matpoly.hpp"
#include "cee/problem.hpp"
#include "cee/structure.hpp"

namespace cee {

/// Everything the continuation solver needs: canonical structure, the
/// interpolation operators u / U, and the Schur-stable prior Sigma with
/// Gamma = J - Sigma H.
struct CeeInput {
    StructureSpec spec;
    CanonicalMatrices canonical;
    InterpolationOperators ops;
    MatrixPolynomial Sigma;
    Matrix Gamma;
};

/// Builds a solver input from an interpolation problem and a prior.
/// Throws unstable_sigma for a non-Schur prior and singular_L when the
/// operator construction degenerates, which is how unequal observability
/// indices in the prior announce themselves.
CeeInput make_cee_input(const InterpolationProblem& problem, const ProblemMatrices& derived,
                        const MatrixPolynomial& Sigma);

struct SolverOptions {
    double newton_tol = 1e-12;
    int max_newton = 20;
    double initial_step = 0.05;
    double min_step = 1e-6;
    int max_steps = 500;
    double rank_tol = 1e-6;     ///< eigenvalues below rank_tol * lambda_max count as zero
    int grid = 512;             ///< unit-circle grid for certification checks
};

struct ContinuationTrace {
    std::vector<double> lambdas;
    std::vector<double> step_sizes;
    std::vector<int> newton_iters;
    std::vector<double> residual_norms;
};

struct CeeSolution {
    Matrix P;             ///< n*ell square, symmetric PSD
    Matrix p;             ///< P H'
    MatrixPolynomial A;
    MatrixPolynomial B;
    MatrixPolynomial Sigma;
    Matrix R;             ///< (I - H P H')^{1/2}
    Matrix G;
    Matrix K;             ///< (G - F P H')(R')^{-1} with F = J - A H
    int rank_P = 0;
    ContinuationTrace trace;
};

/// Residual of the reduced coefficient system at (p, lambda): the first
/// n*ell rows of S(A)M(B) + S(B)M(A) - 2 S(Sigma)(I (x) (I - H p)) M(Sigma)
/// with A, B assembled from (p, lambda). Zero at (0, 0).
Matrix homotopy_residual(const Matrix& p, double lambda, const CeeInput& input);

/// Exact directional derivative of the residual in a coefficient
/// direction dp (the bilinear terms are differentiated term by term).
Matrix homotopy_differential(const Matrix& p, double lambda, const CeeInput& input,
                             const Matrix& dp);

/// Partial derivative of the residual with respect to lambda at fixed p.
Matrix homotopy_dlambda(const Matrix& p, double lambda, const CeeInput& input);

/// Jacobian of the column-stacked residual with respect to the
/// column-stacked p; assembled column by column from the differential.
Matrix homotopy_jacobian(const Matrix& p, double lambda, const CeeInput& input);

/// Tracks the solution branch of the residual system from (p, lambda) =
/// (0, 0) to lambda = 1 with an Euler predictor and Newton corrector.
std::pair<Matrix, ContinuationTrace> continue_path(const CeeInput& input,
                                                   const SolverOptions& options = {});

/// Recovers the full solution from the terminal p: P from the Lyapunov
/// equation, then A, B, R, G, K and the numerical rank of P.
CeeSolution assemble_solution(const Matrix& p_final, const CeeInput& input,
                              const SolverOptions& options = {});

/// Max-norm residual of the Covariance Extension Equation
/// P - Gamma (P - P H' H P) Gamma' - (u + U(Sigma + Gamma P H'))(...)'.
double cee_residual(const Matrix& P, const CeeInput& input);

/// End-to-end convenience: derive, check feasibility, build operators,
/// continue, assemble. Throws infeasible when the Pick test fails.
CeeSolution solve_problem(const InterpolationProblem& problem, const MatrixPolynomial& Sigma,
                          const SolverOptions& options = {});

}  // namespace cee
