#pragma once

#include <cstdint>
#include <vector>

#include "cee/solver.hpp"
#include "cee/verify.hpp"

namespace cee {

/// State-space form of a spectral factor: y_t = H x_t + R w_t,
/// x_{t+1} = F x_t + K w_t with unit-variance white noise w.
struct StateSpaceFactor {
    Matrix F, K, H, R;
};

/// Realization of V(z) = A(z)^{-1} Sigma(z) R: F = J - A H, K = (Sigma - A) R.
/// Throws unstable_factor when F is not Schur stable.
StateSpaceFactor realize_factor(const SpectralFactor& factor);

struct TimeSeries {
    std::vector<Vector> samples;  ///< y_0 .. y_N
    std::uint64_t seed = 0;
};

/// Simulates N+1 output samples from zero initial state, driven by seeded
/// Gaussian noise. Deterministic for a fixed seed.
TimeSeries simulate(const StateSpaceFactor& factor, long N, std::uint64_t seed);

struct CovarianceSequence {
    enum class Source { estimated, exact };
    int ell = 0;
    std::vector<Matrix> lags;  ///< C_0 .. C_K
    Source source = Source::estimated;
};

/// Sample covariances C_k = 1/(N-k+1) sum_{t=k}^{N} y_t y_{t-k}'.
CovarianceSequence estimate_covariances(const TimeSeries& series, int max_lag);

/// Exact covariances from the state Lyapunov equation
/// Pbar = F Pbar F' + K K', C_0 = H Pbar H' + R R', C_k = H F^{k-1} Gbar.
CovarianceSequence exact_covariances(const StateSpaceFactor& factor, int max_lag);

/// The covariance-extension problem posed from lags C_0..C_n after the
/// congruence normalization C_k -> L^{-1} C_k L^{-T} with C_0 = L L', which
/// makes the origin value I/2. `scale` stores L for mapping solutions back.
struct ScaledProblem {
    InterpolationProblem problem;
    Matrix scale;
};

ScaledProblem covariances_to_problem(const CovarianceSequence& covs, int n);

/// Transforms a prior coefficient matrix into the normalized coordinates:
/// Sigma_k -> L^{-1} Sigma_k L blockwise.
Matrix scale_prior(const StructureSpec& spec, const Matrix& sigma_coeff, const Matrix& scale);

struct ReduceResult {
    CeeSolution solution;      ///< solution of the re-posed problem (normalized coordinates)
    ScaledProblem posed;
    Vector P_eigs_before;      ///< spectrum of the input solution's P
    Vector P_eigs_after;
};

/// Re-poses the covariance-extension problem with lags C_0..C_{new_n} and
/// the reduced prior (physical coordinates), re-solves, and reports both
/// P spectra.
ReduceResult reduce_model(const CeeSolution& solution, const CovarianceSequence& covs,
                          int new_n, const MatrixPolynomial& new_sigma,
                          const SolverOptions& options = {});

struct SingularValueRow {
    double theta = 0.0;
    Vector values;  ///< descending singular values of V(e^{i theta})
};

/// Singular values of scale * A(z)^{-1} Sigma(z) R over a uniform grid.
std::vector<SingularValueRow> singular_value_grid(const SpectralFactor& factor, int points,
                                                  const Matrix& scale);
std::vector<SingularValueRow> singular_value_grid(const SpectralFactor& factor, int points);

/// Singular values of H (zI - F)^{-1} K + R over a uniform grid.
std::vector<SingularValueRow> singular_value_grid(const StateSpaceFactor& factor, int points);

std::string singular_values_to_csv(const std::vector<SingularValueRow>& rows);

}  // namespace cee
