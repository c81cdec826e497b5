#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace cee {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

enum class ErrorCode {
    invalid_input,
    non_convergent,
    singular_normalization,
    path_singular,
    singular_L,
    unstable_A,
    unstable_sigma,
    unequal_indices,
    infeasible,
    step_collapse,
    jacobian_singular,
    inconsistent_P,
    not_psd,
    saturated,
    unstable_factor,
    insufficient_data,
    singular_basis,
    rejection_exhausted,
    degenerate_data,
    io_error,
};

const char* to_string(ErrorCode code);

/// Library error type; every failure mode carries a code so callers can map
/// it to an exit class without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline Vector vec(const Matrix& m) {
    return Eigen::Map<const Vector>(m.data(), m.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

Matrix kron(const Matrix& a, const Matrix& b);

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// 2-norm condition number from a full SVD. Intended for the small dense
/// matrices this library works with.
double cond(const Matrix& m);

double spectral_radius(const Matrix& m);

CVector general_eigenvalues(const Matrix& m);

/// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& m);

/// Solves X = A X A' + Q by the column-stacked linear system
/// (I - A (x) A) vec(X) = vec(Q). Requires spectral_radius(A) < 1 and
/// dim(A) <= 200; checks the residual afterwards.
Matrix solve_discrete_lyapunov(const Matrix& A, const Matrix& Q, double residual_tol = 1e-12);

/// Symmetric PSD square root via eigendecomposition. Eigenvalues in
/// [-clip, 0) are clipped to zero; anything below -clip throws not_psd.
Matrix sqrtm_psd(const Matrix& m, double clip = 1e-12);

/// Deterministic RNG with a self-contained normal sampler so that seeded
/// streams do not depend on the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    double normal();

    Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace cee
