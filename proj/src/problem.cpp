#include "cee/problem.hpp"

#include <cmath>
#include <numeric>

namespace cee {

int InterpolationProblem::n() const {
    return std::accumulate(multiplicities.begin(), multiplicities.end(), 0) - 1;
}

void InterpolationProblem::validate() const {
    if (ell < 1) throw Error(ErrorCode::invalid_input, "ell must be positive");
    if (nodes.empty()) throw Error(ErrorCode::invalid_input, "no interpolation nodes");
    if (nodes.size() != multiplicities.size() || nodes.size() != values.size())
        throw Error(ErrorCode::invalid_input, "nodes/multiplicities/values size mismatch");
    if (nodes[0] != 0.0)
        throw Error(ErrorCode::invalid_input, "first node must be exactly 0");
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (std::abs(nodes[j]) >= 1.0)
            throw Error(ErrorCode::invalid_input,
                        "node " + std::to_string(nodes[j]) + " not inside the open unit disc");
        for (std::size_t i = 0; i < j; ++i)
            if (nodes[i] == nodes[j])
                throw Error(ErrorCode::invalid_input, "nodes must be pairwise distinct");
        if (multiplicities[j] < 1)
            throw Error(ErrorCode::invalid_input, "multiplicities must be positive");
        if (static_cast<int>(values[j].size()) != multiplicities[j])
            throw Error(ErrorCode::invalid_input,
                        "node " + std::to_string(j) + " needs " +
                            std::to_string(multiplicities[j]) + " value matrices");
        for (const Matrix& w : values[j])
            if (w.rows() != ell || w.cols() != ell)
                throw Error(ErrorCode::invalid_input, "value matrices must be ell x ell");
    }
    Matrix w00_err = values[0][0] - 0.5 * Matrix::Identity(ell, ell);
    if (max_abs(w00_err) > 1e-12)
        throw Error(ErrorCode::invalid_input, "value at the origin must be I/2");
}

Matrix build_Z(const InterpolationProblem& problem) {
    const int dim = problem.n() + 1;
    Matrix Z = Matrix::Zero(dim, dim);
    int off = 0;
    for (std::size_t j = 0; j < problem.nodes.size(); ++j) {
        const int nj = problem.multiplicities[j];
        for (int r = 0; r < nj; ++r) {
            Z(off + r, off + r) = problem.nodes[j];
            if (r > 0) Z(off + r, off + r - 1) = 1.0;
        }
        off += nj;
    }
    return Z;
}

Vector build_e(const InterpolationProblem& problem) {
    Vector e = Vector::Zero(problem.n() + 1);
    int off = 0;
    for (int nj : problem.multiplicities) {
        e(off) = 1.0;
        off += nj;
    }
    return e;
}

Matrix build_W(const InterpolationProblem& problem) {
    const int ell = problem.ell;
    const int dim = ell * (problem.n() + 1);
    Matrix W = Matrix::Zero(dim, dim);
    int off = 0;
    for (std::size_t j = 0; j < problem.nodes.size(); ++j) {
        const int nj = problem.multiplicities[j];
        for (int r = 0; r < nj; ++r)
            for (int c = 0; c <= r; ++c)
                W.block((off + r) * ell, (off + c) * ell, ell, ell) = problem.values[j][r - c];
        off += nj;
    }
    return W;
}

Matrix solve_S(const Matrix& Z, const Vector& e) {
    if (spectral_radius(Z) >= 1.0)
        throw Error(ErrorCode::invalid_input, "node matrix must have spectral radius < 1");
    Matrix S = solve_discrete_lyapunov(Z, e * e.transpose());
    Vector lam = symmetric_eigenvalues(S);
    if (lam(0) <= 1e-14 * std::max(1.0, lam(lam.size() - 1)))
        throw Error(ErrorCode::non_convergent, "S is not positive definite");
    return S;
}

PickResult pick_check(const Matrix& W, const Matrix& S, int ell) {
    Matrix E = kron(S, Matrix::Identity(ell, ell));
    Matrix pick = W * E + E * W.transpose();
    PickResult res;
    res.min_eig = symmetric_eigenvalues(pick)(0);
    res.feasible = res.min_eig > 1e-10 * max_abs(pick);
    return res;
}

std::pair<Matrix, Matrix> build_T_That(const Matrix& W, const Vector& e, int ell) {
    const Eigen::Index dim = W.rows();
    Matrix denom = W + 0.5 * Matrix::Identity(dim, dim);
    if (cond(denom) > 1e12)
        throw Error(ErrorCode::singular_normalization, "W + I/2 is numerically singular");
    // T (W + I/2) = W - I/2, solved via the transposed system.
    Matrix T = denom.transpose()
                   .partialPivLu()
                   .solve((W - 0.5 * Matrix::Identity(dim, dim)).transpose())
                   .transpose();
    Matrix That = T * kron(e, Matrix::Identity(ell, ell));
    return {T, That};
}

Matrix deform_W(const Matrix& T, double lambda) {
    if (lambda < 0.0 || lambda > 1.0)
        throw Error(ErrorCode::invalid_input, "deformation parameter must lie in [0, 1]");
    const Eigen::Index dim = T.rows();
    Matrix lhs = Matrix::Identity(dim, dim) - lambda * T;
    Eigen::PartialPivLU<Matrix> lu(lhs);
    if (lu.rcond() < 1e-12)
        throw Error(ErrorCode::path_singular, "I - lambda T is numerically singular");
    return lu.solve(Matrix::Identity(dim, dim)) - 0.5 * Matrix::Identity(dim, dim);
}

ProblemMatrices derive_matrices(const InterpolationProblem& problem) {
    problem.validate();
    ProblemMatrices pm;
    pm.Z = build_Z(problem);
    pm.e = build_e(problem);
    pm.W = build_W(problem);
    pm.S = solve_S(pm.Z, pm.e);
    std::tie(pm.T, pm.That) = build_T_That(pm.W, pm.e, problem.ell);
    return pm;
}

}  // namespace cee
