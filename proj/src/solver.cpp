#include "cee/solver.hpp"

#include <cmath>

namespace cee {

namespace {

// Reversed-coefficient blocks (X_0 = I or 0, X_k = N_k X) of a raw
// coefficient matrix.
std::vector<Matrix> blocks_of(const CanonicalMatrices& cm, const Matrix& coeff,
                              bool unit_leading) {
    const int ell = cm.spec.ell, n = cm.spec.n;
    std::vector<Matrix> b(n + 1);
    b[0] = unit_leading ? Matrix(Matrix::Identity(ell, ell)) : Matrix(Matrix::Zero(ell, ell));
    for (int k = 1; k <= n; ++k) b[k] = cm.N[k - 1] * coeff;
    return b;
}

Matrix smat(const std::vector<Matrix>& b, int ell, int n) {
    Matrix S = Matrix::Zero((n + 1) * ell, (n + 1) * ell);
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) S.block(i * ell, j * ell, ell, ell) = b[j - i];
    return S;
}

Matrix mmat(const std::vector<Matrix>& b, int ell, int n) {
    Matrix M((n + 1) * ell, ell);
    for (int i = 0; i <= n; ++i) M.middleRows(i * ell, ell) = b[i].transpose();
    return M;
}

Matrix block_diag_repeat(const Matrix& X, int copies) {
    Matrix D = Matrix::Zero(X.rows() * copies, X.cols() * copies);
    for (int i = 0; i < copies; ++i)
        D.block(i * X.rows(), i * X.cols(), X.rows(), X.cols()) = X;
    return D;
}

struct HomotopyState {
    Matrix A, B;  // coefficient matrices at (p, lambda)
    Matrix q;     // u + U(Gamma p + Sigma)
    Matrix X;     // Gamma p + Sigma
};

HomotopyState eval_state(const Matrix& p, double lambda, const CeeInput& in) {
    HomotopyState st;
    st.X = in.Gamma * p + in.Sigma.coeff();
    st.q = in.ops.u + in.ops.apply_U(st.X);
    st.A = st.X - lambda * st.q;
    st.B = st.X + lambda * st.q;
    return st;
}

}  // namespace

CeeInput make_cee_input(const InterpolationProblem& problem, const ProblemMatrices& derived,
                        const MatrixPolynomial& Sigma) {
    const StructureSpec& spec = Sigma.spec();
    spec.validate();
    if (spec.ell != problem.ell)
        throw Error(ErrorCode::invalid_input, "prior dimension does not match the problem");
    if (spec.n != problem.n())
        throw Error(ErrorCode::invalid_input,
                    "prior degree does not match the interpolation data");

    CeeInput input{spec, build_canonical(spec), {}, Sigma, {}};
    input.ops = build_u_U(derived.Z, derived.e, derived.That, spec, input.canonical);
    if (!spec.equal_indices())
        throw Error(ErrorCode::unequal_indices,
                    "the solver requires all observability indices equal to n");
    if (!is_schur(Sigma).stable)
        throw Error(ErrorCode::unstable_sigma, "prior polynomial must be Schur stable");
    input.Gamma = build_gamma(input.canonical, Sigma.coeff());
    return input;
}

Matrix homotopy_residual(const Matrix& p, double lambda, const CeeInput& in) {
    const int ell = in.spec.ell, n = in.spec.n;
    HomotopyState st = eval_state(p, lambda, in);

    auto bA = blocks_of(in.canonical, st.A, true);
    auto bB = blocks_of(in.canonical, st.B, true);
    auto bS = blocks_of(in.canonical, in.Sigma.coeff(), true);

    Matrix SA = smat(bA, ell, n), MB = mmat(bB, ell, n);
    Matrix SB = smat(bB, ell, n), MA = mmat(bA, ell, n);
    Matrix SS = smat(bS, ell, n), MS = mmat(bS, ell, n);

    Matrix mid = block_diag_repeat(Matrix::Identity(ell, ell) - in.canonical.H * p, n + 1);
    Matrix full = SA * MB + SB * MA - 2.0 * SS * mid * MS;
    return full.topRows(n * ell);
}

Matrix homotopy_differential(const Matrix& p, double lambda, const CeeInput& in,
                             const Matrix& dp) {
    const int ell = in.spec.ell, n = in.spec.n;
    HomotopyState st = eval_state(p, lambda, in);

    Matrix dX = in.Gamma * dp;
    Matrix dq = in.ops.apply_U(dX);
    Matrix dA = dX - lambda * dq;
    Matrix dB = dX + lambda * dq;

    auto bA = blocks_of(in.canonical, st.A, true);
    auto bB = blocks_of(in.canonical, st.B, true);
    auto bdA = blocks_of(in.canonical, dA, false);
    auto bdB = blocks_of(in.canonical, dB, false);
    auto bS = blocks_of(in.canonical, in.Sigma.coeff(), true);

    Matrix full = smat(bdA, ell, n) * mmat(bB, ell, n) + smat(bA, ell, n) * mmat(bdB, ell, n) +
                  smat(bdB, ell, n) * mmat(bA, ell, n) + smat(bB, ell, n) * mmat(bdA, ell, n) +
                  2.0 * smat(bS, ell, n) *
                      block_diag_repeat(in.canonical.H * dp, n + 1) * mmat(bS, ell, n);
    return full.topRows(n * ell);
}

Matrix homotopy_dlambda(const Matrix& p, double lambda, const CeeInput& in) {
    const int ell = in.spec.ell, n = in.spec.n;
    HomotopyState st = eval_state(p, lambda, in);

    auto bA = blocks_of(in.canonical, st.A, true);
    auto bB = blocks_of(in.canonical, st.B, true);
    auto bq = blocks_of(in.canonical, st.q, false);

    // dA/dlambda = -q, dB/dlambda = +q at fixed p.
    Matrix full = smat(bq, ell, n) * (mmat(bA, ell, n) - mmat(bB, ell, n)) +
                  (smat(bA, ell, n) - smat(bB, ell, n)) * mmat(bq, ell, n);
    return full.topRows(n * ell);
}

Matrix homotopy_jacobian(const Matrix& p, double lambda, const CeeInput& in) {
    const int dim = in.spec.n * in.spec.ell;
    const int cols = in.spec.ell;
    Matrix jac(dim * cols, dim * cols);
    Matrix E = Matrix::Zero(dim, cols);
    for (int s = 0; s < cols; ++s)
        for (int r = 0; r < dim; ++r) {
            E(r, s) = 1.0;
            jac.col(s * dim + r) = vec(homotopy_differential(p, lambda, in, E));
            E(r, s) = 0.0;
        }
    return jac;
}

std::pair<Matrix, ContinuationTrace> continue_path(const CeeInput& in,
                                                   const SolverOptions& opts) {
    const int dim = in.spec.n * in.spec.ell;
    const int ell = in.spec.ell;

    Matrix p = Matrix::Zero(dim, ell);
    double lambda = 0.0;
    double step = opts.initial_step;
    int fast_successes = 0;

    ContinuationTrace trace;
    trace.lambdas.push_back(0.0);
    trace.step_sizes.push_back(0.0);
    trace.newton_iters.push_back(0);
    trace.residual_norms.push_back(max_abs(homotopy_residual(p, 0.0, in)));

    auto corrector_matrix = [&](const Matrix& pc, double lc) {
        Matrix jac = homotopy_jacobian(pc, lc, in);
        if (cond(jac) > 1e14)
            throw Error(ErrorCode::jacobian_singular, "corrector matrix is numerically singular");
        return jac;
    };

    int steps = 0;
    while (lambda < 1.0) {
        if (++steps > opts.max_steps)
            throw Error(ErrorCode::step_collapse,
                        "continuation exceeded " + std::to_string(opts.max_steps) + " steps");

        double dl = std::min(step, 1.0 - lambda);

        // Euler predictor along the Davidenko flow.
        Matrix jac = corrector_matrix(p, lambda);
        Vector dpdl = jac.partialPivLu().solve(-vec(homotopy_dlambda(p, lambda, in)));
        Matrix p_try = p + unvec(dpdl, dim, ell) * dl;
        double lambda_try = lambda + dl;

        // Newton corrector at the advanced parameter.
        bool converged = false;
        int iters = 0;
        double resid = 0.0;
        for (; iters <= opts.max_newton; ++iters) {
            Matrix h = homotopy_residual(p_try, lambda_try, in);
            resid = max_abs(h);
            if (resid <= opts.newton_tol) {
                converged = true;
                break;
            }
            if (iters == opts.max_newton) break;
            Matrix jc = corrector_matrix(p_try, lambda_try);
            Vector delta = jc.partialPivLu().solve(-vec(h));
            p_try += unvec(delta, dim, ell);
        }

        if (!converged) {
            step *= 0.5;
            fast_successes = 0;
            if (step < opts.min_step)
                throw Error(ErrorCode::step_collapse,
                            "continuation step collapsed below minimum at lambda = " +
                                std::to_string(lambda));
            continue;
        }

        p = p_try;
        lambda = lambda_try;
        trace.lambdas.push_back(lambda);
        trace.step_sizes.push_back(dl);
        trace.newton_iters.push_back(iters);
        trace.residual_norms.push_back(resid);

        if (iters <= 3) {
            if (++fast_successes == 3) {
                step *= 2.0;
                fast_successes = 0;
            }
        } else {
            fast_successes = 0;
        }
    }
    return {p, trace};
}

CeeSolution assemble_solution(const Matrix& p_final, const CeeInput& in,
                              const SolverOptions& opts) {
    const int ell = in.spec.ell;
    const Matrix& H = in.canonical.H;

    Matrix q = in.ops.u + in.ops.apply_U(in.Gamma * p_final + in.Sigma.coeff());
    Matrix rhs = -in.Gamma * p_final * p_final.transpose() * in.Gamma.transpose() +
                 q * q.transpose();
    Matrix P = solve_discrete_lyapunov(in.Gamma, rhs, 1e-9);

    double drift = max_abs(P * H.transpose() - p_final);
    if (drift > 1e-6)
        throw Error(ErrorCode::inconsistent_P,
                    "P H' deviates from the tracked solution by " + std::to_string(drift));

    Vector lamP = symmetric_eigenvalues(P);
    if (lamP(0) < -1e-9)
        throw Error(ErrorCode::not_psd, "P has eigenvalue " + std::to_string(lamP(0)));

    Matrix IHPH = Matrix::Identity(ell, ell) - H * P * H.transpose();
    if (symmetric_eigenvalues(IHPH)(0) < 1e-12)
        throw Error(ErrorCode::saturated, "I - H P H' is singular; interpolant saturates");

    CeeSolution sol{.P = P,
                    .p = P * H.transpose(),
                    .A = in.Sigma,
                    .B = in.Sigma,
                    .Sigma = in.Sigma,
                    .R = sqrtm_psd(IHPH),
                    .G = Matrix(),
                    .K = Matrix(),
                    .rank_P = 0,
                    .trace = {}};

    Matrix X = in.Gamma * sol.p + in.Sigma.coeff();
    Matrix UX = in.ops.apply_U(X);
    sol.A = MatrixPolynomial(in.spec, X - UX - in.ops.u, PolyRole::A);
    sol.B = MatrixPolynomial(in.spec, X + UX + in.ops.u, PolyRole::B);
    sol.G = in.ops.u + UX;

    Matrix F = in.canonical.J - sol.A.coeff() * H;
    sol.K = (sol.G - F * P * H.transpose()) *
            sol.R.transpose().partialPivLu().solve(Matrix::Identity(ell, ell));

    double lam_max = lamP(lamP.size() - 1);
    for (Eigen::Index i = 0; i < lamP.size(); ++i)
        if (lamP(i) > opts.rank_tol * std::max(lam_max, 0.0)) ++sol.rank_P;
    if (lam_max <= 0.0) sol.rank_P = 0;

    return sol;
}

double cee_residual(const Matrix& P, const CeeInput& in) {
    const Matrix& H = in.canonical.H;
    Matrix q = in.ops.u + in.ops.apply_U(in.Sigma.coeff() + in.Gamma * P * H.transpose());
    Matrix resid = P -
                   in.Gamma * (P - P * H.transpose() * H * P) * in.Gamma.transpose() -
                   q * q.transpose();
    return max_abs(resid);
}

CeeSolution solve_problem(const InterpolationProblem& problem, const MatrixPolynomial& Sigma,
                          const SolverOptions& options) {
    ProblemMatrices derived = derive_matrices(problem);
    PickResult pick = pick_check(derived.W, derived.S, problem.ell);
    if (!pick.feasible)
        throw Error(ErrorCode::infeasible,
                    "Pick matrix not positive definite (min eigenvalue " +
                        std::to_string(pick.min_eig) + ")");
    CeeInput input = make_cee_input(problem, derived, Sigma);
    auto [p_final, trace] = continue_path(input, options);
    CeeSolution sol = assemble_solution(p_final, input, options);
    sol.trace = std::move(trace);
    return sol;
}

}  // namespace cee
