#include "cee/verify.hpp"

#include <cmath>
#include <sstream>

namespace cee {

std::vector<std::vector<Matrix>> taylor_values(const Matrix& F, const Matrix& G,
                                               const Matrix& H,
                                               const std::vector<double>& nodes,
                                               const std::vector<int>& multiplicities) {
    const int ell = static_cast<int>(H.rows());
    const Eigen::Index dim = F.rows();
    std::vector<std::vector<Matrix>> out(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double z = nodes[j];
        Matrix X = (Matrix::Identity(dim, dim) - z * F).partialPivLu().solve(
            Matrix::Identity(dim, dim));
        out[j].reserve(multiplicities[j]);
        out[j].push_back(0.5 * Matrix::Identity(ell, ell) + z * H * X * G);
        Matrix M = X * X;
        for (int k = 1; k < multiplicities[j]; ++k) {
            out[j].push_back(H * M * G);
            M = M * F * X;
        }
    }
    return out;
}

namespace {

struct Realization {
    Matrix F, G, H;
    Matrix J;
};

Realization realize(const MatrixPolynomial& A, const MatrixPolynomial& B) {
    if (!is_schur(A).stable)
        throw Error(ErrorCode::unstable_A, "interpolant denominator is not Schur stable");
    CanonicalMatrices cm = build_canonical(A.spec());
    Realization r;
    r.J = cm.J;
    r.H = cm.H;
    r.F = cm.J - A.coeff() * cm.H;
    r.G = 0.5 * (B.coeff() - A.coeff());
    return r;
}

}  // namespace

double interpolation_residual(const MatrixPolynomial& A, const MatrixPolynomial& B,
                              const InterpolationProblem& problem) {
    Realization r = realize(A, B);
    auto vals = taylor_values(r.F, r.G, r.H, problem.nodes, problem.multiplicities);
    double worst = 0.0;
    for (std::size_t j = 0; j < vals.size(); ++j)
        for (std::size_t k = 0; k < vals[j].size(); ++k)
            worst = std::max(worst, max_abs(vals[j][k] - problem.values[j][k]));
    return worst;
}

double interpolation_residual_matrixfn(const MatrixPolynomial& A, const MatrixPolynomial& B,
                                       const InterpolationProblem& problem) {
    Realization r = realize(A, B);
    Matrix Z = build_Z(problem);
    Matrix W = build_W(problem);
    const Eigen::Index np1 = Z.rows();
    const Eigen::Index dim = r.F.rows();

    Matrix lhs = Matrix::Identity(np1 * dim, np1 * dim) - kron(Z, r.F);
    Matrix resolvent = lhs.partialPivLu().solve(
        kron(Matrix::Identity(np1, np1), r.G));
    Matrix Fbig = 0.5 * Matrix::Identity(W.rows(), W.cols()) +
                  kron(Z, r.H) * resolvent;
    return max_abs(Fbig - W);
}

CertificationReport certify(const CeeSolution& sol, const InterpolationProblem& problem,
                            int grid) {
    CertificationReport rep;
    rep.rank_P = sol.rank_P;
    rep.stable_A = is_schur(sol.A).stable;
    if (!rep.stable_A) {
        rep.interp_residual = std::numeric_limits<double>::infinity();
        rep.spectral_residual = std::numeric_limits<double>::infinity();
        rep.pr_min_eig = -std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.interp_residual = interpolation_residual(sol.A, sol.B, problem);
    rep.spectral_residual = spectral_identity_residual(sol.A, sol.B, sol.Sigma, sol.R, grid);
    rep.pr_min_eig = positive_real_check(sol.A, sol.B, grid).min_eig;
    rep.pass = rep.interp_residual <= 1e-8 && rep.spectral_residual <= 1e-8 &&
               rep.pr_min_eig >= -1e-10;
    return rep;
}

std::string report_to_text(const CertificationReport& rep) {
    std::ostringstream os;
    os.precision(12);
    os << "interp_residual: " << rep.interp_residual << "\n"
       << "spectral_residual: " << rep.spectral_residual << "\n"
       << "pr_min_eig: " << rep.pr_min_eig << "\n"
       << "stable_A: " << (rep.stable_A ? "true" : "false") << "\n"
       << "rank_P: " << rep.rank_P << "\n"
       << "pass: " << (rep.pass ? "true" : "false") << "\n";
    return os.str();
}

std::pair<Vector, Matrix> scalar_uU(const InterpolationProblem& problem) {
    if (problem.ell != 1)
        throw Error(ErrorCode::invalid_input, "scalar construction needs ell = 1");
    problem.validate();
    const int n = problem.n();

    Matrix Z = build_Z(problem);
    Vector e = build_e(problem);
    Matrix W = build_W(problem);

    Matrix basis(n + 1, n + 1);
    basis.col(0) = e;
    Vector zke = e;
    for (int k = 1; k <= n; ++k) {
        zke = Z * zke;
        basis.col(k) = zke;
    }
    if (cond(basis) > 1e12)
        throw Error(ErrorCode::singular_basis, "[e V] basis is numerically singular");

    Matrix I = Matrix::Identity(n + 1, n + 1);
    Matrix Tm = (W + 0.5 * I).partialPivLu().solve(W - 0.5 * I);
    Matrix M = basis.partialPivLu().solve(Tm * basis);

    Vector u = M.block(1, 0, n, 1);
    Matrix U = M.block(1, 1, n, n);
    return {u, U};
}

double scalar_uU_crosscheck(const InterpolationProblem& problem,
                            const InterpolationOperators& ops) {
    auto [u, U] = scalar_uU(problem);
    double du = max_abs(Matrix(u - ops.u));
    double dU = max_abs(Matrix(U - ops.Umat));
    return std::max(du, dU);
}

double scalar_recovery_crosscheck(const CeeSolution& sol,
                                  const InterpolationProblem& problem) {
    auto [u, U] = scalar_uU(problem);
    const int n = sol.Sigma.spec().n;
    CanonicalMatrices cm = build_canonical(sol.Sigma.spec());
    Matrix Gamma = build_gamma(cm, sol.Sigma.coeff());

    Vector x = Gamma * sol.P * cm.H.transpose() + sol.Sigma.coeff();
    Matrix I = Matrix::Identity(n, n);
    Vector a = (I - U) * x - u;
    Vector b = (I + U) * x + u;

    double da = max_abs(Matrix(a - sol.A.coeff()));
    double db = max_abs(Matrix(b - sol.B.coeff()));
    return std::max(da, db);
}

namespace {

// Affine least-squares solve of the reversed-coefficient identity
//   sum_k [A_k B_{k+i}' + B_k A_{k+i}' - 2 S_k Y S_{k+i}'] = 0, i = 0..n-1,
// with B_0 = I and B_n = 2 S_n Y - A_n eliminated, in the unknowns
// (B_1..B_{n-1}, Y symmetric). Returns false when the solve is inconsistent.
bool solve_numerator(const std::vector<Matrix>& Ab, const std::vector<Matrix>& Sb, int ell,
                     int n, std::vector<Matrix>& Bb, Matrix& Y) {
    const int nb = n - 1;
    const int ny = ell * (ell + 1) / 2;
    const int unknowns = nb * ell * ell + ny;

    auto resid = [&](const std::vector<Matrix>& B1, const Matrix& Yc) {
        std::vector<Matrix> B(n + 1);
        B[0] = Matrix::Identity(ell, ell);
        for (int k = 1; k < n; ++k) B[k] = B1[k - 1];
        B[n] = 2.0 * Sb[n] * Yc - Ab[n];
        Vector r(n * ell * ell);
        for (int i = 0; i < n; ++i) {
            Matrix row = Matrix::Zero(ell, ell);
            for (int k = 0; k + i <= n; ++k)
                row += Ab[k] * B[k + i].transpose() + B[k] * Ab[k + i].transpose() -
                       2.0 * Sb[k] * Yc * Sb[k + i].transpose();
            r.segment(i * ell * ell, ell * ell) = vec(row);
        }
        return r;
    };

    std::vector<Matrix> zeroB(nb, Matrix::Zero(ell, ell));
    Matrix zeroY = Matrix::Zero(ell, ell);
    Vector r0 = resid(zeroB, zeroY);

    Matrix Msys(r0.size(), unknowns);
    int col = 0;
    for (int k = 0; k < nb; ++k)
        for (int c = 0; c < ell; ++c)
            for (int r = 0; r < ell; ++r) {
                std::vector<Matrix> Bb1 = zeroB;
                Bb1[k](r, c) = 1.0;
                Msys.col(col++) = resid(Bb1, zeroY) - r0;
            }
    for (int c = 0; c < ell; ++c)
        for (int r = c; r < ell; ++r) {
            Matrix Yb = Matrix::Zero(ell, ell);
            Yb(r, c) = Yb(c, r) = 1.0;
            Msys.col(col++) = resid(zeroB, Yb) - r0;
        }

    Vector x = Msys.colPivHouseholderQr().solve(-r0);
    double fit = (Msys * x + r0).cwiseAbs().maxCoeff();
    if (fit > 1e-10 * std::max(1.0, r0.cwiseAbs().maxCoeff())) return false;

    Bb.assign(nb, Matrix::Zero(ell, ell));
    col = 0;
    for (int k = 0; k < nb; ++k)
        for (int c = 0; c < ell; ++c)
            for (int r = 0; r < ell; ++r) Bb[k](r, c) = x(col++);
    Y = Matrix::Zero(ell, ell);
    for (int c = 0; c < ell; ++c)
        for (int r = c; r < ell; ++r) {
            Y(r, c) = Y(c, r) = x(col++);
        }
    return true;
}

// Multiplies the reversed-coefficient block sequence by (1 - alpha z).
std::vector<Matrix> pad_blocks(const std::vector<Matrix>& blocks, double alpha, int ell) {
    std::vector<Matrix> out(blocks.size() + 1, Matrix::Zero(ell, ell));
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k < blocks.size()) out[k] += blocks[k];
        if (k >= 1) out[k] -= alpha * blocks[k - 1];
    }
    return out;
}

std::vector<Matrix> reversed_blocks(const StructureSpec& spec, const Matrix& coeff) {
    MatrixPolynomial poly(spec, coeff);
    std::vector<Matrix> b(spec.n + 1);
    b[0] = Matrix::Identity(spec.ell, spec.ell);
    for (int k = 1; k <= spec.n; ++k) b[k] = poly.coefficient_block(k);
    return b;
}

int hankel_degree(const Matrix& F, const Matrix& G, const Matrix& H, int n, int ell) {
    std::vector<Matrix> C(2 * n);
    Matrix Fk = Matrix::Identity(F.rows(), F.cols());
    for (int k = 0; k < 2 * n; ++k) {
        C[k] = H * Fk * G;  // Taylor coefficient k+1
        Fk = Fk * F;
    }
    Matrix Hk(n * ell, n * ell);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Hk.block(i * ell, j * ell, ell, ell) = C[i + j];
    Eigen::JacobiSVD<Matrix> svd(Hk);
    const auto& s = svd.singularValues();
    if (s(0) <= 0.0) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > 1e-8 * s(0)) ++rank;
    return rank;
}

}  // namespace

GroundTruth roundtrip_oracle(const StructureSpec& spec, const std::vector<double>& nodes,
                             const std::vector<int>& multiplicities, std::uint64_t seed,
                             int pad) {
    spec.validate();
    if (!spec.equal_indices())
        throw Error(ErrorCode::unequal_indices, "oracle needs equal observability indices");
    if (pad < 0 || pad >= spec.n)
        throw Error(ErrorCode::invalid_input, "pad must lie in [0, n)");

    const int ell = spec.ell, n = spec.n, ns = n - pad;
    StructureSpec small{ell, ns, std::vector<int>(ell, ns)};
    CanonicalMatrices cm_full = build_canonical(spec);
    Rng rng(seed);
    const double scale = 0.4 / ns;

    for (int attempt = 0; attempt < 1000; ++attempt) {
        Matrix A_s = rng.normal_matrix(ns * ell, ell) * scale;
        Matrix S_s = rng.normal_matrix(ns * ell, ell) * scale;
        MatrixPolynomial Ap(small, A_s, PolyRole::A);
        MatrixPolynomial Sp(small, S_s, PolyRole::Sigma);
        if (!is_schur(Ap).stable || !is_schur(Sp).stable) continue;

        auto Ab = reversed_blocks(small, A_s);
        auto Sb = reversed_blocks(small, S_s);
        std::vector<Matrix> Bb;
        Matrix Y;
        if (!solve_numerator(Ab, Sb, ell, ns, Bb, Y)) continue;

        Vector lamY = symmetric_eigenvalues(Y);
        if (lamY(0) < 1e-4 * std::max(1.0, lamY(lamY.size() - 1))) continue;
        Matrix R = sqrtm_psd(Y);

        std::vector<Matrix> Bfull(ns + 1);
        Bfull[0] = Matrix::Identity(ell, ell);
        for (int k = 1; k < ns; ++k) Bfull[k] = Bb[k - 1];
        Bfull[ns] = 2.0 * Sb[ns] * Y - Ab[ns];

        // Embed in the full frame through common Schur factors.
        auto Aemb = Ab;
        auto Bemb = Bfull;
        auto Semb = Sb;
        for (int q = 0; q < pad; ++q) {
            double alpha = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.2, 0.6);
            Aemb = pad_blocks(Aemb, alpha, ell);
            Bemb = pad_blocks(Bemb, alpha, ell);
            Semb = pad_blocks(Semb, alpha, ell);
        }
        auto drop_leading = [](std::vector<Matrix> b) {
            b.erase(b.begin());
            return b;
        };
        Matrix A_coeff = coeff_from_blocks(spec, drop_leading(Aemb));
        Matrix B_coeff = coeff_from_blocks(spec, drop_leading(Bemb));
        Matrix S_coeff = coeff_from_blocks(spec, drop_leading(Semb));

        MatrixPolynomial Afull(spec, A_coeff, PolyRole::A);
        MatrixPolynomial Bpoly(spec, B_coeff, PolyRole::B);
        MatrixPolynomial Sfull(spec, S_coeff, PolyRole::Sigma);
        if (spectral_identity_residual(Afull, Bpoly, Sfull, R, 64) > 1e-10) continue;
        if (positive_real_check(Afull, Bpoly, 128).min_eig < 1e-4) continue;

        Matrix F = cm_full.J - A_coeff * cm_full.H;
        Matrix G = 0.5 * (B_coeff - A_coeff);

        GroundTruth truth;
        truth.spec = spec;
        truth.A_coeff = A_coeff;
        truth.B_coeff = B_coeff;
        truth.Sigma_coeff = S_coeff;
        truth.R = R;
        truth.degree = hankel_degree(F, G, cm_full.H, n, ell);

        truth.problem.ell = ell;
        truth.problem.nodes = nodes;
        truth.problem.multiplicities = multiplicities;
        truth.problem.values = taylor_values(F, G, cm_full.H, nodes, multiplicities);
        truth.problem.validate();

        ProblemMatrices pm = derive_matrices(truth.problem);
        if (!pick_check(pm.W, pm.S, ell).feasible) continue;
        return truth;
    }
    throw Error(ErrorCode::rejection_exhausted,
                "no admissible ground truth after 1000 draws");
}

GroundTruth roundtrip_oracle(const StructureSpec& spec, std::uint64_t seed, int pad) {
    spec.validate();
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
    const int total = spec.n + 1;

    std::vector<int> mults;
    switch (rng.uniform_int(0, 2)) {
        case 0:  // covariance-extension pattern
            mults.assign(1, total);
            break;
        case 1:  // distinct-node pattern
            mults.assign(total, 1);
            break;
        default: {  // mixed
            int remaining = total;
            while (remaining > 0) {
                int m = rng.uniform_int(1, remaining);
                mults.push_back(m);
                remaining -= m;
            }
            break;
        }
    }

    std::vector<double> nodes{0.0};
    while (nodes.size() < mults.size()) {
        double z = rng.uniform(-0.7, 0.7);
        bool ok = true;
        for (double zj : nodes)
            if (std::abs(z - zj) < 0.1) ok = false;
        if (ok) nodes.push_back(z);
    }
    return roundtrip_oracle(spec, nodes, mults, seed, pad);
}

}  // namespace cee
