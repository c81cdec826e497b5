#include "cee/covext.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <cstdio>
#include <functional>

namespace cee {

StateSpaceFactor realize_factor(const SpectralFactor& factor) {
    CanonicalMatrices cm = build_canonical(factor.A.spec());
    StateSpaceFactor ss;
    ss.F = cm.J - factor.A.coeff() * cm.H;
    ss.K = (factor.Sigma.coeff() - factor.A.coeff()) * factor.R;
    ss.H = cm.H;
    ss.R = factor.R;
    if (spectral_radius(ss.F) >= 1.0 - 1e-12)
        throw Error(ErrorCode::unstable_factor, "spectral factor is not stable");
    return ss;
}

TimeSeries simulate(const StateSpaceFactor& factor, long N, std::uint64_t seed) {
    if (spectral_radius(factor.F) >= 1.0 - 1e-12)
        throw Error(ErrorCode::unstable_factor, "cannot simulate an unstable factor");
    const int ell = static_cast<int>(factor.H.rows());
    Rng rng(seed);

    TimeSeries series;
    series.seed = seed;
    series.samples.reserve(N + 1);
    Vector x = Vector::Zero(factor.F.rows());
    for (long t = 0; t <= N; ++t) {
        Vector w(ell);
        for (int i = 0; i < ell; ++i) w(i) = rng.normal();
        series.samples.push_back(factor.H * x + factor.R * w);
        x = factor.F * x + factor.K * w;
    }
    return series;
}

CovarianceSequence estimate_covariances(const TimeSeries& series, int max_lag) {
    const long N = static_cast<long>(series.samples.size()) - 1;
    if (max_lag >= static_cast<int>(series.samples.size()))
        throw Error(ErrorCode::insufficient_data,
                    "series too short for lag " + std::to_string(max_lag));
    const int ell = static_cast<int>(series.samples.empty() ? 0 : series.samples[0].size());

    CovarianceSequence covs;
    covs.ell = ell;
    covs.source = CovarianceSequence::Source::estimated;
    covs.lags.reserve(max_lag + 1);
    for (int k = 0; k <= max_lag; ++k) {
        Matrix C = Matrix::Zero(ell, ell);
        for (long t = k; t <= N; ++t)
            C += series.samples[t] * series.samples[t - k].transpose();
        covs.lags.push_back(C / static_cast<double>(N - k + 1));
    }
    return covs;
}

CovarianceSequence exact_covariances(const StateSpaceFactor& factor, int max_lag) {
    if (spectral_radius(factor.F) >= 1.0 - 1e-12)
        throw Error(ErrorCode::unstable_factor, "covariances need a stable factor");
    Matrix Pbar = solve_discrete_lyapunov(factor.F, factor.K * factor.K.transpose());
    Matrix Gbar = factor.F * Pbar * factor.H.transpose() + factor.K * factor.R.transpose();

    CovarianceSequence covs;
    covs.ell = static_cast<int>(factor.H.rows());
    covs.source = CovarianceSequence::Source::exact;
    covs.lags.reserve(max_lag + 1);
    covs.lags.push_back(factor.H * Pbar * factor.H.transpose() +
                        factor.R * factor.R.transpose());
    Matrix Fk = Matrix::Identity(factor.F.rows(), factor.F.cols());
    for (int k = 1; k <= max_lag; ++k) {
        covs.lags.push_back(factor.H * Fk * Gbar);
        Fk = Fk * factor.F;
    }
    return covs;
}

ScaledProblem covariances_to_problem(const CovarianceSequence& covs, int n) {
    if (static_cast<int>(covs.lags.size()) < n + 1)
        throw Error(ErrorCode::insufficient_data,
                    "need lags 0.." + std::to_string(n) + " to pose the problem");
    const int ell = covs.ell;
    Matrix C0 = 0.5 * (covs.lags[0] + covs.lags[0].transpose());

    Eigen::LLT<Matrix> llt(C0);
    if (llt.info() != Eigen::Success ||
        symmetric_eigenvalues(C0)(0) <= 1e-12 * std::max(1.0, max_abs(C0)))
        throw Error(ErrorCode::degenerate_data, "lag-zero covariance is not positive definite");
    Matrix L = llt.matrixL();
    Eigen::PartialPivLU<Matrix> lu(L);

    ScaledProblem sp;
    sp.scale = L;
    sp.problem.ell = ell;
    sp.problem.nodes = {0.0};
    sp.problem.multiplicities = {n + 1};
    sp.problem.values.resize(1);
    sp.problem.values[0].push_back(0.5 * Matrix::Identity(ell, ell));
    for (int k = 1; k <= n; ++k) {
        Matrix scaled = lu.solve(covs.lags[k]);
        sp.problem.values[0].push_back(lu.solve(scaled.transpose()).transpose());
    }
    return sp;
}

Matrix scale_prior(const StructureSpec& spec, const Matrix& sigma_coeff, const Matrix& scale) {
    MatrixPolynomial sigma(spec, sigma_coeff);
    Eigen::PartialPivLU<Matrix> lu(scale);
    std::vector<Matrix> blocks;
    blocks.reserve(spec.n);
    for (int k = 1; k <= spec.n; ++k)
        blocks.push_back(lu.solve(sigma.coefficient_block(k) * scale));
    return coeff_from_blocks(spec, blocks);
}

ReduceResult reduce_model(const CeeSolution& solution, const CovarianceSequence& covs,
                          int new_n, const MatrixPolynomial& new_sigma,
                          const SolverOptions& options) {
    if (new_n > solution.Sigma.spec().n)
        throw Error(ErrorCode::invalid_input, "reduced order exceeds the solved order");
    if (new_sigma.spec().n != new_n)
        throw Error(ErrorCode::invalid_input, "reduced prior must have degree new_n");

    ReduceResult res;
    res.posed = covariances_to_problem(covs, new_n);
    Matrix scaled_coeff = scale_prior(new_sigma.spec(), new_sigma.coeff(), res.posed.scale);
    MatrixPolynomial prior(new_sigma.spec(), scaled_coeff, PolyRole::Sigma);
    res.solution = solve_problem(res.posed.problem, prior, options);
    res.P_eigs_before = symmetric_eigenvalues(solution.P);
    res.P_eigs_after = symmetric_eigenvalues(res.solution.P);
    return res;
}

namespace {

std::vector<SingularValueRow> sv_grid(int points,
                                      const std::function<CMatrix(Complex)>& transfer) {
    std::vector<SingularValueRow> rows;
    rows.reserve(points);
    for (int q = 0; q < points; ++q) {
        double theta = 2.0 * M_PI * q / points;
        CMatrix V = transfer(Complex(std::cos(theta), std::sin(theta)));
        Eigen::JacobiSVD<CMatrix> svd(V);
        rows.push_back({theta, svd.singularValues()});
    }
    return rows;
}

}  // namespace

std::vector<SingularValueRow> singular_value_grid(const SpectralFactor& factor, int points,
                                                  const Matrix& scale) {
    if (!is_schur(factor.A).stable)
        throw Error(ErrorCode::unstable_factor, "singular-value grid needs a stable factor");
    CMatrix S = scale.cast<Complex>();
    CMatrix R = factor.R.cast<Complex>();
    return sv_grid(points, [&](Complex z) -> CMatrix {
        return S * factor.A.eval(z).partialPivLu().solve(factor.Sigma.eval(z)) * R;
    });
}

std::vector<SingularValueRow> singular_value_grid(const SpectralFactor& factor, int points) {
    return singular_value_grid(factor, points,
                               Matrix::Identity(factor.A.spec().ell, factor.A.spec().ell));
}

std::vector<SingularValueRow> singular_value_grid(const StateSpaceFactor& factor, int points) {
    if (spectral_radius(factor.F) >= 1.0 - 1e-12)
        throw Error(ErrorCode::unstable_factor, "singular-value grid needs a stable factor");
    const Eigen::Index dim = factor.F.rows();
    CMatrix F = factor.F.cast<Complex>(), K = factor.K.cast<Complex>();
    CMatrix H = factor.H.cast<Complex>(), R = factor.R.cast<Complex>();
    return sv_grid(points, [&](Complex z) -> CMatrix {
        CMatrix lhs = z * CMatrix::Identity(dim, dim) - F;
        return H * lhs.partialPivLu().solve(K) + R;
    });
}

std::string singular_values_to_csv(const std::vector<SingularValueRow>& rows) {
    std::string out = "theta";
    if (!rows.empty())
        for (Eigen::Index i = 0; i < rows[0].values.size(); ++i)
            out += ",sv" + std::to_string(i + 1);
    out += "\n";
    char buf[64];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof(buf), "%.12g", row.theta);
        out += buf;
        for (Eigen::Index i = 0; i < row.values.size(); ++i) {
            std::snprintf(buf, sizeof(buf), ",%.12g", row.values(i));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

}  // namespace cee
