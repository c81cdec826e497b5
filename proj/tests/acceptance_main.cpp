// Acceptance suite: end-to-end checks of the solver pipeline against its
// reference fixtures, structural laws, and the round-trip oracle. Each
// criterion prints one PASS/FAIL line; the exit code is the failure count.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "cee/covext.hpp"
#include "cee/io.hpp"
#include "cee/solver.hpp"
#include "cee/verify.hpp"
#include "fixtures.hpp"

using namespace cee;

namespace {

struct Collected {
    CeeSolution solution;
    std::string label;
};

std::vector<Collected> g_solutions;

struct Outcome {
    bool ok = false;
    std::string detail;
};

bool cert_thresholds(const CertificationReport& rep, std::ostringstream& os) {
    os << "interp " << rep.interp_residual << ", spectral " << rep.spectral_residual
       << ", pr_min " << rep.pr_min_eig << ", stable " << rep.stable_A;
    return rep.stable_A && rep.interp_residual <= 1e-8 && rep.spectral_residual <= 1e-8 &&
           rep.pr_min_eig >= -1e-10;
}

Outcome criterion_reference_problem() {
    std::ostringstream os;
    auto problem = fixtures::np2x2_problem();
    MatrixPolynomial sigma(fixtures::np2x2_spec(), fixtures::np2x2_sigma(), PolyRole::Sigma);
    CeeSolution sol = solve_problem(problem, sigma);
    g_solutions.push_back({sol, "two-node"});

    double devA = max_abs(sol.A.coeff() - fixtures::np2x2_solution_A());
    double devB = max_abs(sol.B.coeff() - fixtures::np2x2_solution_B());
    if (devA <= 1e-3 && devB <= 1e-3) {
        os << "matched reference coefficients (dev " << std::max(devA, devB) << ")";
        return {true, os.str()};
    }

    // The published reference coefficients do not interpolate this data set
    // (they belong to the origin-lag fixture); fall back to certification.
    MatrixPolynomial refA(fixtures::np2x2_spec(), fixtures::np2x2_solution_A(), PolyRole::A);
    MatrixPolynomial refB(fixtures::np2x2_spec(), fixtures::np2x2_solution_B(), PolyRole::B);
    double ref_resid = interpolation_residual(refA, refB, problem);
    if (ref_resid < 1e-6) {
        os << "solver deviates from a consistent reference (dev " << std::max(devA, devB)
           << ")";
        return {false, os.str()};
    }
    os << "reference coefficients inconsistent with the data (their residual " << ref_resid
       << "); certification fallback: ";
    CertificationReport rep = certify(sol, problem);
    bool ok = cert_thresholds(rep, os);
    return {ok, os.str()};
}

Outcome criterion_origin_lag_problem() {
    std::ostringstream os;
    auto problem = fixtures::covext2x2_problem();
    MatrixPolynomial sigma(fixtures::np2x2_spec(), fixtures::np2x2_sigma(), PolyRole::Sigma);
    CeeSolution sol = solve_problem(problem, sigma);
    g_solutions.push_back({sol, "origin-lag"});
    CertificationReport rep = certify(sol, problem);
    bool ok = cert_thresholds(rep, os);
    return {ok, os.str()};
}

Outcome criterion_L_regularity() {
    std::ostringstream os;
    Rng rng(515);
    int equal_bad = 0, unequal_bad = 0;
    double worst_cond = 0.0, worst_ratio = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        int ell = rng.uniform_int(2, 3);
        int n = rng.uniform_int(2, 4);
        auto problem = fixtures::random_node_problem(rng, ell, n);
        Matrix Z = build_Z(problem);
        Vector e = build_e(problem);

        StructureSpec spec{ell, n, std::vector<int>(ell, n)};
        CanonicalMatrices cm = build_canonical(spec);
        try {
            LFactor lf = build_L(build_V(Z, e, spec), cm);
            worst_cond = std::max(worst_cond, lf.condition);
            if (!(lf.condition < 1e10)) ++equal_bad;
        } catch (const Error&) {
            ++equal_bad;
        }

        std::vector<int> unequal(ell, n);
        unequal[0] += 1;
        unequal[1] -= 1;
        StructureSpec uspec{ell, n, unequal};
        CanonicalMatrices ucm = build_canonical(uspec);
        Matrix VN = build_V(Z, e, uspec) * ucm.N_stack;
        Eigen::JacobiSVD<Matrix> svd(VN);
        const auto& s = svd.singularValues();
        double ratio = s(s.size() - 1) / s(0);
        worst_ratio = std::max(worst_ratio, ratio);
        if (!(ratio < 1e-10)) ++unequal_bad;
    }
    os << "equal-index failures " << equal_bad << " (worst cond " << worst_cond
       << "), unequal-index failures " << unequal_bad << " (worst sv ratio " << worst_ratio
       << ")";
    return {equal_bad == 0 && unequal_bad == 0, os.str()};
}

Outcome criterion_path_feasibility() {
    std::ostringstream os;
    int bad = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        StructureSpec spec{2, 3, {3, 3}};
        if (seed % 3 == 0) spec = StructureSpec{3, 2, {2, 2, 2}};
        if (seed % 3 == 1) spec = StructureSpec{1, 4, {4}};
        GroundTruth truth = roundtrip_oracle(spec, seed);
        ProblemMatrices pm = derive_matrices(truth.problem);
        for (int q = 0; q <= 20; ++q) {
            Matrix Wl = deform_W(pm.T, q / 20.0);
            PickResult pick = pick_check(Wl, pm.S, spec.ell);
            worst = std::min(worst, pick.min_eig);
            if (pick.min_eig <= 0.0) ++bad;
        }
    }
    os << "20 problems x 21 grid points, " << bad << " infeasible (worst min-eig " << worst
       << ")";
    return {bad == 0, os.str()};
}

Outcome criterion_roundtrip() {
    std::ostringstream os;
    int bad = 0;
    double worst_dev = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        int ell = (seed % 2) ? 2 : 1;
        int n = 2 + static_cast<int>(seed % 2);
        int pad = (seed % 5 == 0 && n > 1) ? 1 : 0;
        StructureSpec spec{ell, n, std::vector<int>(ell, n)};
        GroundTruth truth = roundtrip_oracle(spec, 9000 + seed, pad);
        MatrixPolynomial sigma(spec, truth.Sigma_coeff, PolyRole::Sigma);
        CeeSolution sol = solve_problem(truth.problem, sigma);
        g_solutions.push_back({sol, "roundtrip " + std::to_string(seed)});

        double dev = std::max(max_abs(sol.A.coeff() - truth.A_coeff),
                              max_abs(sol.B.coeff() - truth.B_coeff));
        worst_dev = std::max(worst_dev, dev);
        if (dev > 1e-6 || sol.rank_P != truth.degree) {
            ++bad;
            os << "[seed " << seed << ": dev " << dev << ", rank " << sol.rank_P << " vs "
               << truth.degree << "] ";
        }
    }
    os << bad << "/20 failures, worst coefficient deviation " << worst_dev;
    return {bad == 0, os.str()};
}

Outcome criterion_scalar_consistency() {
    std::ostringstream os;
    int bad = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 300; seed < 320; ++seed) {
        StructureSpec spec{1, 3, {3}};
        GroundTruth truth = roundtrip_oracle(spec, seed);
        ProblemMatrices pm = derive_matrices(truth.problem);
        CanonicalMatrices cm = build_canonical(spec);
        InterpolationOperators ops = build_u_U(pm.Z, pm.e, pm.That, spec, cm);
        double dev_ops = scalar_uU_crosscheck(truth.problem, ops);

        MatrixPolynomial sigma(spec, truth.Sigma_coeff, PolyRole::Sigma);
        CeeSolution sol = solve_problem(truth.problem, sigma);
        g_solutions.push_back({sol, "scalar " + std::to_string(seed)});
        double dev_rec = scalar_recovery_crosscheck(sol, truth.problem);
        double hPh = (cm.H * sol.P * cm.H.transpose())(0, 0);

        worst = std::max({worst, dev_ops, dev_rec});
        if (dev_ops > 1e-10 || dev_rec > 1e-10 || !(hPh < 1.0)) ++bad;
    }
    os << bad << "/20 failures, worst deviation " << worst;
    return {bad == 0, os.str()};
}

Outcome criterion_coefficient_identities() {
    std::ostringstream os;
    int bad = 0;
    double worst = 0.0;
    for (const auto& entry : g_solutions) {
        const CeeSolution& sol = entry.solution;
        int n = sol.Sigma.spec().n;
        Matrix top_sum = sol.A.coefficient_block(n) + sol.B.coefficient_block(n) -
                         2.0 * sol.Sigma.coefficient_block(n) * sol.R * sol.R.transpose();
        Matrix gsplit = sol.B.coeff() - sol.A.coeff() - 2.0 * sol.G;
        double dev = std::max(max_abs(top_sum), max_abs(gsplit));
        worst = std::max(worst, dev);
        if (dev > 1e-10) {
            ++bad;
            os << "[" << entry.label << ": " << dev << "] ";
        }
    }
    os << g_solutions.size() << " solutions checked, worst deviation " << worst;
    return {bad == 0 && !g_solutions.empty(), os.str()};
}

Outcome criterion_model_reduction() {
    std::ostringstream os;
    auto spec = fixtures::model10_spec();
    SpectralFactor truth{MatrixPolynomial(spec, fixtures::model10_A(), PolyRole::A),
                         MatrixPolynomial(spec, fixtures::model10_sigma(), PolyRole::Sigma),
                         Matrix::Identity(2, 2)};
    StateSpaceFactor ss = realize_factor(truth);

    auto gap_count = [](const Vector& eigs) {
        double lam_max = eigs(eigs.size() - 1);
        int count = 0;
        for (Eigen::Index i = 0; i < eigs.size(); ++i)
            if (eigs(i) < 1e-2 * lam_max) ++count;
        return count;
    };

    auto solve_from = [&](const CovarianceSequence& covs, int n, const Matrix& prior_coeff,
                          const StructureSpec& prior_spec) {
        ScaledProblem posed = covariances_to_problem(covs, n);
        Matrix scaled = scale_prior(prior_spec, prior_coeff, posed.scale);
        MatrixPolynomial prior(prior_spec, scaled, PolyRole::Sigma);
        CeeSolution sol = solve_problem(posed.problem, prior);
        return std::make_pair(sol, posed.scale);
    };

    // Estimated path at N = 1e5 with a fixed seed.
    const long N = 100000;
    CovarianceSequence est = estimate_covariances(simulate(ss, N, 7), 5);
    auto [sol_est, scale_est] = solve_from(est, 5, fixtures::model10_sigma(), spec);
    int gap_est = gap_count(symmetric_eigenvalues(sol_est.P));
    os << "estimated-path spectrum gap " << gap_est << "/10";
    bool ok = gap_est >= 4;

    // Deterministic variant with exact covariances.
    CovarianceSequence exact = exact_covariances(ss, 5);
    auto [sol_exact, scale_exact] = solve_from(exact, 5, fixtures::model10_sigma(), spec);
    int gap_exact = gap_count(symmetric_eigenvalues(sol_exact.P));
    os << ", exact-path gap " << gap_exact << "/10";
    ok = ok && gap_exact >= 4;

    // Reduced order-six model stays within 3 dB of the true response.
    StructureSpec red_spec{2, 3, {3, 3}};
    auto [sol_red, scale_red] =
        solve_from(est, 3, fixtures::model10_reduced_sigma(), red_spec);
    auto rows_true = singular_value_grid(truth, 256);
    auto rows_red =
        singular_value_grid({sol_red.A, sol_red.Sigma, sol_red.R}, 256, scale_red);
    double worst_db = 0.0;
    for (std::size_t q = 0; q < rows_true.size(); ++q)
        for (Eigen::Index i = 0; i < 2; ++i) {
            double db =
                std::abs(20.0 * std::log10(rows_red[q].values(i) / rows_true[q].values(i)));
            worst_db = std::max(worst_db, db);
        }
    os << ", reduced-model worst deviation " << worst_db << " dB";
    ok = ok && worst_db <= 3.0;
    return {ok, os.str()};
}

Outcome criterion_jacobian() {
    std::ostringstream os;
    auto fd_column_check = [](const CeeInput& in, std::uint64_t seed) {
        Rng rng(seed);
        const int dim = in.spec.n * in.spec.ell;
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Matrix p = 0.3 * rng.normal_matrix(dim, in.spec.ell);
            double lambda = rng.uniform();
            Matrix jac = homotopy_jacobian(p, lambda, in);
            Matrix fd(dim * in.spec.ell, dim * in.spec.ell);
            const double h = 1e-6;
            Matrix pp = p;
            for (int s = 0; s < in.spec.ell; ++s)
                for (int r = 0; r < dim; ++r) {
                    pp(r, s) = p(r, s) + h;
                    Vector plus = vec(homotopy_residual(pp, lambda, in));
                    pp(r, s) = p(r, s) - h;
                    Vector minus = vec(homotopy_residual(pp, lambda, in));
                    pp(r, s) = p(r, s);
                    fd.col(s * dim + r) = (plus - minus) / (2.0 * h);
                }
            worst = std::max(worst, max_abs(jac - fd) / std::max(1.0, max_abs(jac)));
        }
        return worst;
    };

    auto input_for = [](const InterpolationProblem& problem, const Matrix& sigma_coeff) {
        StructureSpec spec{problem.ell, problem.n(),
                           std::vector<int>(problem.ell, problem.n())};
        MatrixPolynomial sigma(spec, sigma_coeff, PolyRole::Sigma);
        return make_cee_input(problem, derive_matrices(problem), sigma);
    };

    double worst = 0.0;
    worst = std::max(worst,
                     fd_column_check(input_for(fixtures::np2x2_problem(),
                                               fixtures::np2x2_sigma()),
                                     61));
    worst = std::max(worst,
                     fd_column_check(input_for(fixtures::covext2x2_problem(),
                                               fixtures::np2x2_sigma()),
                                     62));
    GroundTruth scalar = roundtrip_oracle(StructureSpec{1, 3, {3}}, 63);
    worst = std::max(worst,
                     fd_column_check(input_for(scalar.problem, scalar.Sigma_coeff), 64));
    GroundTruth wide = roundtrip_oracle(StructureSpec{2, 3, {3, 3}}, 65);
    worst = std::max(worst, fd_column_check(input_for(wide.problem, wide.Sigma_coeff), 66));

    os << "worst relative deviation " << worst;
    return {worst <= 1e-5, os.str()};
}

struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "reference two-node problem solves to certified accuracy", 5.0,
         criterion_reference_problem},
        {2, "origin-lag problem solves and certifies", 5.0, criterion_origin_lag_problem},
        {3, "L regular for equal indices, singular otherwise", 10.0, criterion_L_regularity},
        {4, "deformed data stays feasible along the path", 10.0, criterion_path_feasibility},
        {5, "round-trip recovery of seeded ground truths", 60.0, criterion_roundtrip},
        {6, "scalar construction consistency", 60.0, criterion_scalar_consistency},
        {7, "coefficient identities on every converged solution", 60.0,
         criterion_coefficient_identities},
        {8, "model-reduction experiment", 60.0, criterion_model_reduction},
        {9, "analytic Jacobian against finite differences", 60.0, criterion_jacobian},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = outcome.ok && elapsed < c.time_limit_s;
        if (!ok) ++failures;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.id << ": " << c.name << " - "
                  << outcome.detail;
        std::cout << " (" << elapsed << " s, limit " << c.time_limit_s << ")\n";
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size()
              << " acceptance criteria passed\n";
    return failures;
}
