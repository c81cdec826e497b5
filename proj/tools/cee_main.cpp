// Command-line front end: solve interpolation problems, certify solutions,
// run the covariance-extension workflow, and export plot data.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "cee/covext.hpp"
#include "cee/io.hpp"
#include "cee/solver.hpp"
#include "cee/verify.hpp"

namespace {

using namespace cee;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitSolverError = 3;
constexpr int kExitCertification = 4;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::io_error:
        case ErrorCode::invalid_input:
            return kExitInvalidInput;
        case ErrorCode::infeasible:
        case ErrorCode::singular_L:
        case ErrorCode::unequal_indices:
        case ErrorCode::unstable_sigma:
        case ErrorCode::degenerate_data:
        case ErrorCode::singular_normalization:
        case ErrorCode::singular_basis:
        case ErrorCode::insufficient_data:
            return kExitInfeasible;
        default:
            return kExitSolverError;
    }
}

const char* status_word(int exit_code) {
    switch (exit_code) {
        case kExitOk: return "ok";
        case kExitInvalidInput: return "invalid_input";
        case kExitInfeasible: return "infeasible";
        case kExitCertification: return "certification_failed";
        default: return "solver_error";
    }
}

void print_status(int exit_code) {
    std::cout << "status=" << status_word(exit_code) << std::endl;
}

std::string default_prefix(const std::string& input) {
    std::filesystem::path p(input);
    p.replace_extension();
    return p.string();
}

Eigen::IOFormat matrix_format() {
    return Eigen::IOFormat(6, 0, "  ", "\n", "  [", "]");
}

void print_solution_summary(const CeeSolution& sol, const CertificationReport& rep) {
    std::cout << "A =\n" << sol.A.coeff().format(matrix_format()) << "\n";
    std::cout << "B =\n" << sol.B.coeff().format(matrix_format()) << "\n";
    std::cout << "R =\n" << sol.R.format(matrix_format()) << "\n";
    Vector eigs = symmetric_eigenvalues(sol.P);
    std::cout << "P eigenvalues =" << eigs.transpose().format(Eigen::IOFormat(6)) << "\n";
    std::cout << "rank_P = " << sol.rank_P << "\n";
    std::cout << "continuation_steps = " << sol.trace.lambdas.size() - 1 << "\n";
    std::cout << report_to_text(rep);
}

struct SolveArgs {
    std::string input;
    std::string out;
    int grid = 0;
    double newton_tol = 0.0;
    double rank_tol = 0.0;
    int max_steps = 0;
};

void apply_overrides(SolverOptions& opts, const SolveArgs& args) {
    if (args.grid > 0) opts.grid = args.grid;
    if (args.newton_tol > 0.0) opts.newton_tol = args.newton_tol;
    if (args.rank_tol > 0.0) opts.rank_tol = args.rank_tol;
    if (args.max_steps > 0) opts.max_steps = args.max_steps;
}

int run_solve(const SolveArgs& args) {
    ProblemFile pf = load_problem_file(args.input);
    pf.problem.validate();
    if (!pf.sigma_spec || !pf.sigma_coeff)
        throw Error(ErrorCode::io_error, "problem file lacks a 'sigma' prior");
    SolverOptions opts = pf.options;
    apply_overrides(opts, args);

    ProblemMatrices derived = derive_matrices(pf.problem);
    PickResult pick = pick_check(derived.W, derived.S, pf.problem.ell);
    std::cout << "pick_min_eig = " << pick.min_eig << "\n";
    if (!pick.feasible)
        throw Error(ErrorCode::infeasible, "Pick matrix not positive definite");

    MatrixPolynomial sigma(*pf.sigma_spec, *pf.sigma_coeff, PolyRole::Sigma);
    CeeInput input = make_cee_input(pf.problem, derived, sigma);
    auto [p_final, trace] = continue_path(input, opts);
    CeeSolution sol = assemble_solution(p_final, input, opts);
    sol.trace = std::move(trace);

    CertificationReport rep = certify(sol, pf.problem, opts.grid);
    print_solution_summary(sol, rep);

    std::string out = args.out.empty() ? default_prefix(args.input) + ".solution.json" : args.out;
    Matrix scale = Matrix::Identity(pf.problem.ell, pf.problem.ell);
    save_solution_file(out, make_solution_file(sol, rep, scale));
    std::cout << "solution written to " << out << "\n";
    return rep.pass ? kExitOk : kExitCertification;
}

int run_verify(const std::string& solution_path, const std::string& problem_path, int grid) {
    SolutionFile sf = load_solution_file(solution_path);
    ProblemFile pf = load_problem_file(problem_path);
    pf.problem.validate();

    CeeSolution sol{.P = Matrix(),
                    .p = Matrix(),
                    .A = MatrixPolynomial(sf.spec, sf.A, PolyRole::A),
                    .B = MatrixPolynomial(sf.spec, sf.B, PolyRole::B),
                    .Sigma = MatrixPolynomial(sf.spec, sf.sigma_coeff, PolyRole::Sigma),
                    .R = sf.R,
                    .G = sf.G,
                    .K = Matrix(),
                    .rank_P = sf.rank_P,
                    .trace = {}};
    CertificationReport rep = certify(sol, pf.problem, grid > 0 ? grid : 512);
    std::cout << report_to_text(rep);
    return rep.pass ? kExitOk : kExitCertification;
}

struct CovextArgs {
    std::string input;
    std::string sigma_path;
    std::string out_prefix;
    int lags = -1;
    long samples = 100000;
    std::uint64_t seed = 0;
    bool exact_cov = false;
    int grid = 256;
};

int run_covext(const CovextArgs& args) {
    std::string prefix = args.out_prefix.empty() ? default_prefix(args.input) : args.out_prefix;

    CovarianceSequence covs;
    StructureSpec prior_spec;
    Matrix prior_coeff;
    bool have_prior = false;
    int lags = args.lags;

    std::ifstream probe(args.input);
    if (!probe) throw Error(ErrorCode::io_error, "cannot open " + args.input);
    std::string head((std::istreambuf_iterator<char>(probe)), std::istreambuf_iterator<char>());
    bool is_series = head.find("\"samples\"") != std::string::npos;

    if (is_series) {
        if (args.exact_cov)
            throw Error(ErrorCode::io_error, "--exact-cov needs a system file, not a series");
        int ell = 0;
        TimeSeries series = load_series_file(args.input, ell);
        if (lags < 0) throw Error(ErrorCode::io_error, "--lags is required for series input");
        covs = estimate_covariances(series, lags);
        covs.ell = ell;
    } else {
        SystemFile sys = load_system_file(args.input);
        MatrixPolynomial A(sys.spec, sys.A_coeff, PolyRole::A);
        MatrixPolynomial S(sys.spec, sys.sigma_coeff, PolyRole::Sigma);
        StateSpaceFactor ss = realize_factor({A, S, sys.R});
        if (lags < 0) lags = sys.spec.n;
        if (args.exact_cov) {
            covs = exact_covariances(ss, lags);
        } else {
            TimeSeries series = simulate(ss, args.samples, args.seed);
            covs = estimate_covariances(series, lags);
        }
        if (lags == sys.spec.n && sys.spec.equal_indices()) {
            prior_spec = sys.spec;
            prior_coeff = sys.sigma_coeff;
            have_prior = true;
        }
    }
    save_covariances_file(prefix + ".covariances.json", covs);

    if (!args.sigma_path.empty()) {
        std::tie(prior_spec, prior_coeff) = load_sigma_file(args.sigma_path, covs.ell);
        have_prior = true;
    }
    if (!have_prior)
        throw Error(ErrorCode::io_error,
                    "no prior available: pass --sigma or use a system file with --lags equal "
                    "to its degree");
    if (prior_spec.n != lags)
        throw Error(ErrorCode::io_error, "prior degree must equal --lags");

    ScaledProblem posed = covariances_to_problem(covs, lags);
    Matrix scaled_coeff = scale_prior(prior_spec, prior_coeff, posed.scale);

    ProblemFile pf;
    pf.problem = posed.problem;
    pf.sigma_spec = prior_spec;
    pf.sigma_coeff = scaled_coeff;
    save_problem_file(prefix + ".problem.json", pf);

    MatrixPolynomial prior(prior_spec, scaled_coeff, PolyRole::Sigma);
    CeeSolution sol = solve_problem(posed.problem, prior);
    CertificationReport rep = certify(sol, posed.problem);

    Vector eigs = symmetric_eigenvalues(sol.P);
    std::cout << "P eigenvalues =" << eigs.transpose().format(Eigen::IOFormat(6)) << "\n";
    std::cout << "rank_P = " << sol.rank_P << "\n";
    std::cout << report_to_text(rep);
    save_solution_file(prefix + ".solution.json", make_solution_file(sol, rep, posed.scale));

    auto rows = singular_value_grid({sol.A, sol.Sigma, sol.R}, args.grid, posed.scale);
    write_text_file(prefix + ".svgrid.csv", singular_values_to_csv(rows));
    std::cout << "outputs written with prefix " << prefix << "\n";
    return rep.pass ? kExitOk : kExitCertification;
}

struct ReduceArgs {
    std::string covariances_path;
    std::string sigma_path;
    std::string baseline_path;
    std::string out_prefix;
    int order = -1;
    int grid = 256;
};

int run_reduce(const ReduceArgs& args) {
    CovarianceSequence covs = load_covariances_file(args.covariances_path);
    if (args.order < 1) throw Error(ErrorCode::io_error, "--order must be positive");
    auto [spec, coeff] = load_sigma_file(args.sigma_path, covs.ell);
    MatrixPolynomial prior(spec, coeff, PolyRole::Sigma);

    std::string prefix =
        args.out_prefix.empty() ? default_prefix(args.covariances_path) + ".reduced"
                                : args.out_prefix;

    ScaledProblem posed = covariances_to_problem(covs, args.order);
    Matrix scaled_coeff = scale_prior(spec, coeff, posed.scale);
    MatrixPolynomial scaled_prior(spec, scaled_coeff, PolyRole::Sigma);
    CeeSolution sol = solve_problem(posed.problem, scaled_prior);
    CertificationReport rep = certify(sol, posed.problem);

    if (!args.baseline_path.empty()) {
        SolutionFile base = load_solution_file(args.baseline_path);
        std::cout << "P eigenvalues (baseline) ="
                  << base.P_eigenvalues.transpose().format(Eigen::IOFormat(6)) << "\n";
    }
    Vector eigs = symmetric_eigenvalues(sol.P);
    std::cout << "P eigenvalues (reduced) =" << eigs.transpose().format(Eigen::IOFormat(6))
              << "\n";
    std::cout << "rank_P = " << sol.rank_P << "\n";
    std::cout << report_to_text(rep);

    save_solution_file(prefix + ".solution.json", make_solution_file(sol, rep, posed.scale));
    auto rows = singular_value_grid({sol.A, sol.Sigma, sol.R}, args.grid, posed.scale);
    write_text_file(prefix + ".svgrid.csv", singular_values_to_csv(rows));
    std::cout << "outputs written with prefix " << prefix << "\n";
    return rep.pass ? kExitOk : kExitCertification;
}

int run_svgrid(const std::string& input, const std::string& out, int points) {
    std::ifstream probe(input);
    if (!probe) throw Error(ErrorCode::io_error, "cannot open " + input);
    std::string head((std::istreambuf_iterator<char>(probe)), std::istreambuf_iterator<char>());

    std::vector<SingularValueRow> rows;
    if (head.find("\"A\"") != std::string::npos && head.find("\"B\"") != std::string::npos) {
        SolutionFile sf = load_solution_file(input);
        SpectralFactor factor{MatrixPolynomial(sf.spec, sf.A, PolyRole::A),
                              MatrixPolynomial(sf.spec, sf.sigma_coeff, PolyRole::Sigma), sf.R};
        rows = singular_value_grid(factor, points, sf.scale);
    } else {
        SystemFile sys = load_system_file(input);
        SpectralFactor factor{MatrixPolynomial(sys.spec, sys.A_coeff, PolyRole::A),
                              MatrixPolynomial(sys.spec, sys.sigma_coeff, PolyRole::Sigma),
                              sys.R};
        rows = singular_value_grid(factor, points);
    }
    std::string path = out.empty() ? default_prefix(input) + ".svgrid.csv" : out;
    write_text_file(path, singular_values_to_csv(rows));
    std::cout << "singular-value grid written to " << path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analytic interpolation with degree constraints"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "solve an interpolation problem file");
    solve_cmd->add_option("problem", solve_args.input, "problem JSON file")->required();
    solve_cmd->add_option("--out", solve_args.out, "solution output path");
    solve_cmd->add_option("--grid", solve_args.grid, "certification grid size");
    solve_cmd->add_option("--newton-tol", solve_args.newton_tol, "corrector tolerance");
    solve_cmd->add_option("--rank-tol", solve_args.rank_tol, "rank threshold");
    solve_cmd->add_option("--max-steps", solve_args.max_steps, "continuation step limit");

    std::string verify_solution, verify_problem;
    int verify_grid = 0;
    auto* verify_cmd = app.add_subcommand("verify", "certify a solution against a problem");
    verify_cmd->add_option("solution", verify_solution, "solution JSON file")->required();
    verify_cmd->add_option("problem", verify_problem, "problem JSON file")->required();
    verify_cmd->add_option("--grid", verify_grid, "certification grid size");

    CovextArgs covext_args;
    auto* covext_cmd =
        app.add_subcommand("covext", "covariance extension from a system or series file");
    covext_cmd->add_option("input", covext_args.input, "system or series JSON file")->required();
    covext_cmd->add_option("--lags", covext_args.lags, "highest covariance lag");
    covext_cmd->add_option("--samples", covext_args.samples, "simulation length N");
    covext_cmd->add_option("--seed", covext_args.seed, "simulation seed");
    covext_cmd->add_flag("--exact-cov", covext_args.exact_cov,
                         "use exact covariances instead of simulating");
    covext_cmd->add_option("--sigma", covext_args.sigma_path, "prior file (indices + coeff)");
    covext_cmd->add_option("--out-prefix", covext_args.out_prefix, "output path prefix");
    covext_cmd->add_option("--grid", covext_args.grid, "singular-value grid size");

    ReduceArgs reduce_args;
    auto* reduce_cmd = app.add_subcommand("reduce", "re-solve with fewer lags and a reduced prior");
    reduce_cmd->add_option("covariances", reduce_args.covariances_path, "covariances JSON file")
        ->required();
    reduce_cmd->add_option("--order", reduce_args.order, "reduced degree")->required();
    reduce_cmd->add_option("--sigma", reduce_args.sigma_path, "reduced prior file")->required();
    reduce_cmd->add_option("--baseline", reduce_args.baseline_path,
                           "solution file for spectrum comparison");
    reduce_cmd->add_option("--out-prefix", reduce_args.out_prefix, "output path prefix");
    reduce_cmd->add_option("--grid", reduce_args.grid, "singular-value grid size");

    std::string svgrid_input, svgrid_out;
    int svgrid_points = 256;
    auto* svgrid_cmd =
        app.add_subcommand("svgrid", "frequency-response singular values as CSV");
    svgrid_cmd->add_option("input", svgrid_input, "solution or system JSON file")->required();
    svgrid_cmd->add_option("--out", svgrid_out, "CSV output path");
    svgrid_cmd->add_option("--grid", svgrid_points, "number of grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        if (code == 0) {
            print_status(kExitOk);
            return kExitOk;
        }
        print_status(kExitInvalidInput);
        return kExitInvalidInput;
    }

    int exit_code = kExitOk;
    try {
        if (solve_cmd->parsed()) {
            exit_code = run_solve(solve_args);
        } else if (verify_cmd->parsed()) {
            exit_code = run_verify(verify_solution, verify_problem, verify_grid);
        } else if (covext_cmd->parsed()) {
            exit_code = run_covext(covext_args);
        } else if (reduce_cmd->parsed()) {
            exit_code = run_reduce(reduce_args);
        } else if (svgrid_cmd->parsed()) {
            exit_code = run_svgrid(svgrid_input, svgrid_out, svgrid_points);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        exit_code = exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        exit_code = kExitSolverError;
    }
    print_status(exit_code);
    return exit_code;
}
