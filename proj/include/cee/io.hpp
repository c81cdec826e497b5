#pragma once

#include <optional>
#include <string>

#include "cee/covext.hpp"
#include "cee/solver.hpp"
#include "cee/verify.hpp"

namespace cee {

/// On-disk problem description: interpolation data plus (optionally) the
/// prior and solver options. All matrices are stored row-major as nested
/// JSON arrays.
struct ProblemFile {
    InterpolationProblem problem;
    std::optional<StructureSpec> sigma_spec;
    std::optional<Matrix> sigma_coeff;
    SolverOptions options;
};

ProblemFile load_problem_file(const std::string& path);
void save_problem_file(const std::string& path, const ProblemFile& pf);

/// Solved interpolant with certification values; carries the prior and the
/// congruence scale so the spectral factor can be reconstructed.
struct SolutionFile {
    StructureSpec spec;
    Matrix A, B, R, G;
    Matrix sigma_coeff;
    Matrix scale;
    Vector P_eigenvalues;
    int rank_P = 0;
    CertificationReport report;
    int continuation_steps = 0;
};

SolutionFile load_solution_file(const std::string& path);
void save_solution_file(const std::string& path, const SolutionFile& sf);

SolutionFile make_solution_file(const CeeSolution& solution, const CertificationReport& report,
                                const Matrix& scale);

/// Stable spectral-factor system for simulation and as reduction truth.
struct SystemFile {
    StructureSpec spec;
    Matrix A_coeff;
    Matrix sigma_coeff;
    Matrix R;
};

SystemFile load_system_file(const std::string& path);
void save_system_file(const std::string& path, const SystemFile& sf);

CovarianceSequence load_covariances_file(const std::string& path);
void save_covariances_file(const std::string& path, const CovarianceSequence& covs);

/// Observed output series: { "ell": .., "samples": [[..], ..] }.
TimeSeries load_series_file(const std::string& path, int& ell_out);

/// A "sigma file" holds just { "indices": [...], "coeff": [[..]] }.
std::pair<StructureSpec, Matrix> load_sigma_file(const std::string& path, int ell);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cee
