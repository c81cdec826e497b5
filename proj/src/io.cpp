#include "cee/io.hpp"

#include <fstream>
#include <json.hpp>

namespace cee {

namespace {

using nlohmann::json;

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw Error(ErrorCode::io_error, what + " must be an array of rows");
    const std::size_t rows = j.size(), cols = j[0].size();
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            throw Error(ErrorCode::io_error, what + " has ragged rows");
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::io_error, path + ": " + e.what());
    }
}

void dump_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
    out << j.dump(2) << "\n";
}

template <typename T>
T field(const json& j, const char* name) {
    if (!j.contains(name))
        throw Error(ErrorCode::io_error, std::string("missing field '") + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::io_error, std::string("field '") + name + "': " + e.what());
    }
}

StructureSpec spec_from(const json& j, int ell, int n) {
    StructureSpec spec;
    spec.ell = ell;
    spec.n = n;
    spec.indices = field<std::vector<int>>(j, "indices");
    return spec;
}

SolverOptions options_from(const json& j) {
    SolverOptions opts;
    if (!j.is_object()) return opts;
    if (j.contains("newton_tol")) opts.newton_tol = j["newton_tol"].get<double>();
    if (j.contains("max_newton")) opts.max_newton = j["max_newton"].get<int>();
    if (j.contains("initial_step")) opts.initial_step = j["initial_step"].get<double>();
    if (j.contains("min_step")) opts.min_step = j["min_step"].get<double>();
    if (j.contains("max_steps")) opts.max_steps = j["max_steps"].get<int>();
    if (j.contains("rank_tol")) opts.rank_tol = j["rank_tol"].get<double>();
    if (j.contains("grid")) opts.grid = j["grid"].get<int>();
    return opts;
}

}  // namespace

ProblemFile load_problem_file(const std::string& path) {
    json j = load_json(path);
    ProblemFile pf;
    pf.problem.ell = field<int>(j, "ell");
    pf.problem.nodes = field<std::vector<double>>(j, "nodes");
    pf.problem.multiplicities = field<std::vector<int>>(j, "multiplicities");

    pf.problem.values.resize(pf.problem.nodes.size());
    for (std::size_t i = 0; i < pf.problem.values.size(); ++i)
        pf.problem.values[i].resize(
            i < pf.problem.multiplicities.size() && pf.problem.multiplicities[i] > 0
                ? pf.problem.multiplicities[i]
                : 0,
            Matrix());
    if (!j.contains("values") || !j["values"].is_array())
        throw Error(ErrorCode::io_error, "missing 'values' array");
    for (const auto& entry : j["values"]) {
        int nj = field<int>(entry, "j");
        int k = field<int>(entry, "k");
        if (nj < 0 || nj >= static_cast<int>(pf.problem.values.size()) || k < 0 ||
            k >= static_cast<int>(pf.problem.values[nj].size()))
            throw Error(ErrorCode::io_error, "value entry indices out of range");
        pf.problem.values[nj][k] = matrix_from(entry.at("matrix"), "value matrix");
    }
    for (const auto& node_vals : pf.problem.values)
        for (const auto& m : node_vals)
            if (m.size() == 0)
                throw Error(ErrorCode::io_error, "incomplete value set for a node");

    if (j.contains("sigma")) {
        const json& s = j["sigma"];
        Matrix coeff = matrix_from(s.at("coeff"), "sigma coefficient");
        pf.sigma_spec = spec_from(s, pf.problem.ell, pf.problem.n());
        pf.sigma_coeff = coeff;
    }
    if (j.contains("solver")) pf.options = options_from(j["solver"]);
    return pf;
}

void save_problem_file(const std::string& path, const ProblemFile& pf) {
    json j;
    j["ell"] = pf.problem.ell;
    j["nodes"] = pf.problem.nodes;
    j["multiplicities"] = pf.problem.multiplicities;
    json values = json::array();
    for (std::size_t nj = 0; nj < pf.problem.values.size(); ++nj)
        for (std::size_t k = 0; k < pf.problem.values[nj].size(); ++k)
            values.push_back({{"j", nj}, {"k", k}, {"matrix", to_json(pf.problem.values[nj][k])}});
    j["values"] = values;
    if (pf.sigma_spec && pf.sigma_coeff)
        j["sigma"] = {{"indices", pf.sigma_spec->indices}, {"coeff", to_json(*pf.sigma_coeff)}};
    j["solver"] = {{"newton_tol", pf.options.newton_tol},
                   {"max_newton", pf.options.max_newton},
                   {"initial_step", pf.options.initial_step},
                   {"min_step", pf.options.min_step},
                   {"max_steps", pf.options.max_steps},
                   {"rank_tol", pf.options.rank_tol},
                   {"grid", pf.options.grid}};
    dump_json(path, j);
}

SolutionFile load_solution_file(const std::string& path) {
    json j = load_json(path);
    SolutionFile sf;
    sf.spec = spec_from(j, field<int>(j, "ell"), field<int>(j, "n"));
    sf.A = matrix_from(j.at("A"), "A");
    sf.B = matrix_from(j.at("B"), "B");
    sf.R = matrix_from(j.at("R"), "R");
    sf.G = matrix_from(j.at("G"), "G");
    sf.sigma_coeff = matrix_from(j.at("sigma"), "sigma");
    sf.scale = matrix_from(j.at("scale"), "scale");
    auto eigs = field<std::vector<double>>(j, "P_eigenvalues");
    sf.P_eigenvalues = Eigen::Map<const Vector>(eigs.data(), eigs.size());
    sf.rank_P = field<int>(j, "rank_P");
    if (j.contains("residuals")) {
        const json& r = j["residuals"];
        sf.report.interp_residual = r.value("interpolation", 0.0);
        sf.report.spectral_residual = r.value("spectral", 0.0);
        sf.report.pr_min_eig = r.value("pr_min_eig", 0.0);
        sf.report.stable_A = r.value("stable_A", false);
        sf.report.pass = r.value("pass", false);
        sf.report.rank_P = sf.rank_P;
    }
    sf.continuation_steps = j.value("continuation_steps", 0);
    return sf;
}

void save_solution_file(const std::string& path, const SolutionFile& sf) {
    json j;
    j["ell"] = sf.spec.ell;
    j["n"] = sf.spec.n;
    j["indices"] = sf.spec.indices;
    j["A"] = to_json(sf.A);
    j["B"] = to_json(sf.B);
    j["R"] = to_json(sf.R);
    j["G"] = to_json(sf.G);
    j["sigma"] = to_json(sf.sigma_coeff);
    j["scale"] = to_json(sf.scale);
    std::vector<double> eigs(sf.P_eigenvalues.data(),
                             sf.P_eigenvalues.data() + sf.P_eigenvalues.size());
    j["P_eigenvalues"] = eigs;
    j["rank_P"] = sf.rank_P;
    j["residuals"] = {{"interpolation", sf.report.interp_residual},
                      {"spectral", sf.report.spectral_residual},
                      {"pr_min_eig", sf.report.pr_min_eig},
                      {"stable_A", sf.report.stable_A},
                      {"pass", sf.report.pass}};
    j["continuation_steps"] = sf.continuation_steps;
    dump_json(path, j);
}

SolutionFile make_solution_file(const CeeSolution& solution, const CertificationReport& report,
                                const Matrix& scale) {
    SolutionFile sf;
    sf.spec = solution.A.spec();
    sf.A = solution.A.coeff();
    sf.B = solution.B.coeff();
    sf.R = solution.R;
    sf.G = solution.G;
    sf.sigma_coeff = solution.Sigma.coeff();
    sf.scale = scale;
    sf.P_eigenvalues = symmetric_eigenvalues(solution.P);
    sf.rank_P = solution.rank_P;
    sf.report = report;
    sf.continuation_steps = static_cast<int>(solution.trace.lambdas.size()) - 1;
    return sf;
}

SystemFile load_system_file(const std::string& path) {
    json j = load_json(path);
    SystemFile sf;
    sf.spec = spec_from(j, field<int>(j, "ell"), field<int>(j, "n"));
    sf.A_coeff = matrix_from(j.at("A"), "A");
    sf.sigma_coeff = matrix_from(j.at("sigma"), "sigma");
    sf.R = j.contains("R") ? matrix_from(j.at("R"), "R")
                           : Matrix::Identity(sf.spec.ell, sf.spec.ell);
    return sf;
}

void save_system_file(const std::string& path, const SystemFile& sf) {
    json j;
    j["ell"] = sf.spec.ell;
    j["n"] = sf.spec.n;
    j["indices"] = sf.spec.indices;
    j["A"] = to_json(sf.A_coeff);
    j["sigma"] = to_json(sf.sigma_coeff);
    j["R"] = to_json(sf.R);
    dump_json(path, j);
}

CovarianceSequence load_covariances_file(const std::string& path) {
    json j = load_json(path);
    CovarianceSequence covs;
    covs.ell = field<int>(j, "ell");
    covs.source = field<std::string>(j, "source") == "exact"
                      ? CovarianceSequence::Source::exact
                      : CovarianceSequence::Source::estimated;
    if (!j.contains("lags") || !j["lags"].is_array())
        throw Error(ErrorCode::io_error, "missing 'lags' array");
    for (const auto& lag : j["lags"]) covs.lags.push_back(matrix_from(lag, "lag"));
    return covs;
}

void save_covariances_file(const std::string& path, const CovarianceSequence& covs) {
    json j;
    j["ell"] = covs.ell;
    j["source"] = covs.source == CovarianceSequence::Source::exact ? "exact" : "estimated";
    json lags = json::array();
    for (const auto& lag : covs.lags) lags.push_back(to_json(lag));
    j["lags"] = lags;
    dump_json(path, j);
}

TimeSeries load_series_file(const std::string& path, int& ell_out) {
    json j = load_json(path);
    ell_out = field<int>(j, "ell");
    TimeSeries series;
    if (!j.contains("samples") || !j["samples"].is_array())
        throw Error(ErrorCode::io_error, "missing 'samples' array");
    for (const auto& row : j["samples"]) {
        auto vals = row.get<std::vector<double>>();
        if (static_cast<int>(vals.size()) != ell_out)
            throw Error(ErrorCode::io_error, "sample width does not match ell");
        series.samples.push_back(Eigen::Map<const Vector>(vals.data(), vals.size()));
    }
    return series;
}

std::pair<StructureSpec, Matrix> load_sigma_file(const std::string& path, int ell) {
    json j = load_json(path);
    Matrix coeff = matrix_from(j.at("coeff"), "sigma coefficient");
    StructureSpec spec;
    spec.ell = ell;
    spec.indices = field<std::vector<int>>(j, "indices");
    spec.n = static_cast<int>(coeff.rows()) / ell;
    return {spec, coeff};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
    out << content;
}

}  // namespace cee
