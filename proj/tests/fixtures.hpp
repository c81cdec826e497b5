#pragma once

#include <vector>

#include "cee/matpoly.hpp"
#include "cee/problem.hpp"

namespace fixtures {

using cee::InterpolationProblem;
using cee::Matrix;
using cee::StructureSpec;

// 2x2 two-node problem with a derivative constraint at z = 0.5.
inline InterpolationProblem np2x2_problem() {
    InterpolationProblem p;
    p.ell = 2;
    p.nodes = {0.0, 0.5};
    p.multiplicities = {1, 2};
    p.values.resize(2);
    p.values[0].push_back(0.5 * Matrix::Identity(2, 2));
    Matrix F05(2, 2), dF05(2, 2);
    F05 << 1.0, 0.0, 0.0, 0.4;
    dF05 << 2.0, 0.1, 0.0, 0.1;
    p.values[1] = {F05, dF05};
    return p;
}

inline StructureSpec np2x2_spec() { return {2, 2, {2, 2}}; }

inline Matrix np2x2_sigma() {
    Matrix s(4, 2);
    s << 1.0, 0.3,
         0.2, 0.3,
         0.1, 0.4,
         0.7, 0.2;
    return s;
}

// Reference coefficients for the np2x2 fixture with the prior above.
inline Matrix np2x2_solution_A() {
    Matrix a(4, 2);
    a << 0.9467, -0.1737,
         0.3603, 0.3583,
        -0.0445, 1.0925,
         0.2147, 0.7364;
    return a;
}

inline Matrix np2x2_solution_B() {
    Matrix b(4, 2);
    b << -0.0533, 0.2263,
         -0.3517, -0.2893,
         -0.2445, 0.0925,
          0.2406, -0.9739;
    return b;
}

// 2x2 covariance-extension data: three lags at the origin.
inline InterpolationProblem covext2x2_problem() {
    InterpolationProblem p;
    p.ell = 2;
    p.nodes = {0.0};
    p.multiplicities = {3};
    Matrix C1(2, 2), C2half(2, 2);
    C1 << -0.5, 0.2, -0.1, -0.5;
    C2half << 0.1, -0.6, 0.1, -0.3;  // second derivative divided by 2
    p.values.resize(1);
    p.values[0] = {0.5 * Matrix::Identity(2, 2), C1, C2half};
    return p;
}

// Monic scalar polynomial from its roots: coefficients c_1..c_n of
// z^n + c_1 z^{n-1} + ... + c_n.
inline std::vector<double> poly_from_roots(const std::vector<double>& roots) {
    std::vector<double> c{1.0};
    for (double r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k >= 1; --k) c[k] -= r * c[k - 1];
    }
    return {c.begin() + 1, c.end()};
}

// Coefficient matrix of sigma(z) * I_ell for a monic scalar sigma.
inline Matrix scalar_prior(const std::vector<double>& coeffs, int ell) {
    const int n = static_cast<int>(coeffs.size());
    Matrix m = Matrix::Zero(n * ell, ell);
    for (int i = 0; i < ell; ++i)
        for (int k = 0; k < n; ++k) m(i * n + k, i) = coeffs[k];
    return m;
}

// 10-state 2x2 reduction test system: sigma(z) I with roots
// {0.1, 0.3, 0.6, -0.2, -0.95} and a fixed stable numerator pattern.
inline StructureSpec model10_spec() { return {2, 5, {5, 5}}; }

inline Matrix model10_A() {
    Matrix a(10, 2);
    a << -0.11, -0.02,
         -0.08, -0.15,
          0.05,  0.10,
         -0.05, -0.09,
         -0.13, -0.09,
          0.11,  0.07,
          0.09,  0.19,
         -0.03, -0.03,
         -0.10, -0.13,
          0.12,  0.05;
    return a;
}

inline std::vector<double> model10_sigma_roots() { return {0.1, 0.3, 0.6, -0.2, -0.95}; }

inline Matrix model10_sigma() { return scalar_prior(poly_from_roots(model10_sigma_roots()), 2); }

// Reduced prior: the sigma roots at 0.6 and -0.2 removed.
inline std::vector<double> model10_reduced_roots() { return {0.1, 0.3, -0.95}; }

inline Matrix model10_reduced_sigma() {
    return scalar_prior(poly_from_roots(model10_reduced_roots()), 2);
}

// Flat-valued problem (all data I/2) on freshly drawn distinct nodes; only
// the node geometry matters for structural tests.
inline InterpolationProblem random_node_problem(cee::Rng& rng, int ell, int n) {
    InterpolationProblem p;
    p.ell = ell;
    p.nodes = {0.0};
    while (static_cast<int>(p.nodes.size()) < n + 1) {
        double z = rng.uniform(-0.9, 0.9);
        bool fresh = true;
        for (double zj : p.nodes)
            if (std::abs(z - zj) < 1e-3) fresh = false;
        if (fresh) p.nodes.push_back(z);
    }
    p.multiplicities.assign(n + 1, 1);
    p.values.resize(n + 1);
    for (int j = 0; j <= n; ++j)
        p.values[j] = {0.5 * Matrix::Identity(ell, ell)};
    return p;
}

}  // namespace fixtures
