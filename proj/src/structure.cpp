#include "cee/structure.hpp"

#include <algorithm>
#include <numeric>

namespace cee {

int StructureSpec::t() const {
    return indices.empty() ? 0 : *std::max_element(indices.begin(), indices.end());
}

bool StructureSpec::equal_indices() const {
    return std::all_of(indices.begin(), indices.end(), [&](int ti) { return ti == n; });
}

void StructureSpec::validate() const {
    if (ell < 1 || n < 1) throw Error(ErrorCode::invalid_input, "ell and n must be positive");
    if (static_cast<int>(indices.size()) != ell)
        throw Error(ErrorCode::invalid_input, "need one observability index per row");
    for (int ti : indices)
        if (ti < 1) throw Error(ErrorCode::invalid_input, "observability indices must be positive");
    if (std::accumulate(indices.begin(), indices.end(), 0) != n * ell)
        throw Error(ErrorCode::invalid_input, "observability indices must sum to n*ell");
}

CanonicalMatrices build_canonical(const StructureSpec& spec) {
    spec.validate();
    const int ell = spec.ell, dim = spec.n * spec.ell, t = spec.t();

    CanonicalMatrices cm;
    cm.spec = spec;
    cm.J = Matrix::Zero(dim, dim);
    cm.H = Matrix::Zero(ell, dim);
    cm.N.assign(t, Matrix::Zero(ell, dim));

    int off = 0;
    for (int i = 0; i < ell; ++i) {
        const int ti = spec.indices[i];
        for (int r = 0; r + 1 < ti; ++r) cm.J(off + r, off + r + 1) = 1.0;
        cm.H(i, off) = 1.0;
        for (int k = 1; k <= ti; ++k) cm.N[k - 1](i, off + k - 1) = 1.0;
        off += ti;
    }

    cm.N_stack.resize(ell * t, dim);
    for (int k = 0; k < t; ++k) cm.N_stack.middleRows(k * ell, ell) = cm.N[k];
    return cm;
}

Matrix build_gamma(const CanonicalMatrices& canonical, const Matrix& sigma_coeff) {
    return canonical.J - sigma_coeff * canonical.H;
}

Matrix build_V(const Matrix& Z, const Vector& e, const StructureSpec& spec) {
    const int ell = spec.ell, t = spec.t();
    const Eigen::Index np1 = Z.rows();
    Matrix V(ell * np1, ell * t);
    Matrix I_ell = Matrix::Identity(ell, ell);
    Vector zke = e;
    for (int k = 1; k <= t; ++k) {
        zke = Z * zke;
        V.middleCols((k - 1) * ell, ell) = kron(zke, I_ell);
    }
    return V;
}

LFactor build_L(const Matrix& V, const CanonicalMatrices& canonical) {
    const int ell = canonical.spec.ell;
    const int dim = canonical.spec.n * ell;
    Matrix VN = V * canonical.N_stack;
    double scale = std::max(1.0, max_abs(VN));
    if (max_abs(Matrix(VN.topRows(ell))) > 1e-14 * scale)
        throw Error(ErrorCode::invalid_input,
                    "top rows of VN are nonzero; the first node must be 0");
    LFactor lf;
    lf.L = VN.bottomRows(dim);
    lf.condition = cond(lf.L);
    if (!(lf.condition < 1e12))
        throw Error(ErrorCode::singular_L,
                    "L singular: unequal observability indices or degenerate nodes");
    return lf;
}

InterpolationOperators build_u_U(const Matrix& Z, const Vector& e, const Matrix& That,
                                 const StructureSpec& spec,
                                 const CanonicalMatrices& canonical) {
    const int ell = spec.ell, n = spec.n, t = spec.t();
    const int dim = n * ell;

    Matrix V = build_V(Z, e, spec);
    LFactor lf = build_L(V, canonical);
    Eigen::PartialPivLU<Matrix> lu(lf.L);

    InterpolationOperators ops;
    ops.L = lf.L;
    ops.cond_L = lf.condition;
    ops.u = lu.solve(That.bottomRows(dim));

    // Powers of Z used by the operator part.
    std::vector<Matrix> Zpow(t + 1);
    Zpow[0] = Matrix::Identity(Z.rows(), Z.cols());
    for (int k = 1; k <= t; ++k) Zpow[k] = Zpow[k - 1] * Z;

    ops.Umat.resize(dim * ell, dim * ell);
    Matrix E = Matrix::Zero(dim, ell);
    for (int s = 0; s < ell; ++s) {
        for (int r = 0; r < dim; ++r) {
            E(r, s) = 1.0;
            Matrix y = Matrix::Zero(Z.rows() * ell, ell);
            for (int k = 1; k <= t; ++k) y += kron(Zpow[k], canonical.N[k - 1] * E) * That;
            ops.Umat.col(s * dim + r) = vec(lu.solve(y.bottomRows(dim)));
            E(r, s) = 0.0;
        }
    }
    return ops;
}

}  // namespace cee
