#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cee/matpoly.hpp"
#include "fixtures.hpp"

using namespace cee;

namespace {

MatrixPolynomial scalar_poly(const std::vector<double>& coeffs) {
    int n = static_cast<int>(coeffs.size());
    Matrix c(n, 1);
    for (int i = 0; i < n; ++i) c(i, 0) = coeffs[i];
    return MatrixPolynomial({1, n, {n}}, c);
}

}  // namespace

TEST_CASE("evaluation") {
    SUBCASE("zero coefficients give D(z)") {
        StructureSpec spec{2, 2, {2, 2}};
        MatrixPolynomial poly(spec, Matrix::Zero(4, 2));
        CHECK(max_abs(CMatrix(poly.eval(1.0) - CMatrix::Identity(2, 2))) == 0.0);
        CHECK(max_abs(CMatrix(poly.eval(0.0))) == 0.0);
    }
    SUBCASE("scalar quadratic") {
        auto poly = scalar_poly({-0.3, 0.4});
        Complex z(0.7, 0.1);
        CHECK(std::abs(poly.eval(z)(0, 0) - (z * z - 0.3 * z + 0.4)) < 1e-15);
    }
    SUBCASE("value at zero selects the last block rows") {
        MatrixPolynomial sigma(fixtures::np2x2_spec(), fixtures::np2x2_sigma());
        Matrix expected(2, 2);
        expected << 0.2, 0.3, 0.7, 0.2;
        CHECK(max_abs(CMatrix(sigma.eval(0.0) - expected.cast<Complex>())) < 1e-15);
        CHECK(max_abs(sigma.coefficient_block(2) - expected) == 0.0);
    }
}

TEST_CASE("reversed polynomial") {
    SUBCASE("zero coefficients reverse to the identity") {
        StructureSpec spec{2, 3, {3, 3}};
        MatrixPolynomial poly(spec, Matrix::Zero(6, 2));
        CHECK(max_abs(CMatrix(poly.eval_reversed(Complex(0.3, 0.4)) -
                              CMatrix::Identity(2, 2))) == 0.0);
    }
    SUBCASE("scalar reversal swaps the coefficient order") {
        auto poly = scalar_poly({-0.3, 0.4});
        Complex z(0.5, -0.2);
        CHECK(std::abs(poly.eval_reversed(z)(0, 0) - (1.0 - 0.3 * z + 0.4 * z * z)) < 1e-15);
    }
    SUBCASE("reversal identity D(z) P(1/z) and involution") {
        Rng rng(3);
        StructureSpec spec{2, 2, {2, 2}};
        MatrixPolynomial poly(spec, rng.normal_matrix(4, 2));
        for (int trial = 0; trial < 20; ++trial) {
            Complex z(rng.normal(), rng.normal());
            if (std::abs(z) < 0.1) continue;
            CMatrix D = CMatrix::Zero(2, 2);
            D(0, 0) = D(1, 1) = z * z;
            CHECK(max_abs(CMatrix(D * poly.eval(1.0 / z) - poly.eval_reversed(z))) <
                  1e-12 * (1.0 + std::abs(z) * std::abs(z)));
            // Reversing the reversed evaluation recovers the original.
            CHECK(max_abs(CMatrix(D * poly.eval_reversed(1.0 / z) - poly.eval(z))) <
                  1e-12 * (1.0 + std::abs(z) * std::abs(z)));
        }
    }
}

TEST_CASE("Schur stability through the companion form") {
    StructureSpec spec{2, 2, {2, 2}};
    CHECK(is_schur(MatrixPolynomial(spec, Matrix::Zero(4, 2))).stable);

    auto unstable = scalar_poly({-2.0});
    SchurResult r = is_schur(unstable);
    CHECK_FALSE(r.stable);
    CHECK(std::abs(r.eigenvalues(0) - Complex(2.0, 0.0)) < 1e-12);

    CHECK(is_schur(MatrixPolynomial(fixtures::np2x2_spec(), fixtures::np2x2_sigma())).stable);

    SUBCASE("determinant agreement with the companion form") {
        Rng rng(5);
        MatrixPolynomial poly(spec, 0.4 * rng.normal_matrix(4, 2));
        Matrix companion = poly.companion();
        for (int trial = 0; trial < 10; ++trial) {
            Complex z(rng.normal(), rng.normal());
            Complex det_poly = poly.eval(z).determinant();
            CMatrix resolvent = z * CMatrix::Identity(4, 4) - companion.cast<Complex>();
            Complex det_comp = resolvent.determinant();
            CHECK(std::abs(det_poly - det_comp) < 1e-10 * (1.0 + std::abs(det_comp)));
        }
    }

    SUBCASE("resolvent identity H (zI - F)^{-1} = P(z)^{-1} Pi(z)") {
        Rng rng(6);
        MatrixPolynomial poly(spec, 0.4 * rng.normal_matrix(4, 2));
        CanonicalMatrices cm = build_canonical(spec);
        Matrix F = poly.companion();
        for (int trial = 0; trial < 10; ++trial) {
            Complex z(1.0 + rng.uniform(), rng.normal());
            CMatrix lhs = cm.H.cast<Complex>() *
                          (z * CMatrix::Identity(4, 4) - F.cast<Complex>()).inverse();
            CMatrix Pi = CMatrix::Zero(2, 4);
            Pi(0, 0) = z;
            Pi(0, 1) = 1.0;
            Pi(1, 2) = z;
            Pi(1, 3) = 1.0;
            CMatrix rhs = poly.eval(z).inverse() * Pi;
            CHECK(max_abs(CMatrix(lhs - rhs)) < 1e-10);
        }
    }
}

TEST_CASE("positive-real grid check") {
    StructureSpec spec{2, 2, {2, 2}};
    Rng rng(8);
    Matrix c = 0.3 * rng.normal_matrix(4, 2);
    MatrixPolynomial A(spec, c);
    REQUIRE(is_schur(A).stable);

    SUBCASE("B = A means the constant half identity") {
        PosRealResult r = positive_real_check(A, A, 64);
        CHECK(r.ok);
        CHECK(r.min_eig == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("negated ratio fails") {
        PosRealResult r = detail::hermitian_min_on_grid(
            [&](Complex z) -> CMatrix {
                return -0.5 * A.eval(z).partialPivLu().solve(A.eval(z));
            },
            64);
        CHECK_FALSE(r.ok);
        CHECK(r.min_eig == doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("unstable denominator rejected") {
        auto bad = scalar_poly({-2.0});
        CHECK_THROWS_AS(positive_real_check(bad, bad, 16), Error);
    }
}

TEST_CASE("stacked coefficient matrices") {
    SUBCASE("zero coefficients") {
        StructureSpec spec{2, 2, {2, 2}};
        auto [S, M] = build_S_M(MatrixPolynomial(spec, Matrix::Zero(4, 2)));
        CHECK(max_abs(S - Matrix::Identity(6, 6)) == 0.0);
        Matrix expectedM = Matrix::Zero(6, 2);
        expectedM.topRows(2) = Matrix::Identity(2, 2);
        CHECK(max_abs(M - expectedM) == 0.0);
    }
    SUBCASE("scalar first-order") {
        auto poly = scalar_poly({0.7});
        auto [S, M] = build_S_M(poly);
        Matrix expS(2, 2), expM(2, 1);
        expS << 1.0, 0.7, 0.0, 1.0;
        expM << 1.0, 0.7;
        CHECK(max_abs(S - expS) == 0.0);
        CHECK(max_abs(M - expM) == 0.0);
    }
    SUBCASE("product stacks the nonnegative-power coefficients") {
        Rng rng(9);
        StructureSpec spec{2, 3, {3, 3}};
        MatrixPolynomial A(spec, rng.normal_matrix(6, 2));
        MatrixPolynomial B(spec, rng.normal_matrix(6, 2));
        auto [SA, MA] = build_S_M(A);
        auto [SB, MB] = build_S_M(B);
        Matrix prod = SA * MB;

        std::vector<Matrix> Ab{Matrix::Identity(2, 2)}, Bb{Matrix::Identity(2, 2)};
        for (int k = 1; k <= 3; ++k) {
            Ab.push_back(A.coefficient_block(k));
            Bb.push_back(B.coefficient_block(k));
        }
        for (int i = 0; i <= 3; ++i) {
            Matrix ci = Matrix::Zero(2, 2);
            for (int k = 0; k + i <= 3; ++k) ci += Ab[k] * Bb[k + i].transpose();
            CHECK(max_abs(Matrix(prod.middleRows(2 * i, 2) - ci)) < 1e-12);
        }
    }
    SUBCASE("unequal indices rejected") {
        StructureSpec spec{2, 2, {3, 1}};
        MatrixPolynomial poly(spec, Matrix::Zero(4, 2));
        CHECK_THROWS_AS(build_S_M(poly), Error);
    }
}

TEST_CASE("spectral identity residual") {
    StructureSpec spec{2, 2, {2, 2}};
    Rng rng(10);
    Matrix c = 0.3 * rng.normal_matrix(4, 2);
    MatrixPolynomial P(spec, c);

    SUBCASE("identical triples give zero") {
        CHECK(spectral_identity_residual(P, P, P, Matrix::Identity(2, 2), 64) < 1e-14);
    }
    SUBCASE("scalar normalization convention") {
        auto s = scalar_poly({0.4, -0.1});
        Matrix R(1, 1);
        R << 1.0;
        CHECK(spectral_identity_residual(s, s, s, R, 64) < 1e-14);
    }
    SUBCASE("mismatched data is flagged") {
        MatrixPolynomial other(spec, Matrix::Zero(4, 2));
        CHECK(spectral_identity_residual(P, P, other, Matrix::Identity(2, 2), 64) > 1e-3);
    }
}

TEST_CASE("coefficient block round trip") {
    StructureSpec spec{2, 3, {3, 3}};
    Rng rng(12);
    Matrix coeff = rng.normal_matrix(6, 2);
    MatrixPolynomial poly(spec, coeff);
    std::vector<Matrix> blocks;
    for (int k = 1; k <= 3; ++k) blocks.push_back(poly.coefficient_block(k));
    CHECK(max_abs(coeff_from_blocks(spec, blocks) - coeff) == 0.0);
}
