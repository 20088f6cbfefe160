#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "taep/eigen_solver.hpp"
#include "taep/kernels.hpp"
#include "taep/rng.hpp"

using namespace taep;
namespace linalg = taep::linalg;

namespace {

Matrix random_symmetric(std::size_t n, SplitMix64& rng) {
    Matrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = rng.next_gaussian();
            s(i, j) = v;
            s(j, i) = v;
        }
    return s;
}

// Closed-form eigenvalues of a symmetric 3×3 matrix (trigonometric method on
// the characteristic polynomial) — independent of the Jacobi path.
std::vector<double> eigenvalues_3x3(const Matrix& a) {
    const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
    std::vector<double> eig(3);
    if (p1 == 0.0) {
        eig = {a(0, 0), a(1, 1), a(2, 2)};
    } else {
        const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
        const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                          (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
        const double p = std::sqrt(p2 / 6.0);
        Matrix b = a;
        for (std::size_t i = 0; i < 3; ++i) b(i, i) -= q;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) b(i, j) /= p;
        const double det_b =
            b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
            b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
            b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
        const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        eig[0] = q + 2.0 * p * std::cos(phi);
        eig[2] = q + 2.0 * p * std::cos(phi + 2.0 * 3.14159265358979323846 / 3.0);
        eig[1] = 3.0 * q - eig[0] - eig[2];
    }
    std::sort(eig.begin(), eig.end(), std::greater<>());
    return eig;
}

double orthonormality_defect(const Matrix& u) {
    Matrix gram = linalg::matmul_at_b(u, u);
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
    return linalg::frobenius_norm(gram);
}

// Applies the solver's column-sign convention to an external vector set.
void canonicalize_signs(Matrix& u) {
    for (std::size_t c = 0; c < u.cols(); ++c) {
        double best = 0.0;
        std::size_t best_row = 0;
        for (std::size_t i = 0; i < u.rows(); ++i)
            if (std::abs(u(i, c)) > best) {
                best = std::abs(u(i, c));
                best_row = i;
            }
        if (u(best_row, c) < 0.0)
            for (std::size_t i = 0; i < u.rows(); ++i) u(i, c) = -u(i, c);
    }
}

Matrix random_orthonormal(std::size_t m, std::size_t r, SplitMix64& rng) {
    Matrix v(m, r);
    for (std::size_t c = 0; c < r; ++c) {
        std::vector<double> col(m);
        for (auto& x : col) x = rng.next_gaussian();
        for (std::size_t prev = 0; prev < c; ++prev) {
            double proj = 0.0;
            for (std::size_t i = 0; i < m; ++i) proj += col[i] * v(i, prev);
            for (std::size_t i = 0; i < m; ++i) col[i] -= proj * v(i, prev);
        }
        const double norm = std::sqrt(linalg::squared_norm(col));
        for (std::size_t i = 0; i < m; ++i) v(i, c) = col[i] / norm;
    }
    return v;
}

}  // namespace

TEST_CASE("diagonal matrix eigenstructure") {
    Matrix s(3, 3);
    s(0, 0) = 3;
    s(1, 1) = 1;
    s(2, 2) = 2;
    const EigenResult result = top_r_eigenvectors(s, 2);
    REQUIRE(result.values.size() == 2);
    CHECK(result.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(result.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(result.vectors(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(result.vectors(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(result.vectors(2, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("identity ties break deterministically to the first axis") {
    const EigenResult result = top_r_eigenvectors(Matrix::identity(3), 1);
    CHECK(result.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(result.vectors(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(result.vectors(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(result.vectors(2, 0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("full-rank trace identity") {
    SplitMix64 rng(17);
    const Matrix s = random_symmetric(6, rng);
    const EigenResult result = top_r_eigenvectors(s, 6);
    const Matrix su = linalg::matmul(s, result.vectors);
    const double projected = linalg::hadamard_sum(result.vectors, su);
    double trace = 0.0;
    for (std::size_t i = 0; i < 6; ++i) trace += s(i, i);
    CHECK(projected == doctest::Approx(trace).epsilon(1e-10));
}

TEST_CASE("orthonormality, residuals, and sorted values on random matrices") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t m = 2 + (rng.next_u64() % 49);
        const std::size_t r = 1 + (rng.next_u64() % m);
        const Matrix s = random_symmetric(m, rng);
        const EigenResult result = top_r_eigenvectors(s, r);
        const double scale = linalg::frobenius_norm(s);

        CHECK(orthonormality_defect(result.vectors) <= 1e-10);
        for (std::size_t k = 1; k < r; ++k) CHECK(result.values[k - 1] >= result.values[k]);

        const Matrix su = linalg::matmul(s, result.vectors);
        for (std::size_t k = 0; k < r; ++k) {
            double residual_sq = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double diff = su(i, k) - result.values[k] * result.vectors(i, k);
                residual_sq += diff * diff;
            }
            CHECK(std::sqrt(residual_sq) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("projected trace attains the Ky Fan maximum") {
    SplitMix64 rng(29);
    const Matrix s = random_symmetric(10, rng);
    const std::size_t r = 3;
    const EigenResult result = top_r_eigenvectors(s, r);
    const double attained =
        linalg::hadamard_sum(result.vectors, linalg::matmul(s, result.vectors));
    const double top_sum = std::accumulate(result.values.begin(), result.values.end(), 0.0);
    CHECK(attained == doctest::Approx(top_sum).epsilon(1e-8));
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix v = random_orthonormal(10, r, rng);
        const double other = linalg::hadamard_sum(v, linalg::matmul(s, v));
        CHECK(other <= attained + 1e-8);
    }
}

TEST_CASE("eigenvalues agree with the closed-form 3x3 oracle") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix s = random_symmetric(3, rng);
        const EigenResult result = top_r_eigenvectors(s, 3);
        const std::vector<double> oracle = eigenvalues_3x3(s);
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(std::abs(result.values[k] - oracle[k]) <= 1e-7);
    }
}

TEST_CASE("result is invariant to symmetric permutation") {
    SplitMix64 rng(37);
    const std::size_t m = 8;
    const Matrix s = random_symmetric(m, rng);
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = m; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_u64() % i]);

    Matrix permuted(m, m);  // permuted = PᵀSP with P e_k = e_perm[k]
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) permuted(i, j) = s(perm[i], perm[j]);

    const std::size_t r = 4;
    const EigenResult base = top_r_eigenvectors(s, r);
    const EigenResult moved = top_r_eigenvectors(permuted, r);

    Matrix expected(m, r);  // Pᵀ applied to the base vectors
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < r; ++k) expected(i, k) = base.vectors(perm[i], k);
    canonicalize_signs(expected);

    for (std::size_t k = 0; k < r; ++k) {
        CHECK(std::abs(base.values[k] - moved.values[k]) <= 1e-8);
        for (std::size_t i = 0; i < m; ++i)
            CHECK(std::abs(moved.vectors(i, k) - expected(i, k)) <= 1e-7);
    }
}

TEST_CASE("input checking") {
    SplitMix64 rng(41);
    Matrix asym = random_symmetric(4, rng);
    asym(0, 1) += 1.0;
    CHECK_THROWS_AS(top_r_eigenvectors(asym, 2), std::invalid_argument);
    const Matrix s = random_symmetric(4, rng);
    CHECK_THROWS_AS(top_r_eigenvectors(s, 0), std::invalid_argument);
    CHECK_THROWS_AS(top_r_eigenvectors(s, 5), std::invalid_argument);
    CHECK_THROWS_AS(top_r_eigenvectors(Matrix(3, 4, 1.0), 1), std::invalid_argument);
}
