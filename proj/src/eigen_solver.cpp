#include "taep/eigen_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "taep/errors.hpp"
#include "taep/kernels.hpp"

namespace taep {

namespace {

double off_diagonal_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) acc += a(i, j) * a(i, j);
    return std::sqrt(acc);
}

// One Jacobi rotation zeroing a(p, q); updates a (symmetric) and the
// accumulated eigenvector matrix v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
    const double apq = a(p, q);
    if (apq == 0.0) return;

    const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
    const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const double app = a(p, p);
    const double aqq = a(q, q);
    a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
    a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        if (k == p || k == q) continue;
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(p, k) = a(k, p);
        a(k, q) = s * akp + c * akq;
        a(q, k) = a(k, q);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double vkp = v(k, p);
        const double vkq = v(k, q);
        v(k, p) = c * vkp - s * vkq;
        v(k, q) = s * vkp + c * vkq;
    }
}

void fix_column_sign(Matrix& vectors, std::size_t col) {
    std::size_t lead = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < vectors.rows(); ++i) {
        const double mag = std::abs(vectors(i, col));
        if (mag > best) {
            best = mag;
            lead = i;
        }
    }
    if (vectors(lead, col) < 0.0)
        for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, col) = -vectors(i, col);
}

}  // namespace

EigenResult top_r_eigenvectors(const Matrix& s, std::size_t r) {
    const std::size_t n = s.rows();
    if (n == 0 || s.cols() != n)
        throw std::invalid_argument("top_r_eigenvectors: matrix must be square and nonempty");
    if (r == 0 || r > n)
        throw std::invalid_argument("top_r_eigenvectors: r must be in [1, m]");

    double max_abs = 0.0;
    double max_asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            max_abs = std::max(max_abs, std::abs(s(i, j)));
            max_asym = std::max(max_asym, std::abs(s(i, j) - s(j, i)));
        }
    }
    if (max_asym > 1e-8 * std::max(1.0, max_abs))
        throw std::invalid_argument("top_r_eigenvectors: matrix is not symmetric within 1e-8");

    Matrix a = s;
    linalg::symmetrize(a);
    Matrix v = Matrix::identity(n);

    const double threshold = 1e-12 * linalg::frobenius_norm(a);
    constexpr int kMaxSweeps = 100;
    bool converged = off_diagonal_norm(a) <= threshold;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
        converged = off_diagonal_norm(a) <= threshold;
    }
    if (!converged)
        throw NumericalError("top_r_eigenvectors: Jacobi sweeps did not reach the target "
                             "off-diagonal norm");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&a](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenResult out;
    out.values.resize(r);
    out.vectors = Matrix(n, r);
    for (std::size_t k = 0; k < r; ++k) {
        const std::size_t src = order[k];
        out.values[k] = a(src, src);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, src);
        fix_column_sign(out.vectors, k);
    }
    return out;
}

}  // namespace taep
