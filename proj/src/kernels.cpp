#include "taep/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace taep::linalg {

namespace {

void check(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

// Work threshold below which spawning a parallel region is not worth it.
constexpr std::size_t kParallelCutoff = 16 * 1024;

}  // namespace

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
    check(a.cols() == b.rows(), "matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    check(a.rows() == b.rows(), "matmul_at_b: row counts differ");
    Matrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t k = 0; k < a.rows(); ++k) {
            const double aki = a(k, i);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
        }
    }
    return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    check(a.cols() == b.cols(), "matmul_a_bt: column counts differ");
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
            c(i, j) = acc;
        }
    }
    return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    check(a.cols() == x.size(), "matvec: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
        y[i] = acc;
    }
    return y;
}

std::vector<double> matvec_at(const Matrix& a, std::span<const double> x) {
    check(a.rows() == x.size(), "matvec_at: dimension mismatch");
    std::vector<double> y(a.cols(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, j) * x[k];
        y[j] = acc;
    }
    return y;
}

}  // namespace serial

Matrix matmul(const Matrix& a, const Matrix& b) {
    check(a.cols() == b.rows(), "matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    const std::int64_t n = static_cast<std::int64_t>(a.rows());
    const bool par = a.rows() * a.cols() * b.cols() >= kParallelCutoff;
#pragma omp parallel for if (par) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    check(a.rows() == b.rows(), "matmul_at_b: row counts differ");
    Matrix c(a.cols(), b.cols());
    const std::int64_t n = static_cast<std::int64_t>(a.cols());
    const bool par = a.rows() * a.cols() * b.cols() >= kParallelCutoff;
#pragma omp parallel for if (par) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < a.rows(); ++k) {
            const double aki = a(k, i);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
        }
    }
    return c;
}

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    check(a.cols() == b.cols(), "matmul_a_bt: column counts differ");
    Matrix c(a.rows(), b.rows());
    const std::int64_t n = static_cast<std::int64_t>(a.rows());
    const bool par = a.rows() * a.cols() * b.rows() >= kParallelCutoff;
#pragma omp parallel for if (par) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(j, k);
            c(i, j) = acc;
        }
    }
    return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    check(a.cols() == x.size(), "matvec: dimension mismatch");
    std::vector<double> y(a.rows(), 0.0);
    const std::int64_t n = static_cast<std::int64_t>(a.rows());
    const bool par = a.rows() * a.cols() >= kParallelCutoff;
#pragma omp parallel for if (par) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * x[k];
        y[i] = acc;
    }
    return y;
}

std::vector<double> matvec_at(const Matrix& a, std::span<const double> x) {
    check(a.rows() == x.size(), "matvec_at: dimension mismatch");
    std::vector<double> y(a.cols(), 0.0);
    const std::int64_t n = static_cast<std::int64_t>(a.cols());
    const bool par = a.rows() * a.cols() >= kParallelCutoff;
#pragma omp parallel for if (par) schedule(static)
    for (std::int64_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, j) * x[k];
        y[j] = acc;
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    check(a.size() == b.size(), "dot: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

double frobenius_norm(const Matrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * a.data()[i];
    return std::sqrt(acc);
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

void symmetrize(Matrix& a) {
    check(a.rows() == a.cols(), "symmetrize: matrix not square");
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i + 1; j < a.cols(); ++j) {
            const double v = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = v;
            a(j, i) = v;
        }
    }
}

void add_scaled(Matrix& a, const Matrix& b, double s) {
    check(a.rows() == b.rows() && a.cols() == b.cols(), "add_scaled: shape mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] += s * b.data()[i];
}

double hadamard_sum(const Matrix& a, const Matrix& b) {
    check(a.rows() == b.rows() && a.cols() == b.cols(), "hadamard_sum: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * b.data()[i];
    return acc;
}

}  // namespace taep::linalg
