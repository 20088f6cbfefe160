#pragma once

#include <span>
#include <vector>

#include "taep/matrix.hpp"

namespace taep::linalg {

// Serial reference kernels, kept for testing the parallel versions and for
// the benchmark comparison.
namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b);              // A·B
Matrix matmul_at_b(const Matrix& a, const Matrix& b);         // Aᵀ·B
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);         // A·Bᵀ
std::vector<double> matvec(const Matrix& a, std::span<const double> x);     // A·x
std::vector<double> matvec_at(const Matrix& a, std::span<const double> x);  // Aᵀ·x

}  // namespace serial

// OpenMP-parallel kernels. Each output element is accumulated by exactly one
// thread in the same order as the serial loop, so results are bitwise
// identical to the serial kernels at any thread count (and with OpenMP
// disabled entirely).
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);
std::vector<double> matvec_at(const Matrix& a, std::span<const double> x);

// Small serial helpers shared by the solver modules.
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double frobenius_norm(const Matrix& a);
Matrix transpose(const Matrix& a);
void symmetrize(Matrix& a);                                    // a <- (a + aᵀ)/2
void add_scaled(Matrix& a, const Matrix& b, double s);         // a += s·b
double hadamard_sum(const Matrix& a, const Matrix& b);         // Σᵢⱼ aᵢⱼ·bᵢⱼ

}  // namespace taep::linalg
