#pragma once

#include <cstddef>
#include <vector>

#include "taep/matrix.hpp"

namespace taep {

struct EigenResult {
    Matrix vectors;              // m × r, orthonormal columns
    std::vector<double> values;  // length r, non-increasing
};

// Top-r eigenpairs of a symmetric matrix via cyclic Jacobi sweeps, run to an
// off-diagonal norm of 1e-12·‖S‖_F before truncation. Deterministic: fixed
// sweep order, stable descending sort of the eigenvalues, and a fixed sign
// convention (each column's first entry of largest magnitude is positive).
EigenResult top_r_eigenvectors(const Matrix& s, std::size_t r);

}  // namespace taep
