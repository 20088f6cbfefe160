#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "taep/matrix.hpp"

namespace taep {

// Per-instance dual subproblem: minimize ½ zᵀHz + fᵀz subject to
//   z_c ≥ 0 for positive labels, z_c ≤ 0 for negative labels,
//   Σ_pos z_c ≤ 1, Σ_neg (−z_c) ≤ 1.
struct RowQP {
    Matrix h;                                 // L^s × L^s, symmetric PSD
    std::vector<double> f;                    // L^s
    std::vector<std::uint8_t> positive_mask;  // instance's label row
    std::size_t instance_index = 0;
};

// Builds the subproblem for instance i with row i of psi treated as zero, so
// placing the solution into that row is an exact blockwise dual ascent step.
RowQP assemble_row_qp(std::size_t i, const Matrix& x, const Matrix& y, const Matrix& psi,
                      const Matrix& u, const Matrix& m_seen, double beta);

// Accelerated projected gradient with exact feasibility projection. Returns
// once the stationarity residual drops to `tolerance`; beyond the iteration
// cap it throws QpConvergenceError carrying the best feasible iterate.
std::vector<double> solve_row_qp(const RowQP& qp, double tolerance, int max_iterations = 10000);

// Exact reference solver enumerating every active-set combination of the
// ≤ 2·L^s + 2 constraints; refuses problems with more than six labels. Kept
// independent of the projected-gradient path it checks.
std::vector<double> oracle_solve_row_qp(const RowQP& qp);

// Projects z in place onto the feasible set; the result satisfies the sign
// constraints and both sum caps exactly.
void project_row_feasible(std::vector<double>& z, const std::vector<std::uint8_t>& positive_mask);

double row_qp_objective(const RowQP& qp, const std::vector<double>& z);

// ‖z − P(z − (Hz + f))‖_∞, the projected-gradient fixed-point residual; zero
// exactly at KKT points.
double row_qp_kkt_residual(const RowQP& qp, const std::vector<double>& z);

}  // namespace taep
