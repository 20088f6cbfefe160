#include "taep/qp_row_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "taep/errors.hpp"
#include "taep/kernels.hpp"

namespace taep {

namespace {

void check_mask(const RowQP& qp) {
    const std::size_t n = qp.f.size();
    if (n == 0 || qp.h.rows() != n || qp.h.cols() != n || qp.positive_mask.size() != n)
        throw std::invalid_argument("row qp: inconsistent dimensions");
    std::size_t ones = 0;
    for (const auto m : qp.positive_mask) ones += m ? 1 : 0;
    if (ones == 0 || ones == n)
        throw std::invalid_argument("row qp: mask needs at least one positive and one negative");
}

// Projection of v onto {w ≥ 0, Σw ≤ 1} (Michelot-style sort algorithm for the
// simplex face). The returned coordinates satisfy both constraints exactly:
// negatives are clamped and the sum cap is enforced by rescaling.
void project_capped_simplex(std::vector<double>& v) {
    double clamped_sum = 0.0;
    for (double& x : v) {
        if (x < 0.0) x = 0.0;
        clamped_sum += x;
    }
    if (clamped_sum <= 1.0) return;

    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double prefix = 0.0;
    double tau = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        prefix += sorted[j];
        const double candidate = (prefix - 1.0) / static_cast<double>(j + 1);
        if (j + 1 == sorted.size() || sorted[j + 1] <= candidate) {
            tau = candidate;
            break;
        }
    }
    double sum = 0.0;
    for (double& x : v) {
        x = std::max(x - tau, 0.0);
        sum += x;
    }
    // The analytic projection sums to 1; rounding can leave the float sum a
    // few ulps above the cap, so rescale until it holds exactly.
    for (int guard = 0; guard < 8 && sum > 1.0; ++guard) {
        const double scale = 1.0 / sum;
        sum = 0.0;
        for (double& x : v) {
            x *= scale;
            sum += x;
        }
    }
    if (sum > 1.0) {
        // Last resort: take the excess out of the largest coordinate.
        std::size_t arg = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[arg]) arg = i;
        v[arg] = std::max(v[arg] - (sum - 1.0), 0.0);
    }
}

double objective(const Matrix& h, const std::vector<double>& f, const std::vector<double>& z) {
    const std::vector<double> hz = linalg::matvec(h, z);
    return 0.5 * linalg::dot(hz, z) + linalg::dot(f, z);
}

std::vector<double> gradient(const Matrix& h, const std::vector<double>& f,
                             const std::vector<double>& z) {
    std::vector<double> g = linalg::matvec(h, z);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += f[i];
    return g;
}

// Gaussian elimination with partial pivoting; returns false when a pivot
// falls below the singularity threshold.
bool solve_linear(Matrix a, std::vector<double> b, std::vector<double>& out) {
    const std::size_t n = a.rows();
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a.data()[i]));
    const double pivot_floor = 1e-14 * std::max(1.0, scale);

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a(row, col)) > std::abs(a(pivot, col))) pivot = row;
        if (std::abs(a(pivot, col)) < pivot_floor) return false;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a(row, col) / a(col, col);
            if (factor == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a(row, j) -= factor * a(col, j);
            b[row] -= factor * b[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double acc = b[row];
        for (std::size_t j = row + 1; j < n; ++j) acc -= a(row, j) * out[j];
        out[row] = acc / a(row, row);
    }
    return true;
}

}  // namespace

RowQP assemble_row_qp(std::size_t i, const Matrix& x, const Matrix& y, const Matrix& psi,
                      const Matrix& u, const Matrix& m_seen, double beta) {
    if (beta <= 0.0) throw std::invalid_argument("assemble_row_qp: beta must be positive");
    if (i >= x.rows()) throw std::invalid_argument("assemble_row_qp: instance index out of range");
    const std::size_t n = x.rows();
    const std::size_t ls = y.cols();
    if (y.rows() != n || psi.rows() != n || psi.cols() != ls || m_seen.rows() != ls ||
        m_seen.cols() != u.rows())
        throw std::invalid_argument("assemble_row_qp: inconsistent dimensions");

    // K = M^s U Uᵀ M^sᵀ + 11ᵀ, symmetrized against rounding drift.
    const Matrix p = linalg::matmul(m_seen, u);
    Matrix k = linalg::matmul_a_bt(p, p);
    for (std::size_t a = 0; a < k.size(); ++a) k.data()[a] += 1.0;
    linalg::symmetrize(k);

    // v = Ψᵀ X X_iᵀ with row i of Ψ zeroed before the update.
    const std::vector<double> g = linalg::matvec(x, x.row(i));
    std::vector<double> v(ls, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double gj = g[j];
        if (gj == 0.0) continue;
        for (std::size_t c = 0; c < ls; ++c) v[c] += psi(j, c) * gj;
    }
    const std::vector<double> kv = linalg::matvec(k, v);

    RowQP qp;
    qp.instance_index = i;
    qp.positive_mask.resize(ls);
    qp.f.resize(ls);
    for (std::size_t c = 0; c < ls; ++c) {
        qp.positive_mask[c] = y(i, c) == 1.0 ? 1 : 0;
        qp.f[c] = 1.0 - 2.0 * y(i, c) + kv[c] / beta;
    }
    const double sq = linalg::squared_norm(x.row(i));
    qp.h = k;
    for (std::size_t a = 0; a < qp.h.size(); ++a) qp.h.data()[a] *= sq / beta;
    return qp;
}

void project_row_feasible(std::vector<double>& z, const std::vector<std::uint8_t>& positive_mask) {
    if (z.size() != positive_mask.size())
        throw std::invalid_argument("project_row_feasible: length mismatch");

    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t c = 0; c < z.size(); ++c) (positive_mask[c] ? pos : neg).push_back(c);

    std::vector<double> part;
    part.reserve(std::max(pos.size(), neg.size()));

    part.clear();
    for (const std::size_t c : pos) part.push_back(z[c]);
    project_capped_simplex(part);
    for (std::size_t idx = 0; idx < pos.size(); ++idx) z[pos[idx]] = part[idx];

    part.clear();
    for (const std::size_t c : neg) part.push_back(-z[c]);
    project_capped_simplex(part);
    for (std::size_t idx = 0; idx < neg.size(); ++idx) z[neg[idx]] = -part[idx];
}

double row_qp_objective(const RowQP& qp, const std::vector<double>& z) {
    return objective(qp.h, qp.f, z);
}

double row_qp_kkt_residual(const RowQP& qp, const std::vector<double>& z) {
    std::vector<double> step = gradient(qp.h, qp.f, z);
    for (std::size_t c = 0; c < step.size(); ++c) step[c] = z[c] - step[c];
    project_row_feasible(step, qp.positive_mask);
    double res = 0.0;
    for (std::size_t c = 0; c < step.size(); ++c) res = std::max(res, std::abs(z[c] - step[c]));
    return res;
}

std::vector<double> solve_row_qp(const RowQP& qp, double tolerance, int max_iterations) {
    check_mask(qp);
    if (tolerance <= 0.0) throw std::invalid_argument("solve_row_qp: tolerance must be positive");
    if (max_iterations < 1)
        throw std::invalid_argument("solve_row_qp: iteration cap must be positive");

    const std::size_t n = qp.f.size();

    // Lipschitz bound: for symmetric H the spectral radius is at most the
    // max absolute row sum.
    double lipschitz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sum += std::abs(qp.h(i, j));
        lipschitz = std::max(lipschitz, row_sum);
    }

    if (lipschitz < 1e-300) {
        // Linear objective: the optimum sits on a vertex of each simplex.
        std::vector<double> z(n, 0.0);
        std::size_t best_pos = n;
        std::size_t best_neg = n;
        for (std::size_t c = 0; c < n; ++c) {
            if (qp.positive_mask[c]) {
                if (best_pos == n || qp.f[c] < qp.f[best_pos]) best_pos = c;
            } else {
                if (best_neg == n || qp.f[c] > qp.f[best_neg]) best_neg = c;
            }
        }
        if (best_pos < n && qp.f[best_pos] < 0.0) z[best_pos] = 1.0;
        if (best_neg < n && qp.f[best_neg] > 0.0) z[best_neg] = -1.0;
        return z;
    }

    const double step = 1.0 / lipschitz;
    std::vector<double> z(n, 0.0);
    std::vector<double> y = z;
    std::vector<double> best = z;
    double best_obj = objective(qp.h, qp.f, z);
    double prev_obj = best_obj;
    double t = 1.0;
    double last_residual = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < max_iterations; ++iter) {
        const std::vector<double> grad = gradient(qp.h, qp.f, y);
        std::vector<double> z_next(n);
        for (std::size_t c = 0; c < n; ++c) z_next[c] = y[c] - step * grad[c];
        project_row_feasible(z_next, qp.positive_mask);

        last_residual = row_qp_kkt_residual(qp, z_next);
        const double obj = objective(qp.h, qp.f, z_next);
        if (obj < best_obj) {
            best_obj = obj;
            best = z_next;
        }
        if (last_residual <= tolerance) return z_next;

        if (obj > prev_obj) {
            // Momentum restart keeps the iteration monotone enough to reach
            // tight residuals on ill-conditioned faces.
            t = 1.0;
            y = z_next;
        } else {
            const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
            const double momentum = (t - 1.0) / t_next;
            for (std::size_t c = 0; c < n; ++c)
                y[c] = z_next[c] + momentum * (z_next[c] - z[c]);
            t = t_next;
        }
        prev_obj = obj;
        z = z_next;
    }
    throw QpConvergenceError("solve_row_qp: iteration cap reached before the stationarity "
                             "residual met the tolerance",
                             best, last_residual);
}

std::vector<double> oracle_solve_row_qp(const RowQP& qp) {
    check_mask(qp);
    const std::size_t n = qp.f.size();
    if (n > 6)
        throw std::invalid_argument("oracle_solve_row_qp: enumeration limited to six labels");

    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t c = 0; c < n; ++c) (qp.positive_mask[c] ? pos : neg).push_back(c);

    constexpr double kRidge = 1e-10;
    constexpr double kFeasTol = 1e-9;

    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<double> best;

    const std::size_t combos = std::size_t{1} << (n + 2);
    for (std::size_t mask = 0; mask < combos; ++mask) {
        // Active rows: pinned coordinates, then either sum cap at equality.
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (std::size_t c = 0; c < n; ++c) {
            if (mask & (std::size_t{1} << c)) {
                std::vector<double> row(n, 0.0);
                row[c] = 1.0;
                rows.push_back(std::move(row));
                rhs.push_back(0.0);
            }
        }
        if (mask & (std::size_t{1} << n)) {
            std::vector<double> row(n, 0.0);
            for (const std::size_t c : pos) row[c] = 1.0;
            rows.push_back(std::move(row));
            rhs.push_back(1.0);
        }
        if (mask & (std::size_t{1} << (n + 1))) {
            std::vector<double> row(n, 0.0);
            for (const std::size_t c : neg) row[c] = -1.0;
            rows.push_back(std::move(row));
            rhs.push_back(1.0);
        }

        const std::size_t k = rows.size();
        Matrix kkt(n + k, n + k, 0.0);
        std::vector<double> b(n + k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) kkt(i, j) = qp.h(i, j);
            kkt(i, i) += kRidge;
            b[i] = -qp.f[i];
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t j = 0; j < n; ++j) {
                kkt(n + a, j) = rows[a][j];
                kkt(j, n + a) = rows[a][j];
            }
            b[n + a] = rhs[a];
        }

        std::vector<double> solution;
        if (!solve_linear(kkt, b, solution)) continue;

        std::vector<double> z(solution.begin(), solution.begin() + n);
        bool feasible = true;
        double pos_sum = 0.0;
        double neg_sum = 0.0;
        for (const std::size_t c : pos) {
            if (z[c] < -kFeasTol) feasible = false;
            pos_sum += z[c];
        }
        for (const std::size_t c : neg) {
            if (z[c] > kFeasTol) feasible = false;
            neg_sum += -z[c];
        }
        if (pos_sum > 1.0 + kFeasTol || neg_sum > 1.0 + kFeasTol) feasible = false;
        if (!feasible) continue;

        const double obj = objective(qp.h, qp.f, z);
        if (obj < best_obj) {
            best_obj = obj;
            best = std::move(z);
        }
    }

    if (best.empty())
        throw NumericalError("oracle_solve_row_qp: no feasible active-set candidate found");
    return best;
}

}  // namespace taep
