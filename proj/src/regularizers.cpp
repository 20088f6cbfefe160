#include "taep/regularizers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "taep/errors.hpp"
#include "taep/kernels.hpp"

namespace taep {

TransferQ build_transfer_q(std::size_t seen_count, std::size_t unseen_count) {
    if (seen_count == 0 || unseen_count == 0)
        throw std::invalid_argument("build_transfer_q: seen and unseen counts must be positive");

    const std::size_t l = seen_count + unseen_count;
    const double ls = static_cast<double>(seen_count);
    const double lu = static_cast<double>(unseen_count);

    TransferQ out;
    out.seen_count = seen_count;
    out.unseen_count = unseen_count;
    out.q = Matrix(l, l, 0.0);

    const double cross = -1.0 / (2.0 * ls * lu);
    for (std::size_t s = 0; s < seen_count; ++s) {
        for (std::size_t u = 0; u < unseen_count; ++u) {
            out.q(s, seen_count + u) = cross;
            out.q(seen_count + u, s) = cross;
        }
    }
    if (unseen_count > 1) {
        const double within = 1.0 / (lu * (lu - 1.0));
        for (std::size_t u = 0; u < unseen_count; ++u)
            for (std::size_t v = 0; v < unseen_count; ++v)
                if (u != v) out.q(seen_count + u, seen_count + v) = within;
    }
    return out;
}

AuxLaplacian build_normalized_laplacian(const SimilarityMatrix& r) {
    if (r.rows() != r.cols() || r.rows() == 0)
        throw std::invalid_argument("build_normalized_laplacian: matrix must be square and nonempty");

    const std::size_t l = r.rows();
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            if (r(i, j) < 0.0) {
                std::ostringstream msg;
                msg << "similarity matrix has a negative entry at (" << i << ", " << j << ")";
                throw ValidationError(msg.str());
            }
            if (std::abs(r(i, j) - r(j, i)) > 1e-12 * std::max(1.0, std::abs(r(i, j)))) {
                std::ostringstream msg;
                msg << "similarity matrix is not symmetric at (" << i << ", " << j << ")";
                throw ValidationError(msg.str());
            }
        }
    }

    AuxLaplacian out;
    out.degree.resize(l, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < l; ++j) sum += r(i, j);
        if (sum <= 0.0) {
            std::ostringstream msg;
            msg << "isolated label in similarity graph: row " << i << " sums to zero";
            throw ValidationError(msg.str());
        }
        out.degree[i] = sum;
    }

    out.q_aux = Matrix(l, l, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
        const double di = std::sqrt(out.degree[i]);
        for (std::size_t j = 0; j < l; ++j) {
            const double dj = std::sqrt(out.degree[j]);
            out.q_aux(i, j) = (i == j ? 1.0 : 0.0) - r(i, j) / (di * dj);
        }
    }
    return out;
}

namespace {

// tr(Uᵀ Mᵀ A M U) for symmetric A.
double projected_trace(const Matrix& u, const Matrix& m, const Matrix& a) {
    const Matrix mu = linalg::matmul(m, u);       // L × r
    const Matrix amu = linalg::matmul(a, mu);     // L × r
    return linalg::hadamard_sum(mu, amu);
}

}  // namespace

double eval_penalty(const Matrix& u, const Matrix& m, const TransferQ& q,
                    const AuxLaplacian* q_aux, double gamma, double lambda) {
    if (m.rows() != q.q.rows())
        throw std::invalid_argument("eval_penalty: embedding rows do not match transfer matrix");
    if (m.cols() != u.rows())
        throw std::invalid_argument("eval_penalty: embedding columns do not match projection rows");
    if (lambda != 0.0 && q_aux == nullptr)
        throw std::invalid_argument("eval_penalty: lambda is nonzero but no auxiliary Laplacian given");

    double value = 0.0;
    if (gamma != 0.0) value += 0.5 * gamma * projected_trace(u, m, q.q);
    if (lambda != 0.0 && q_aux != nullptr) {
        if (q_aux->q_aux.rows() != m.rows())
            throw std::invalid_argument("eval_penalty: auxiliary Laplacian size mismatch");
        value += 0.5 * lambda * projected_trace(u, m, q_aux->q_aux);
    }
    return value;
}

}  // namespace taep
