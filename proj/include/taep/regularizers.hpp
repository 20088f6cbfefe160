#pragma once

#include <cstddef>
#include <vector>

#include "taep/core_model.hpp"

namespace taep {

// Block-structured transfer coupling over the ordered label set: zero on the
// seen-seen block, a constant negative coupling on the seen-unseen blocks,
// and a hollow constant unseen-unseen block.
struct TransferQ {
    Matrix q;  // L × L
    std::size_t seen_count = 0;
    std::size_t unseen_count = 0;
};

// Normalized Laplacian of an auxiliary label-similarity graph.
struct AuxLaplacian {
    Matrix q_aux;                // L × L, positive semidefinite
    std::vector<double> degree;  // row sums of R, strictly positive
};

TransferQ build_transfer_q(std::size_t seen_count, std::size_t unseen_count);

AuxLaplacian build_normalized_laplacian(const SimilarityMatrix& r);

// (γ/2)·tr(Uᵀ Mᵀ Q M U) + (λ/2)·tr(Uᵀ Mᵀ Qᴬ M U).
// The second term is dropped when q_aux is null.
double eval_penalty(const Matrix& u, const Matrix& m, const TransferQ& q,
                    const AuxLaplacian* q_aux, double gamma, double lambda);

}  // namespace taep
