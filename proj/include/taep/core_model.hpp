#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "taep/matrix.hpp"

namespace taep {

// Training data: instance features X (n×d) and binary label indicators Y.
// For training Y has one column per seen label; synthetic test splits carry
// the full truth over all labels instead.
struct Dataset {
    Matrix features;
    Matrix labels;
};

// Label universe: seen labels first (indices 0..seen_count-1), then unseen.
// `embeddings` is the L×m word-embedding matrix in that order.
struct LabelSpace {
    std::vector<std::string> names;
    std::size_t seen_count = 0;
    std::size_t unseen_count = 0;
    Matrix embeddings;

    std::size_t total() const { return seen_count + unseen_count; }
    Matrix seen_embeddings() const;
    Matrix unseen_embeddings() const;
};

// Learned projections plus the hyperparameters they were trained with.
struct ModelParams {
    Matrix w;                // d × r
    std::vector<double> w0;  // d
    Matrix u;                // m × r, orthonormal columns
    double beta = 1.0;
    double gamma = 0.0;
    double lambda = 0.0;
    std::size_t r = 0;
};

enum class Severity { warning, error };

struct Violation {
    Severity severity = Severity::error;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool empty() const { return violations.empty(); }
    bool has_errors() const;
    std::string to_string() const;
};

// Divides every row with nonzero Euclidean norm by that norm; zero rows pass
// through unchanged (they are flagged by validate, not here).
Matrix normalize_rows(const Matrix& matrix);

// Checks the Dataset/LabelSpace content invariants. Violations are returned
// as data; callers decide whether to stop.
ValidationReport validate(const Dataset& dataset, const LabelSpace& labels);

using SimilarityMatrix = Matrix;

}  // namespace taep
