#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "taep/matrix.hpp"

namespace taep {

struct EvalResult {
    double miap = 0.0;
    double micro_f1 = 0.0;
    double macro_f1 = 0.0;
    double hamming = 0.0;
    std::vector<double> per_class_f1;
    std::size_t miap_evaluated = 0;
    std::size_t miap_skipped = 0;  // instances with no true label in the evaluated set
};

// Mean of per-instance average precision over the ranked label lists.
// Instances without a true label are skipped; `skipped` reports how many.
double miap(const std::vector<std::vector<std::size_t>>& rankings, const Matrix& truth,
            std::size_t* skipped = nullptr);

// 2TP / (2TP + FP + FN) over all instance-label pairs; 0 when the
// denominator is 0.
double micro_f1(const Matrix& predictions, const Matrix& truth);

// Mean of the per-class F1 scores (each 0 when its denominator is 0).
std::pair<double, std::vector<double>> macro_f1(const Matrix& predictions, const Matrix& truth);

// Fraction of mismatched entries.
double hamming(const Matrix& predictions, const Matrix& truth);

}  // namespace taep
