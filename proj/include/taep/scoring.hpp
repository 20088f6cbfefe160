#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "taep/core_model.hpp"
#include "taep/metrics.hpp"

namespace taep {

enum class PredictionMode { unseen_only, all_labels };

// Scores for one instance over a candidate label set, with the calibrated
// threshold, the induced ranking, and the binarized positive set.
struct Prediction {
    std::vector<std::size_t> candidates;  // global label indices, ascending
    std::vector<double> scores;           // parallel to candidates
    double threshold = 0.0;
    std::vector<std::size_t> ranking;     // positions into candidates, by descending score
    std::vector<std::uint8_t> positive;   // parallel to candidates: score > threshold
};

// s_c = (x W) · (M_c U) for every row of m_candidates.
std::vector<double> score(const ModelParams& model, std::span<const double> x,
                          const Matrix& m_candidates);

// Calibrated decision threshold x · W0.
double threshold(const ModelParams& model, std::span<const double> x);

Prediction predict(const ModelParams& model, std::span<const double> x, const LabelSpace& labels,
                   PredictionMode mode);

std::vector<Prediction> predict_all(const ModelParams& model, const Matrix& features,
                                    const LabelSpace& labels, PredictionMode mode);

// Computes all ranking/decision metrics of a prediction batch against the
// truth matrix whose columns follow the candidate set in label order.
EvalResult evaluate_predictions(const std::vector<Prediction>& predictions, const Matrix& truth);

}  // namespace taep
