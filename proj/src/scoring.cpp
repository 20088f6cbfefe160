#include "taep/scoring.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "taep/kernels.hpp"

namespace taep {

std::vector<double> score(const ModelParams& model, std::span<const double> x,
                          const Matrix& m_candidates) {
    if (x.size() != model.w.rows())
        throw std::invalid_argument("score: feature length does not match the model");
    if (m_candidates.cols() != model.u.rows())
        throw std::invalid_argument("score: embedding width does not match the model");

    const std::vector<double> xw = linalg::matvec_at(model.w, x);      // r
    const Matrix projected = linalg::matmul(m_candidates, model.u);    // k × r
    return linalg::matvec(projected, xw);
}

double threshold(const ModelParams& model, std::span<const double> x) {
    if (x.size() != model.w0.size())
        throw std::invalid_argument("threshold: feature length does not match the model");
    return linalg::dot(x, model.w0);
}

namespace {

Prediction predict_against(const ModelParams& model, std::span<const double> x,
                           const Matrix& m_candidates, std::size_t first_global_index) {
    Prediction out;
    out.scores = score(model, x, m_candidates);
    out.threshold = threshold(model, x);

    const std::size_t k = out.scores.size();
    out.candidates.resize(k);
    std::iota(out.candidates.begin(), out.candidates.end(), first_global_index);

    out.ranking.resize(k);
    std::iota(out.ranking.begin(), out.ranking.end(), std::size_t{0});
    std::stable_sort(out.ranking.begin(), out.ranking.end(),
                     [&out](std::size_t a, std::size_t b) { return out.scores[a] > out.scores[b]; });

    out.positive.resize(k);
    for (std::size_t c = 0; c < k; ++c)
        out.positive[c] = out.scores[c] > out.threshold ? 1 : 0;
    return out;
}

}  // namespace

Prediction predict(const ModelParams& model, std::span<const double> x, const LabelSpace& labels,
                   PredictionMode mode) {
    if (mode == PredictionMode::unseen_only) {
        if (labels.unseen_count == 0)
            throw std::invalid_argument("predict: the label space has no unseen labels");
        return predict_against(model, x, labels.unseen_embeddings(), labels.seen_count);
    }
    if (labels.total() == 0) throw std::invalid_argument("predict: empty label space");
    return predict_against(model, x, labels.embeddings, 0);
}

std::vector<Prediction> predict_all(const ModelParams& model, const Matrix& features,
                                    const LabelSpace& labels, PredictionMode mode) {
    std::vector<Prediction> predictions(features.rows());
    const std::int64_t n = static_cast<std::int64_t>(features.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        predictions[i] = predict(model, features.row(i), labels, mode);
    return predictions;
}

EvalResult evaluate_predictions(const std::vector<Prediction>& predictions, const Matrix& truth) {
    if (predictions.empty()) throw std::invalid_argument("evaluate_predictions: no predictions");
    if (predictions.size() != truth.rows())
        throw std::invalid_argument("evaluate_predictions: prediction count != truth rows");
    const std::size_t l = truth.cols();
    for (const auto& p : predictions) {
        if (p.candidates.size() != l)
            throw std::invalid_argument(
                "evaluate_predictions: candidate set does not match truth columns");
    }

    std::vector<std::vector<std::size_t>> rankings(predictions.size());
    Matrix binarized(predictions.size(), l, 0.0);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        rankings[i] = predictions[i].ranking;
        for (std::size_t c = 0; c < l; ++c)
            binarized(i, c) = predictions[i].positive[c] ? 1.0 : 0.0;
    }

    EvalResult out;
    out.miap = miap(rankings, truth, &out.miap_skipped);
    out.miap_evaluated = predictions.size() - out.miap_skipped;
    out.micro_f1 = micro_f1(binarized, truth);
    auto [macro, per_class] = macro_f1(binarized, truth);
    out.macro_f1 = macro;
    out.per_class_f1 = std::move(per_class);
    out.hamming = hamming(binarized, truth);
    return out;
}

}  // namespace taep
