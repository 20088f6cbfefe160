#include "taep/metrics.hpp"

#include <stdexcept>

namespace taep {

namespace {

void check_binary(const Matrix& m, const char* what) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double v = m.data()[i];
        if (v != 0.0 && v != 1.0)
            throw std::invalid_argument(std::string(what) + ": entries must be 0 or 1");
    }
}

void check_shapes(const Matrix& predictions, const Matrix& truth) {
    if (predictions.rows() == 0 || predictions.cols() == 0)
        throw std::invalid_argument("metrics: empty matrices");
    if (predictions.rows() != truth.rows() || predictions.cols() != truth.cols())
        throw std::invalid_argument("metrics: prediction and truth shapes differ");
    check_binary(predictions, "predictions");
    check_binary(truth, "truth");
}

}  // namespace

double miap(const std::vector<std::vector<std::size_t>>& rankings, const Matrix& truth,
            std::size_t* skipped) {
    if (truth.rows() == 0 || truth.cols() == 0)
        throw std::invalid_argument("miap: empty truth matrix");
    if (rankings.size() != truth.rows())
        throw std::invalid_argument("miap: ranking count does not match truth rows");
    check_binary(truth, "truth");

    const std::size_t l = truth.cols();
    double total = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped_count = 0;

    for (std::size_t i = 0; i < rankings.size(); ++i) {
        const auto& ranking = rankings[i];
        if (ranking.size() != l)
            throw std::invalid_argument("miap: ranking is not a total order over the label set");
        std::vector<bool> seen(l, false);
        for (const std::size_t c : ranking) {
            if (c >= l || seen[c])
                throw std::invalid_argument("miap: ranking is not a permutation of the label set");
            seen[c] = true;
        }

        std::size_t truth_count = 0;
        for (std::size_t c = 0; c < l; ++c)
            if (truth(i, c) == 1.0) ++truth_count;
        if (truth_count == 0) {
            ++skipped_count;
            continue;
        }

        std::size_t hits = 0;
        double precision_sum = 0.0;
        for (std::size_t rank = 0; rank < l; ++rank) {
            if (truth(i, ranking[rank]) == 1.0) {
                ++hits;
                precision_sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
            }
        }
        total += precision_sum / static_cast<double>(truth_count);
        ++evaluated;
    }

    if (skipped != nullptr) *skipped = skipped_count;
    return evaluated == 0 ? 0.0 : total / static_cast<double>(evaluated);
}

double micro_f1(const Matrix& predictions, const Matrix& truth) {
    check_shapes(predictions, truth);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool p = predictions.data()[i] == 1.0;
        const bool t = truth.data()[i] == 1.0;
        if (p && t)
            ++tp;
        else if (p && !t)
            ++fp;
        else if (!p && t)
            ++fn;
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

std::pair<double, std::vector<double>> macro_f1(const Matrix& predictions, const Matrix& truth) {
    check_shapes(predictions, truth);
    std::vector<double> per_class(predictions.cols(), 0.0);
    for (std::size_t c = 0; c < predictions.cols(); ++c) {
        std::size_t tp = 0;
        std::size_t fp = 0;
        std::size_t fn = 0;
        for (std::size_t i = 0; i < predictions.rows(); ++i) {
            const bool p = predictions(i, c) == 1.0;
            const bool t = truth(i, c) == 1.0;
            if (p && t)
                ++tp;
            else if (p && !t)
                ++fp;
            else if (!p && t)
                ++fn;
        }
        const double denom = static_cast<double>(2 * tp + fp + fn);
        per_class[c] = denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
    }
    double mean = 0.0;
    for (const double v : per_class) mean += v;
    mean /= static_cast<double>(per_class.size());
    return {mean, std::move(per_class)};
}

double hamming(const Matrix& predictions, const Matrix& truth) {
    check_shapes(predictions, truth);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions.data()[i] != truth.data()[i]) ++mismatches;
    return static_cast<double>(mismatches) / static_cast<double>(predictions.size());
}

}  // namespace taep
