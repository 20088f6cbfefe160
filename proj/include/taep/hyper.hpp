#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "taep/scoring.hpp"
#include "taep/trainer.hpp"

namespace taep {

enum class TuneMetric { miap, micro_f1, macro_f1, hamming };

TuneMetric parse_tune_metric(const std::string& name);
std::string tune_metric_name(TuneMetric metric);

struct TuneGrid {
    std::vector<double> beta{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> gamma{0.01, 0.1, 1.0, 10.0};
    std::vector<double> lambda{0.01, 0.1, 1.0, 10.0};  // applied only when tuning lambda
};

struct TuneOptions {
    TuneGrid grid;
    TuneMetric metric = TuneMetric::miap;
    TrainConfig base;          // r, iteration caps, tolerances, seed
    bool tune_lambda = false;  // requires an auxiliary similarity matrix
};

struct TunePoint {
    double beta = 0.0;
    double gamma = 0.0;
    double lambda = 0.0;
    double score = 0.0;  // value of the chosen metric on the validation half
};

struct TuneResult {
    TunePoint selected;
    std::vector<TunePoint> evaluated;        // grid points in lexicographic order
    TrainResult final_model;                 // retrained on all seen classes
    std::size_t dropped_instances = 0;       // rows unusable in the half-split training
    std::size_t train_half = 0;              // number of classes in the training half
    std::size_t validation_half = 0;
};

// Splits the seen classes into two halves by label order (odd count: extra
// class to the training half), trains on the first half treating the second
// as unseen validation classes, picks the grid point maximizing the chosen
// metric (minimizing it for hamming), then retrains on all seen classes.
// Ties break lexicographically on (beta, gamma, lambda).
TuneResult tune(const Dataset& dataset, const LabelSpace& labels,
                const std::optional<SimilarityMatrix>& aux, const TuneOptions& options);

enum class SweepParam { gamma, lambda };

struct SweepRow {
    double factor = 0.0;
    double value = 0.0;  // the scaled hyperparameter itself
    EvalResult eval;
};

struct SweepResult {
    SweepParam param = SweepParam::gamma;
    std::vector<SweepRow> rows;
};

// Retrains with the chosen regularization weight scaled by each factor in
// {1, 0.1, 0.01, 0.001} and evaluates every model on the given test split.
SweepResult sweep(const Dataset& dataset, const LabelSpace& labels,
                  const std::optional<SimilarityMatrix>& aux, const TrainConfig& base,
                  SweepParam param, const Matrix& test_features, const Matrix& test_truth,
                  PredictionMode mode);

// Minimal standalone SVG line plot (used by the sweep subcommand).
void write_svg_line_plot(const std::filesystem::path& path, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& x_label,
                         const std::string& y_label, const std::string& title);

}  // namespace taep
