#include "taep/hyper.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "taep/errors.hpp"

namespace taep {

TuneMetric parse_tune_metric(const std::string& name) {
    if (name == "miap") return TuneMetric::miap;
    if (name == "micro_f1") return TuneMetric::micro_f1;
    if (name == "macro_f1") return TuneMetric::macro_f1;
    if (name == "hamming") return TuneMetric::hamming;
    throw std::invalid_argument("unknown metric '" + name +
                                "' (expected miap, micro_f1, macro_f1, or hamming)");
}

std::string tune_metric_name(TuneMetric metric) {
    switch (metric) {
        case TuneMetric::miap: return "miap";
        case TuneMetric::micro_f1: return "micro_f1";
        case TuneMetric::macro_f1: return "macro_f1";
        case TuneMetric::hamming: return "hamming";
    }
    return "?";
}

namespace {

double metric_value(const EvalResult& eval, TuneMetric metric) {
    switch (metric) {
        case TuneMetric::miap: return eval.miap;
        case TuneMetric::micro_f1: return eval.micro_f1;
        case TuneMetric::macro_f1: return eval.macro_f1;
        case TuneMetric::hamming: return eval.hamming;
    }
    return 0.0;
}

// Selection score: higher is better for every metric, so hamming is negated.
double selection_score(const EvalResult& eval, TuneMetric metric) {
    const double value = metric_value(eval, metric);
    return metric == TuneMetric::hamming ? -value : value;
}

Matrix take_columns(const Matrix& src, std::size_t begin, std::size_t count) {
    Matrix out(src.rows(), count);
    for (std::size_t i = 0; i < src.rows(); ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = src(i, begin + j);
    return out;
}

Matrix take_rows(const Matrix& src, const std::vector<std::size_t>& rows) {
    Matrix out(rows.size(), src.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < src.cols(); ++j) out(i, j) = src(rows[i], j);
    return out;
}

Matrix top_left_block(const Matrix& src, std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = src(i, j);
    return out;
}

}  // namespace

TuneResult tune(const Dataset& dataset, const LabelSpace& labels,
                const std::optional<SimilarityMatrix>& aux, const TuneOptions& options) {
    const std::size_t ls = labels.seen_count;
    if (ls < 2)
        throw std::invalid_argument("tune: need at least two seen classes to split");
    if (options.tune_lambda && !aux.has_value())
        throw std::invalid_argument("tune: lambda grid requires an auxiliary similarity matrix");
    if (options.grid.beta.empty() || options.grid.gamma.empty() ||
        (options.tune_lambda && options.grid.lambda.empty()))
        throw std::invalid_argument("tune: empty hyperparameter grid");

    // Seen classes split by label order; the odd class goes to the training half.
    const std::size_t half_a = (ls + 1) / 2;
    const std::size_t half_b = ls - half_a;

    LabelSpace inner_labels;
    inner_labels.seen_count = half_a;
    inner_labels.unseen_count = half_b;
    inner_labels.names.assign(labels.names.begin(), labels.names.begin() + ls);
    inner_labels.embeddings = Matrix(ls, labels.embeddings.cols());
    for (std::size_t i = 0; i < ls; ++i)
        for (std::size_t j = 0; j < labels.embeddings.cols(); ++j)
            inner_labels.embeddings(i, j) = labels.embeddings(i, j);

    // Instances must keep a positive and a negative label within the training
    // half; the rest are dropped from the inner training set.
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < dataset.labels.rows(); ++i) {
        std::size_t ones = 0;
        for (std::size_t c = 0; c < half_a; ++c) ones += dataset.labels(i, c) == 1.0 ? 1 : 0;
        if (ones > 0 && ones < half_a) kept.push_back(i);
    }

    Dataset inner;
    inner.features = take_rows(dataset.features, kept);
    inner.labels = take_columns(take_rows(dataset.labels, kept), 0, half_a);

    std::optional<SimilarityMatrix> inner_aux;
    if (aux.has_value()) inner_aux = top_left_block(*aux, ls);

    const Matrix validation_truth = take_columns(dataset.labels, half_a, half_b);

    TuneResult result;
    result.dropped_instances = dataset.labels.rows() - kept.size();
    result.train_half = half_a;
    result.validation_half = half_b;

    bool have_best = false;
    double best_score = 0.0;

    // Ascending grids + keep-first-strict-winner = lexicographic (β, γ, λ)
    // tie-breaking.
    std::vector<double> beta_grid = options.grid.beta;
    std::vector<double> gamma_grid = options.grid.gamma;
    std::vector<double> lambda_grid =
        options.tune_lambda ? options.grid.lambda : std::vector<double>{options.base.lambda};
    std::sort(beta_grid.begin(), beta_grid.end());
    std::sort(gamma_grid.begin(), gamma_grid.end());
    std::sort(lambda_grid.begin(), lambda_grid.end());

    for (const double beta : beta_grid) {
        for (const double gamma : gamma_grid) {
            for (const double lambda : lambda_grid) {
                TrainConfig config = options.base;
                config.beta = beta;
                config.gamma = gamma;
                config.lambda = lambda;

                const TrainResult trained =
                    train(inner, inner_labels, lambda != 0.0 ? inner_aux : std::nullopt, config);
                const std::vector<Prediction> predictions = predict_all(
                    trained.model, dataset.features, inner_labels, PredictionMode::unseen_only);
                const EvalResult eval = evaluate_predictions(predictions, validation_truth);

                TunePoint point{beta, gamma, lambda, metric_value(eval, options.metric)};
                result.evaluated.push_back(point);

                const double score = selection_score(eval, options.metric);
                if (!have_best || score > best_score) {
                    have_best = true;
                    best_score = score;
                    result.selected = point;
                }
            }
        }
    }

    TrainConfig final_config = options.base;
    final_config.beta = result.selected.beta;
    final_config.gamma = result.selected.gamma;
    final_config.lambda = result.selected.lambda;
    result.final_model = train(dataset, labels,
                               final_config.lambda != 0.0 ? aux : std::nullopt, final_config);
    return result;
}

SweepResult sweep(const Dataset& dataset, const LabelSpace& labels,
                  const std::optional<SimilarityMatrix>& aux, const TrainConfig& base,
                  SweepParam param, const Matrix& test_features, const Matrix& test_truth,
                  PredictionMode mode) {
    const double base_value = param == SweepParam::gamma ? base.gamma : base.lambda;
    if (base_value <= 0.0)
        throw std::invalid_argument(
            "sweep: the swept hyperparameter is zero, so scaling it is degenerate; set a "
            "positive base value");
    if (param == SweepParam::lambda && !aux.has_value())
        throw std::invalid_argument("sweep: lambda sweep requires an auxiliary similarity matrix");

    SweepResult result;
    result.param = param;
    const std::vector<double> factors{1.0, 0.1, 0.01, 0.001};
    for (const double factor : factors) {
        TrainConfig config = base;
        if (param == SweepParam::gamma)
            config.gamma = base.gamma * factor;
        else
            config.lambda = base.lambda * factor;

        const TrainResult trained = train(dataset, labels, aux, config);
        const std::vector<Prediction> predictions =
            predict_all(trained.model, test_features, labels, mode);
        const EvalResult eval = evaluate_predictions(predictions, test_truth);
        result.rows.push_back({factor,
                               param == SweepParam::gamma ? config.gamma : config.lambda, eval});
    }
    return result;
}

void write_svg_line_plot(const std::filesystem::path& path, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::string& x_label,
                         const std::string& y_label, const std::string& title) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("write_svg_line_plot: need matching nonempty series");

    const double width = 480.0;
    const double height = 320.0;
    const double left = 64.0;
    const double right = 24.0;
    const double top = 36.0;
    const double bottom = 48.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = xs[0];
    double x_max = xs[0];
    double y_min = ys[0];
    double y_max = ys[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x_min = std::min(x_min, xs[i]);
        x_max = std::max(x_max, xs[i]);
        y_min = std::min(y_min, ys[i]);
        y_max = std::max(y_max, ys[i]);
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    const double pad = (y_max - y_min) == 0.0 ? 1.0 : 0.1 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double y) { return top + (y_max - y) / (y_max - y_min) * plot_h; };
    auto fmt = [](double v) {
        std::ostringstream out;
        out << v;
        return out.str();
    };

    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open svg file for writing: " + path.string());

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

    out << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";

    for (std::size_t i = 0; i < xs.size(); ++i) {
        out << "  <line x1=\"" << sx(xs[i]) << "\" y1=\"" << top + plot_h << "\" x2=\""
            << sx(xs[i]) << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
        out << "  <text x=\"" << sx(xs[i]) << "\" y=\"" << top + plot_h + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(xs[i]) << "</text>\n";
    }
    for (int tick = 0; tick <= 4; ++tick) {
        const double y = y_min + (y_max - y_min) * tick / 4.0;
        out << "  <line x1=\"" << left - 5 << "\" y1=\"" << sy(y) << "\" x2=\"" << left
            << "\" y2=\"" << sy(y) << "\" stroke=\"black\"/>\n";
        out << "  <text x=\"" << left - 9 << "\" y=\"" << sy(y) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">";
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%.3g", y);
        out << buffer << "</text>\n";
    }

    out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i != 0) out << " ";
        out << sx(xs[i]) << "," << sy(ys[i]);
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << "  <circle cx=\"" << sx(xs[i]) << "\" cy=\"" << sy(ys[i])
            << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";

    out << "  <text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
        << "</text>\n";
    out << "  <text x=\"16\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << top + plot_h / 2 << ")\">" << y_label << "</text>\n";
    out << "</svg>\n";
    if (!out) throw std::invalid_argument("failed writing svg file: " + path.string());
}

}  // namespace taep
