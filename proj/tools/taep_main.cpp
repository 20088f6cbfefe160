#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "taep/aux_similarity.hpp"
#include "taep/core_model.hpp"
#include "taep/errors.hpp"
#include "taep/hyper.hpp"
#include "taep/io.hpp"
#include "taep/scoring.hpp"
#include "taep/synth.hpp"
#include "taep/trainer.hpp"

namespace {

using namespace taep;

PredictionMode parse_mode(const std::string& mode) {
    if (mode == "zeroshot") return PredictionMode::unseen_only;
    if (mode == "generalized") return PredictionMode::all_labels;
    throw std::invalid_argument("unknown mode '" + mode + "' (expected zeroshot or generalized)");
}

std::vector<double> parse_grid_values(const std::string& csv, const std::string& flag) {
    std::vector<double> values;
    std::stringstream stream(csv);
    std::string token;
    while (std::getline(stream, token, ',')) {
        if (token.empty()) continue;
        try {
            std::size_t used = 0;
            const double value = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            values.push_back(value);
        } catch (const std::exception&) {
            throw std::invalid_argument(flag + ": cannot parse '" + token + "' as a number");
        }
    }
    if (values.empty()) throw std::invalid_argument(flag + ": empty value list");
    return values;
}

// Shared input flags for the subcommands that train from data files.
struct DataFlags {
    std::string features;
    std::string labels;
    std::string embeddings;
    std::string aux_sim;
    std::size_t seen_count = 0;
    bool no_normalize = false;
};

void add_data_flags(CLI::App* sub, DataFlags& flags) {
    sub->add_option("--features", flags.features, "instance feature matrix file")->required();
    sub->add_option("--labels", flags.labels, "binary label matrix file (seen columns)")
        ->required();
    sub->add_option("--embeddings", flags.embeddings,
                    "label embedding file, seen labels first")
        ->required();
    sub->add_option("--seen-count", flags.seen_count, "number of seen labels")->required();
    sub->add_option("--aux-sim", flags.aux_sim, "auxiliary label-similarity matrix file");
    sub->add_flag("--no-normalize", flags.no_normalize,
                  "skip l2 row normalization of features and embeddings");
}

struct LoadedProblem {
    Dataset dataset;
    LabelSpace labels;
    std::optional<SimilarityMatrix> aux;
};

LoadedProblem load_problem(const DataFlags& flags) {
    LoadedProblem problem;
    problem.dataset.features = io::read_matrix_file(flags.features);
    problem.dataset.labels = io::read_matrix_file(flags.labels);
    const io::Embeddings embeddings = io::read_embeddings_file(flags.embeddings);

    if (flags.seen_count == 0 || flags.seen_count > embeddings.names.size())
        throw ValidationError("--seen-count " + std::to_string(flags.seen_count) +
                              " is outside 1.." + std::to_string(embeddings.names.size()) +
                              " (the number of embedding lines)");

    problem.labels.names = embeddings.names;
    problem.labels.seen_count = flags.seen_count;
    problem.labels.unseen_count = embeddings.names.size() - flags.seen_count;
    problem.labels.embeddings = embeddings.values;

    if (!flags.no_normalize) {
        problem.dataset.features = normalize_rows(problem.dataset.features);
        problem.labels.embeddings = normalize_rows(problem.labels.embeddings);
    }

    const ValidationReport report = validate(problem.dataset, problem.labels);
    if (report.has_errors()) throw ValidationError(report.to_string());
    for (const Violation& violation : report.violations)
        if (violation.severity == Severity::warning)
            std::cerr << "warning: " << violation.message << "\n";

    if (!flags.aux_sim.empty()) {
        SimilarityMatrix aux = io::read_matrix_file(flags.aux_sim);
        if (aux.rows() != problem.labels.total() || aux.cols() != problem.labels.total())
            throw ValidationError("auxiliary similarity is " + std::to_string(aux.rows()) + "x" +
                                  std::to_string(aux.cols()) + " but there are " +
                                  std::to_string(problem.labels.total()) + " labels");
        problem.aux = std::move(aux);
    }
    return problem;
}

void print_trace(const std::vector<TraceRecord>& trace) {
    for (const TraceRecord& record : trace)
        std::fprintf(stderr, "iter=%d dual=%.10g primal=%.10g psi_norm=%.10g elapsed=%.3fs\n",
                     record.iteration, record.dual_objective, record.primal_objective,
                     record.psi_norm, record.elapsed_seconds);
}

void print_eval_report(const EvalResult& eval) {
    std::printf("MiAP:     %.2f%%\n", 100.0 * eval.miap);
    std::printf("Micro-F1: %.2f%%\n", 100.0 * eval.micro_f1);
    std::printf("Macro-F1: %.2f%%\n", 100.0 * eval.macro_f1);
    std::printf("Hamming:  %.2f%%\n", 100.0 * eval.hamming);
    std::printf("Skipped:  %zu instance(s) without ground-truth labels (%zu evaluated)\n",
                eval.miap_skipped, eval.miap_evaluated);
    std::printf("miap=%s\n", io::format_value(eval.miap).c_str());
    std::printf("micro_f1=%s\n", io::format_value(eval.micro_f1).c_str());
    std::printf("macro_f1=%s\n", io::format_value(eval.macro_f1).c_str());
    std::printf("hamming=%s\n", io::format_value(eval.hamming).c_str());
    std::printf("miap_evaluated=%zu\n", eval.miap_evaluated);
    std::printf("miap_skipped=%zu\n", eval.miap_skipped);
}

// Truth columns must line up with the candidate set implied by the mode.
void check_truth_shape(const Matrix& truth, const LabelSpace& labels, PredictionMode mode,
                       std::size_t instance_count) {
    const std::size_t expected =
        mode == PredictionMode::unseen_only ? labels.unseen_count : labels.total();
    if (truth.cols() != expected)
        throw ValidationError("truth matrix has " + std::to_string(truth.cols()) +
                              " columns but the evaluated label set has " +
                              std::to_string(expected));
    if (truth.rows() != instance_count)
        throw ValidationError("truth matrix has " + std::to_string(truth.rows()) +
                              " rows but there are " + std::to_string(instance_count) +
                              " instances");
}

void check_feature_dim(const Matrix& features, const ModelParams& model) {
    if (features.cols() != model.w.rows())
        throw ValidationError("features have " + std::to_string(features.cols()) +
                              " columns but the model expects " +
                              std::to_string(model.w.rows()));
}

int run_train(const DataFlags& data, TrainConfig config, const std::string& out) {
    if (config.lambda > 0.0 && data.aux_sim.empty())
        throw std::invalid_argument("--lambda > 0 requires --aux-sim");
    const LoadedProblem problem = load_problem(data);
    const TrainResult result = train(problem.dataset, problem.labels, problem.aux, config);
    print_trace(result.trace);

    ModelParams model = result.model;
    io::write_model_file(out, model, problem.labels);
    std::printf("final_dual=%s\n",
                io::format_value(result.trace.empty() ? 0.0
                                                      : result.trace.back().dual_objective)
                    .c_str());
    std::printf("final_primal=%s\n",
                io::format_value(result.trace.empty() ? 0.0
                                                      : result.trace.back().primal_objective)
                    .c_str());
    std::printf("iterations=%d\n", result.iterations);
    std::printf("converged=%s\n", result.converged ? "true" : "false");
    std::printf("model=%s\n", out.c_str());
    return 0;
}

int run_predict(const std::string& model_path, const std::string& features_path,
                const std::string& mode_name, const std::string& out, bool no_normalize) {
    const io::LoadedModel loaded = io::read_model_file(model_path);
    const PredictionMode mode = parse_mode(mode_name);
    Matrix features = io::read_matrix_file(features_path);
    if (!no_normalize) features = normalize_rows(features);
    check_feature_dim(features, loaded.params);

    const std::vector<Prediction> predictions =
        predict_all(loaded.params, features, loaded.labels, mode);
    io::write_predictions_file(out, predictions, loaded.labels.names);
    std::printf("instances=%zu\n", predictions.size());
    std::printf("predictions=%s\n", out.c_str());
    return 0;
}

int run_evaluate(const std::string& model_path, const std::string& features_path,
                 const std::string& truth_path, const std::string& mode_name,
                 bool no_normalize) {
    const io::LoadedModel loaded = io::read_model_file(model_path);
    const PredictionMode mode = parse_mode(mode_name);
    Matrix features = io::read_matrix_file(features_path);
    if (!no_normalize) features = normalize_rows(features);
    check_feature_dim(features, loaded.params);

    const Matrix truth = io::read_matrix_file(truth_path);
    check_truth_shape(truth, loaded.labels, mode, features.rows());

    const std::vector<Prediction> predictions =
        predict_all(loaded.params, features, loaded.labels, mode);
    print_eval_report(evaluate_predictions(predictions, truth));
    return 0;
}

struct TuneFlags {
    std::string metric = "miap";
    std::string grid_beta;
    std::string grid_gamma;
    std::string grid_lambda;
    std::string out;
};

int run_tune(const DataFlags& data, TrainConfig base, const TuneFlags& flags) {
    TuneOptions options;
    options.metric = parse_tune_metric(flags.metric);
    options.base = base;
    options.tune_lambda = !data.aux_sim.empty();
    if (!flags.grid_beta.empty())
        options.grid.beta = parse_grid_values(flags.grid_beta, "--grid-beta");
    if (!flags.grid_gamma.empty())
        options.grid.gamma = parse_grid_values(flags.grid_gamma, "--grid-gamma");
    if (!flags.grid_lambda.empty())
        options.grid.lambda = parse_grid_values(flags.grid_lambda, "--grid-lambda");

    const LoadedProblem problem = load_problem(data);
    const TuneResult result = tune(problem.dataset, problem.labels, problem.aux, options);

    io::write_model_file(flags.out, result.final_model.model, problem.labels);
    for (const TunePoint& point : result.evaluated)
        std::fprintf(stderr, "point beta=%g gamma=%g lambda=%g score=%.10g\n", point.beta,
                     point.gamma, point.lambda, point.score);

    std::printf("metric=%s\n", tune_metric_name(options.metric).c_str());
    std::printf("train_half=%zu\n", result.train_half);
    std::printf("validation_half=%zu\n", result.validation_half);
    std::printf("dropped_instances=%zu\n", result.dropped_instances);
    std::printf("selected_beta=%s\n", io::format_value(result.selected.beta).c_str());
    std::printf("selected_gamma=%s\n", io::format_value(result.selected.gamma).c_str());
    std::printf("selected_lambda=%s\n", io::format_value(result.selected.lambda).c_str());
    std::printf("selected_score=%s\n", io::format_value(result.selected.score).c_str());
    std::printf("model=%s\n", flags.out.c_str());
    return 0;
}

struct SweepFlags {
    std::string param = "gamma";
    std::string test_features;
    std::string test_truth;
    std::string mode = "zeroshot";
    std::string svg = "sweep_miap.svg";
};

int run_sweep(const DataFlags& data, TrainConfig base, const SweepFlags& flags) {
    SweepParam param;
    if (flags.param == "gamma")
        param = SweepParam::gamma;
    else if (flags.param == "lambda")
        param = SweepParam::lambda;
    else
        throw std::invalid_argument("unknown --param '" + flags.param +
                                    "' (expected gamma or lambda)");
    if ((base.lambda > 0.0 || param == SweepParam::lambda) && data.aux_sim.empty())
        throw std::invalid_argument("sweeping or using lambda requires --aux-sim");

    const PredictionMode mode = parse_mode(flags.mode);
    const LoadedProblem problem = load_problem(data);
    Matrix test_features = io::read_matrix_file(flags.test_features);
    if (!data.no_normalize) test_features = normalize_rows(test_features);
    const Matrix test_truth = io::read_matrix_file(flags.test_truth);
    check_truth_shape(test_truth, problem.labels, mode, test_features.rows());

    const SweepResult result = sweep(problem.dataset, problem.labels, problem.aux, base, param,
                                     test_features, test_truth, mode);

    std::printf("factor\tmiap\tmicro_f1\tmacro_f1\thamming\n");
    std::vector<double> xs;
    std::vector<double> ys;
    for (const SweepRow& row : result.rows) {
        std::printf("%g\t%.2f\t%.2f\t%.2f\t%.2f\n", row.factor, 100.0 * row.eval.miap,
                    100.0 * row.eval.micro_f1, 100.0 * row.eval.macro_f1,
                    100.0 * row.eval.hamming);
        xs.push_back(std::log10(row.factor));
        ys.push_back(100.0 * row.eval.miap);
    }
    write_svg_line_plot(flags.svg, xs, ys, "log10(scale factor)", "MiAP (%)",
                        std::string("MiAP vs ") + flags.param + " scale");
    std::printf("plot=%s\n", flags.svg.c_str());
    return 0;
}

int run_sim_build(const std::string& source, const std::string& input,
                  const std::string& labels_path, const std::string& out) {
    // The labels file contributes one name per line (first token, so an
    // embedding file works too); '#' starts a comment.
    std::ifstream in(labels_path);
    if (!in) throw std::invalid_argument("cannot open labels file: " + labels_path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream tokens(line);
        std::string name;
        if (!(tokens >> name) || name[0] == '#') continue;
        names.push_back(name);
    }
    if (names.empty()) throw ValidationError("labels file lists no labels: " + labels_path);

    SimilarityMatrix similarity;
    if (source == "hierarchy") {
        similarity = wordnet_similarity(load_hierarchy_file(input), names);
    } else if (source == "counts") {
        similarity = cooccurrence_similarity(load_counts_file(input), names);
    } else {
        throw std::invalid_argument("unknown --source '" + source +
                                    "' (expected hierarchy or counts)");
    }

    std::string header = "labels:";
    for (const std::string& name : names) header += " " + name;
    io::write_matrix_file(out, similarity, {header});
    std::printf("labels=%zu\n", names.size());
    std::printf("similarity=%s\n", out.c_str());
    return 0;
}

int run_synth(const SynthConfig& config, const std::string& out_dir) {
    const SynthTask task = generate(config);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    io::write_matrix_file(dir / "train_features.txt", task.train.features);
    io::write_matrix_file(dir / "train_labels.txt", task.train.labels);
    io::write_matrix_file(dir / "test_features.txt", task.test.features);
    io::write_matrix_file(dir / "test_truth.txt", task.test.labels);

    // Convenience slice: truth over the unseen columns only, ready for
    // `evaluate --mode zeroshot`.
    Matrix unseen_truth(task.test.labels.rows(), task.labels.unseen_count);
    for (std::size_t i = 0; i < unseen_truth.rows(); ++i)
        for (std::size_t j = 0; j < unseen_truth.cols(); ++j)
            unseen_truth(i, j) = task.test.labels(i, task.labels.seen_count + j);
    io::write_matrix_file(dir / "test_truth_unseen.txt", unseen_truth);
    io::write_embeddings_file(dir / "embeddings.txt",
                              {task.labels.names, task.labels.embeddings});

    std::printf("seed=%llu\n", static_cast<unsigned long long>(config.seed));
    std::printf("train_instances=%zu\n", task.train.features.rows());
    std::printf("test_instances=%zu\n", task.test.features.rows());
    std::printf("seen=%zu\n", task.labels.seen_count);
    std::printf("unseen=%zu\n", task.labels.unseen_count);
    std::printf("out_dir=%s\n", out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer-aware embedding projection for multi-label zero-shot learning"};
    app.require_subcommand(1);

    // train
    DataFlags train_data;
    TrainConfig train_config;
    std::string train_out;
    CLI::App* train_cmd = app.add_subcommand("train", "train a model and write it to a file");
    add_data_flags(train_cmd, train_data);
    train_cmd->add_option("--beta", train_config.beta, "margin regularization weight");
    train_cmd->add_option("--gamma", train_config.gamma, "transfer regularizer weight");
    train_cmd->add_option("--lambda", train_config.lambda, "auxiliary regularizer weight");
    train_cmd->add_option("--r", train_config.r, "projection rank")->required();
    train_cmd->add_option("--max-iters", train_config.max_outer_iterations,
                          "outer iteration cap");
    train_cmd->add_option("--tol", train_config.dual_tolerance,
                          "relative dual-change stopping tolerance");
    train_cmd->add_option("--seed", train_config.seed, "seed recorded for reproducibility");
    train_cmd->add_option("--out", train_out, "output model file")->required();

    // predict
    std::string predict_model;
    std::string predict_features;
    std::string predict_mode = "zeroshot";
    std::string predict_out;
    bool predict_no_normalize = false;
    CLI::App* predict_cmd = app.add_subcommand("predict", "rank labels for each instance");
    predict_cmd->add_option("--model", predict_model, "model file")->required();
    predict_cmd->add_option("--features", predict_features, "feature matrix file")->required();
    predict_cmd->add_option("--mode", predict_mode, "zeroshot or generalized");
    predict_cmd->add_option("--out", predict_out, "output predictions file")->required();
    predict_cmd->add_flag("--no-normalize", predict_no_normalize,
                          "skip l2 row normalization of features");

    // evaluate
    std::string eval_model;
    std::string eval_features;
    std::string eval_truth;
    std::string eval_mode = "zeroshot";
    bool eval_no_normalize = false;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "score a model against ground truth");
    eval_cmd->add_option("--model", eval_model, "model file")->required();
    eval_cmd->add_option("--features", eval_features, "feature matrix file")->required();
    eval_cmd->add_option("--truth", eval_truth, "binary truth matrix over the evaluated labels")
        ->required();
    eval_cmd->add_option("--mode", eval_mode, "zeroshot or generalized");
    eval_cmd->add_flag("--no-normalize", eval_no_normalize,
                       "skip l2 row normalization of features");

    // tune
    DataFlags tune_data;
    TrainConfig tune_base;
    TuneFlags tune_flags;
    CLI::App* tune_cmd =
        app.add_subcommand("tune", "grid-search hyperparameters on a seen-class split");
    add_data_flags(tune_cmd, tune_data);
    tune_cmd->add_option("--metric", tune_flags.metric,
                         "selection metric: miap, micro_f1, macro_f1, or hamming");
    tune_cmd->add_option("--grid-beta", tune_flags.grid_beta, "comma-separated beta grid");
    tune_cmd->add_option("--grid-gamma", tune_flags.grid_gamma, "comma-separated gamma grid");
    tune_cmd->add_option("--grid-lambda", tune_flags.grid_lambda, "comma-separated lambda grid");
    tune_cmd->add_option("--r", tune_base.r, "projection rank")->required();
    tune_cmd->add_option("--max-iters", tune_base.max_outer_iterations, "outer iteration cap");
    tune_cmd->add_option("--tol", tune_base.dual_tolerance, "stopping tolerance");
    tune_cmd->add_option("--seed", tune_base.seed, "seed recorded for reproducibility");
    tune_cmd->add_option("--out", tune_flags.out, "output model file")->required();

    // sweep
    DataFlags sweep_data;
    TrainConfig sweep_base;
    SweepFlags sweep_flags;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "scale one regularizer down by factors of 10 and evaluate");
    add_data_flags(sweep_cmd, sweep_data);
    sweep_cmd->add_option("--param", sweep_flags.param, "gamma or lambda");
    sweep_cmd->add_option("--beta", sweep_base.beta, "margin regularization weight");
    sweep_cmd->add_option("--gamma", sweep_base.gamma, "transfer regularizer base weight");
    sweep_cmd->add_option("--lambda", sweep_base.lambda, "auxiliary regularizer base weight");
    sweep_cmd->add_option("--r", sweep_base.r, "projection rank")->required();
    sweep_cmd->add_option("--max-iters", sweep_base.max_outer_iterations, "outer iteration cap");
    sweep_cmd->add_option("--tol", sweep_base.dual_tolerance, "stopping tolerance");
    sweep_cmd->add_option("--test-features", sweep_flags.test_features, "test feature matrix")
        ->required();
    sweep_cmd->add_option("--test-truth", sweep_flags.test_truth, "test truth matrix")
        ->required();
    sweep_cmd->add_option("--mode", sweep_flags.mode, "zeroshot or generalized");
    sweep_cmd->add_option("--svg", sweep_flags.svg, "output SVG plot path");

    // sim-build
    std::string sim_source;
    std::string sim_input;
    std::string sim_labels;
    std::string sim_out;
    CLI::App* sim_cmd =
        app.add_subcommand("sim-build", "build an auxiliary label-similarity matrix");
    sim_cmd->add_option("--source", sim_source, "hierarchy or counts")->required();
    sim_cmd->add_option("--input", sim_input, "hierarchy edge file or hit-count file")
        ->required();
    sim_cmd->add_option("--labels", sim_labels, "label name list (first token per line)")
        ->required();
    sim_cmd->add_option("--out", sim_out, "output similarity matrix file")->required();

    // synth
    SynthConfig synth_config;
    std::string synth_out_dir;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic transfer task");
    synth_cmd->add_option("--seed", synth_config.seed, "generator seed");
    synth_cmd->add_option("--n-train", synth_config.n_train, "training instances");
    synth_cmd->add_option("--n-test", synth_config.n_test, "test instances");
    synth_cmd->add_option("--l-seen", synth_config.l_seen, "seen labels");
    synth_cmd->add_option("--l-unseen", synth_config.l_unseen, "unseen labels");
    synth_cmd->add_option("--m", synth_config.m, "embedding dimension");
    synth_cmd->add_option("--d", synth_config.d, "feature dimension");
    synth_cmd->add_option("--density", synth_config.label_density, "label inclusion probability");
    synth_cmd->add_option("--noise", synth_config.noise_scale, "feature noise scale");
    synth_cmd->add_option("--tightness", synth_config.transfer_tightness,
                          "blend weight tying unseen prototypes to seen ones");
    synth_cmd->add_option("--out-dir", synth_out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
        if (train_cmd->parsed()) return run_train(train_data, train_config, train_out);
        if (predict_cmd->parsed())
            return run_predict(predict_model, predict_features, predict_mode, predict_out,
                               predict_no_normalize);
        if (eval_cmd->parsed())
            return run_evaluate(eval_model, eval_features, eval_truth, eval_mode,
                                eval_no_normalize);
        if (tune_cmd->parsed()) return run_tune(tune_data, tune_base, tune_flags);
        if (sweep_cmd->parsed()) return run_sweep(sweep_data, sweep_base, sweep_flags);
        if (sim_cmd->parsed()) return run_sim_build(sim_source, sim_input, sim_labels, sim_out);
        if (synth_cmd->parsed()) return run_synth(synth_config, synth_out_dir);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
