#include "taep/trainer.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "taep/eigen_solver.hpp"
#include "taep/errors.hpp"
#include "taep/kernels.hpp"

namespace taep {

void validate_config(const TrainConfig& config, std::size_t embedding_dim) {
    if (config.beta <= 0.0) throw std::invalid_argument("config: beta must be positive");
    if (config.gamma < 0.0) throw std::invalid_argument("config: gamma must be nonnegative");
    if (config.lambda < 0.0) throw std::invalid_argument("config: lambda must be nonnegative");
    if (config.r == 0) throw std::invalid_argument("config: r must be at least 1");
    if (embedding_dim > 0 && config.r > embedding_dim)
        throw std::invalid_argument("config: r exceeds the embedding dimension");
    if (config.max_outer_iterations < 1)
        throw std::invalid_argument("config: max outer iterations must be at least 1");
    if (config.passes_per_outer < 1)
        throw std::invalid_argument("config: passes per outer iteration must be at least 1");
    if (config.dual_tolerance <= 0.0)
        throw std::invalid_argument("config: dual tolerance must be positive");
    if (config.qp_tolerance <= 0.0)
        throw std::invalid_argument("config: qp tolerance must be positive");
    if (config.qp_max_iterations < 1)
        throw std::invalid_argument("config: qp iteration cap must be at least 1");
}

TrainProblem make_problem(const Dataset& dataset, const LabelSpace& labels,
                          const std::optional<SimilarityMatrix>& aux_similarity,
                          const TrainConfig& config) {
    if (config.lambda > 0.0 && !aux_similarity.has_value())
        throw std::invalid_argument(
            "config: lambda is positive but no auxiliary similarity matrix was given");

    TrainProblem problem;
    problem.x = dataset.features;
    problem.y = dataset.labels;
    problem.m = labels.embeddings;
    problem.m_seen = labels.seen_embeddings();
    problem.q = build_transfer_q(labels.seen_count, labels.unseen_count);
    if (aux_similarity.has_value()) {
        if (aux_similarity->rows() != labels.total() || aux_similarity->cols() != labels.total())
            throw std::invalid_argument(
                "auxiliary similarity matrix does not match the label count");
        problem.q_aux = build_normalized_laplacian(*aux_similarity);
    }
    return problem;
}

double dual_objective(const DualState& state, const TrainProblem& problem,
                      const TrainConfig& config) {
    // tr(Ψᵀ(2Y − 11ᵀ))
    double linear = 0.0;
    for (std::size_t i = 0; i < state.psi.rows(); ++i)
        for (std::size_t c = 0; c < state.psi.cols(); ++c)
            linear += state.psi(i, c) * (2.0 * problem.y(i, c) - 1.0);

    const double penalty =
        eval_penalty(state.u, problem.m, problem.q,
                     problem.q_aux.has_value() ? &*problem.q_aux : nullptr, config.gamma,
                     config.lambda);

    // (1/2β) tr(ΨᵀXXᵀΨ (M^s U Uᵀ M^sᵀ + 11ᵀ))
    const Matrix t = linalg::matmul_at_b(problem.x, state.psi);  // d × L^s
    const Matrix gram = linalg::matmul_at_b(t, t);               // ΨᵀXXᵀΨ
    const Matrix p = linalg::matmul(problem.m_seen, state.u);
    Matrix k = linalg::matmul_a_bt(p, p);
    for (std::size_t a = 0; a < k.size(); ++a) k.data()[a] += 1.0;
    linalg::symmetrize(k);
    const double quad = linalg::hadamard_sum(gram, k) / (2.0 * config.beta);

    return linear + penalty - quad;
}

double primal_objective(const ModelParams& model, const TrainProblem& problem) {
    const Matrix xw = linalg::matmul(problem.x, model.w);            // n × r
    const Matrix p = linalg::matmul(problem.m_seen, model.u);        // L^s × r
    const Matrix scores = linalg::matmul_a_bt(xw, p);                // n × L^s

    double slack_sum = 0.0;
    for (std::size_t i = 0; i < problem.x.rows(); ++i) {
        const double threshold = linalg::dot(problem.x.row(i), model.w0);
        double xi = 0.0;
        double eta = 0.0;
        for (std::size_t c = 0; c < problem.y.cols(); ++c) {
            if (problem.y(i, c) == 1.0)
                xi = std::max(xi, 1.0 + threshold - scores(i, c));
            else
                eta = std::max(eta, 1.0 + scores(i, c) - threshold);
        }
        slack_sum += xi + eta;
    }

    double reg = 0.0;
    for (std::size_t a = 0; a < model.w.size(); ++a) reg += model.w.data()[a] * model.w.data()[a];
    reg += linalg::squared_norm(model.w0);

    const double penalty =
        eval_penalty(model.u, problem.m, problem.q,
                     problem.q_aux.has_value() ? &*problem.q_aux : nullptr, model.gamma,
                     model.lambda);

    return slack_sum + 0.5 * model.beta * reg + penalty;
}

void coordinate_pass(DualState& state, const TrainProblem& problem, const TrainConfig& config,
                     const PassObserver* observer) {
    const std::size_t n = problem.x.rows();
    for (std::size_t i = 0; i < n; ++i) {
        const RowQP qp = assemble_row_qp(i, problem.x, problem.y, state.psi, state.u,
                                         problem.m_seen, config.beta);
        const std::vector<double> z =
            solve_row_qp(qp, config.qp_tolerance, config.qp_max_iterations);
        for (std::size_t c = 0; c < z.size(); ++c) state.psi(i, c) = z[c];
        if (observer != nullptr && observer->after_row) observer->after_row(i, state);
    }
}

Matrix build_s(const Matrix& psi, const TrainProblem& problem, const TrainConfig& config) {
    const Matrix t = linalg::matmul_at_b(problem.x, psi);    // d × L^s
    const Matrix gram = linalg::matmul_at_b(t, t);           // ΨᵀXXᵀΨ
    const Matrix left = linalg::matmul_at_b(problem.m_seen, gram);  // m × L^s
    Matrix s = linalg::matmul(left, problem.m_seen);         // m × m
    for (std::size_t a = 0; a < s.size(); ++a) s.data()[a] /= 2.0 * config.beta;

    if (config.gamma != 0.0) {
        const Matrix qm = linalg::matmul(problem.q.q, problem.m);
        const Matrix mqm = linalg::matmul_at_b(problem.m, qm);
        linalg::add_scaled(s, mqm, -0.5 * config.gamma);
    }
    if (config.lambda != 0.0) {
        if (!problem.q_aux.has_value())
            throw std::invalid_argument("build_s: lambda is positive without an auxiliary Laplacian");
        const Matrix qm = linalg::matmul(problem.q_aux->q_aux, problem.m);
        const Matrix mqm = linalg::matmul_at_b(problem.m, qm);
        linalg::add_scaled(s, mqm, -0.5 * config.lambda);
    }
    linalg::symmetrize(s);
    return s;
}

void update_u(DualState& state, const TrainProblem& problem, const TrainConfig& config) {
    const Matrix s = build_s(state.psi, problem, config);
    state.u = top_r_eigenvectors(s, config.r).vectors;
}

std::pair<Matrix, std::vector<double>> recover_primal(const Matrix& psi, const Matrix& x,
                                                      const Matrix& m_seen, const Matrix& u,
                                                      double beta) {
    if (beta <= 0.0) throw std::invalid_argument("recover_primal: beta must be positive");
    const Matrix t = linalg::matmul_at_b(x, psi);       // Xᵀ Ψ, d × L^s
    const Matrix p = linalg::matmul(m_seen, u);         // L^s × r
    Matrix w = linalg::matmul(t, p);                    // d × r
    for (std::size_t a = 0; a < w.size(); ++a) w.data()[a] /= beta;

    std::vector<double> w0(t.rows(), 0.0);
    for (std::size_t k = 0; k < t.rows(); ++k) {
        double acc = 0.0;
        for (std::size_t c = 0; c < t.cols(); ++c) acc += t(k, c);
        w0[k] = -acc / beta;
    }
    return {std::move(w), std::move(w0)};
}

namespace {

ModelParams package_model(const DualState& state, const TrainProblem& problem,
                          const TrainConfig& config) {
    ModelParams model;
    auto [w, w0] = recover_primal(state.psi, problem.x, problem.m_seen, state.u, config.beta);
    model.w = std::move(w);
    model.w0 = std::move(w0);
    model.u = state.u;
    model.beta = config.beta;
    model.gamma = config.gamma;
    model.lambda = config.lambda;
    model.r = config.r;
    return model;
}

}  // namespace

TrainResult train(const Dataset& dataset, const LabelSpace& labels,
                  const std::optional<SimilarityMatrix>& aux_similarity,
                  const TrainConfig& config, const PassObserver* observer,
                  const std::function<double(const ModelParams&)>& validation_score) {
    validate_config(config, labels.embeddings.cols());

    const ValidationReport report = validate(dataset, labels);
    if (report.has_errors()) throw ValidationError(report.to_string());

    const TrainProblem problem = make_problem(dataset, labels, aux_similarity, config);

    TrainResult result;
    DualState& state = result.state;
    state.psi = Matrix(problem.x.rows(), problem.y.cols(), 0.0);
    state.u = Matrix(problem.m.cols(), config.r, 0.0);

    const auto start = std::chrono::steady_clock::now();
    double previous = 0.0;
    bool have_previous = false;
    double best_score = 0.0;
    bool have_best = false;
    ModelParams best_model;

    for (int iteration = 1; iteration <= config.max_outer_iterations; ++iteration) {
        for (int pass = 0; pass < config.passes_per_outer; ++pass)
            coordinate_pass(state, problem, config, observer);
        update_u(state, problem, config);
        state.outer_iteration = iteration;
        result.iterations = iteration;

        const double dual = dual_objective(state, problem, config);
        state.dual_history.push_back(dual);

        const ModelParams model = package_model(state, problem, config);
        const double primal = primal_objective(model, problem);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.trace.push_back(
            {iteration, dual, primal, linalg::frobenius_norm(state.psi), elapsed});

        if (config.return_best_validation && validation_score) {
            const double score = validation_score(model);
            if (!have_best || score > best_score) {
                best_score = score;
                best_model = model;
                have_best = true;
            }
        }

        if (have_previous && std::abs(dual - previous) / (1.0 + std::abs(dual)) <
                                 config.dual_tolerance) {
            result.converged = true;
            result.model = config.return_best_validation && have_best ? best_model : model;
            return result;
        }
        previous = dual;
        have_previous = true;
        if (iteration == config.max_outer_iterations)
            result.model = config.return_best_validation && have_best ? best_model : model;
    }
    return result;
}

}  // namespace taep
