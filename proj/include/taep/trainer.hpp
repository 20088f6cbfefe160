#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "taep/core_model.hpp"
#include "taep/qp_row_solver.hpp"
#include "taep/regularizers.hpp"

namespace taep {

struct TrainConfig {
    double beta = 1.0;
    double gamma = 0.0;
    double lambda = 0.0;
    std::size_t r = 1;
    int max_outer_iterations = 50;
    int passes_per_outer = 1;
    double dual_tolerance = 1e-6;
    double qp_tolerance = 1e-10;
    int qp_max_iterations = 10000;
    std::uint64_t seed = 0;
    // When set (and a validation scorer is supplied to train), the returned
    // model is the iterate with the best validation score instead of the
    // final one. The alternation has no global convergence guarantee, so the
    // trace exposes enough to pick a better iterate.
    bool return_best_validation = false;
};

// Dual iterate: instance-by-seen-label multipliers and the projection basis.
struct DualState {
    Matrix psi;  // n × L^s
    Matrix u;    // m × r
    int outer_iteration = 0;
    std::vector<double> dual_history;
};

struct TraceRecord {
    int iteration = 0;
    double dual_objective = 0.0;
    double primal_objective = 0.0;
    double psi_norm = 0.0;
    double elapsed_seconds = 0.0;
};

// Fully materialized training problem: data plus the cached structure
// matrices (built once at training start).
struct TrainProblem {
    Matrix x;       // n × d
    Matrix y;       // n × L^s
    Matrix m;       // L × m_dim
    Matrix m_seen;  // L^s × m_dim
    TransferQ q;
    std::optional<AuxLaplacian> q_aux;
};

TrainProblem make_problem(const Dataset& dataset, const LabelSpace& labels,
                          const std::optional<SimilarityMatrix>& aux_similarity,
                          const TrainConfig& config);

// Test hook: observes the dual state after each row update of a pass.
struct PassObserver {
    std::function<void(std::size_t row, const DualState&)> after_row;
};

double dual_objective(const DualState& state, const TrainProblem& problem,
                      const TrainConfig& config);
double primal_objective(const ModelParams& model, const TrainProblem& problem);

// One Gauss-Seidel sweep over the instance rows with U fixed; each row is
// replaced by the exact solution of its subproblem, so the dual objective is
// non-decreasing across the sweep.
void coordinate_pass(DualState& state, const TrainProblem& problem, const TrainConfig& config,
                     const PassObserver* observer = nullptr);

Matrix build_s(const Matrix& psi, const TrainProblem& problem, const TrainConfig& config);

// Replaces U with the top-r eigenvectors of build_s.
void update_u(DualState& state, const TrainProblem& problem, const TrainConfig& config);

// W = (1/β) Xᵀ Ψ M^s U and W0 = −(1/β) Xᵀ Ψ 1.
std::pair<Matrix, std::vector<double>> recover_primal(const Matrix& psi, const Matrix& x,
                                                      const Matrix& m_seen, const Matrix& u,
                                                      double beta);

struct TrainResult {
    ModelParams model;
    DualState state;
    std::vector<TraceRecord> trace;
    int iterations = 0;
    bool converged = false;
};

// Alternates coordinate passes with projection updates from the zero
// initialization until the relative dual change drops below the tolerance or
// the iteration cap is hit.
TrainResult train(const Dataset& dataset, const LabelSpace& labels,
                  const std::optional<SimilarityMatrix>& aux_similarity,
                  const TrainConfig& config, const PassObserver* observer = nullptr,
                  const std::function<double(const ModelParams&)>& validation_score = nullptr);

void validate_config(const TrainConfig& config, std::size_t embedding_dim);

}  // namespace taep
