#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "taep/core_model.hpp"
#include "taep/kernels.hpp"
#include "taep/synth.hpp"

using namespace taep;
namespace linalg = taep::linalg;

namespace {

// Solves the small SPD system A·x = b by Gaussian elimination with partial
// pivoting — an independent check, not the library path.
std::vector<double> solve_dense(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
        if (pivot != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
            std::swap(b[k], b[pivot]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
            b[i] -= factor * b[k];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t j = i + 1; j < n; ++j) sum -= a(i, j) * x[j];
        x[i] = sum / a(i, i);
    }
    return x;
}

}  // namespace

TEST_CASE("generation is bitwise deterministic in the seed") {
    SynthConfig config;
    config.seed = 99;
    config.n_train = 12;
    config.n_test = 7;
    const SynthTask a = generate(config);
    const SynthTask b = generate(config);
    CHECK(a.train.features == b.train.features);
    CHECK(a.train.labels == b.train.labels);
    CHECK(a.test.features == b.test.features);
    CHECK(a.test.labels == b.test.labels);
    CHECK(a.labels.embeddings == b.labels.embeddings);
    CHECK(a.labels.names == b.labels.names);

    config.seed = 100;
    const SynthTask c = generate(config);
    CHECK(a.train.features != c.train.features);
}

TEST_CASE("generated tasks satisfy the data invariants") {
    SynthConfig config;
    config.seed = 3;
    config.n_train = 24;
    config.n_test = 10;
    config.l_seen = 5;
    config.l_unseen = 3;
    config.m = 7;
    config.d = 9;
    const SynthTask task = generate(config);

    CHECK(task.train.features.rows() == 24);
    CHECK(task.train.features.cols() == 9);
    CHECK(task.train.labels.cols() == 5);   // seen labels only
    CHECK(task.test.labels.cols() == 8);    // full truth
    CHECK(task.labels.embeddings.rows() == 8);
    CHECK(task.labels.names.size() == 8);

    const ValidationReport report = validate(task.train, task.labels);
    CHECK(!report.has_errors());

    // Feature and prototype rows are unit length.
    for (std::size_t i = 0; i < task.train.features.rows(); ++i)
        CHECK(std::sqrt(linalg::squared_norm(task.train.features.row(i))) ==
              doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t c = 0; c < task.labels.embeddings.rows(); ++c)
        CHECK(std::sqrt(linalg::squared_norm(task.labels.embeddings.row(c))) ==
              doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("every label row keeps at least one positive and one negative") {
    SynthConfig config;
    config.seed = 8;
    config.n_train = 40;
    config.n_test = 40;
    config.label_density = 0.05;  // forces many redraws
    const SynthTask task = generate(config);
    for (const Matrix* labels : {&task.train.labels, &task.test.labels}) {
        for (std::size_t i = 0; i < labels->rows(); ++i) {
            std::size_t ones = 0;
            for (std::size_t c = 0; c < labels->cols(); ++c)
                if ((*labels)(i, c) == 1.0) ++ones;
            CHECK(ones > 0);
            CHECK(ones < labels->cols());
        }
    }
}

TEST_CASE("noise-free features depend only on the label pattern") {
    SynthConfig config;
    config.seed = 15;
    config.n_train = 30;
    config.l_seen = 2;  // only two valid patterns: (1,0) and (0,1)
    config.l_unseen = 2;
    config.noise_scale = 0.0;
    const SynthTask task = generate(config);
    for (std::size_t i = 1; i < task.train.labels.rows(); ++i) {
        if (task.train.labels(i, 0) != task.train.labels(0, 0)) continue;
        for (std::size_t j = 0; j < task.train.features.cols(); ++j)
            CHECK(task.train.features(i, j) == task.train.features(0, j));
    }
}

TEST_CASE("fully tight unseen prototypes lie in the cone of the seen ones") {
    SynthConfig config;
    config.seed = 27;
    config.l_seen = 4;
    config.l_unseen = 3;
    config.m = 10;
    config.transfer_tightness = 1.0;
    const SynthTask task = generate(config);
    const Matrix seen = task.labels.seen_embeddings();

    // Least squares: coefficients of the unseen prototype over the seen rows
    // must reproduce it (tiny residual) with nonnegative weights.
    const Matrix gram = linalg::matmul_a_bt(seen, seen);
    for (std::size_t u = 0; u < config.l_unseen; ++u) {
        const std::size_t row = config.l_seen + u;
        std::vector<double> rhs(config.l_seen, 0.0);
        for (std::size_t s = 0; s < config.l_seen; ++s)
            for (std::size_t j = 0; j < config.m; ++j)
                rhs[s] += seen(s, j) * task.labels.embeddings(row, j);
        const std::vector<double> coeff = solve_dense(gram, rhs);

        double residual = 0.0;
        for (std::size_t j = 0; j < config.m; ++j) {
            double rebuilt = 0.0;
            for (std::size_t s = 0; s < config.l_seen; ++s) rebuilt += coeff[s] * seen(s, j);
            const double diff = rebuilt - task.labels.embeddings(row, j);
            residual += diff * diff;
        }
        CHECK(std::sqrt(residual) <= 1e-8);
        for (const double c : coeff) CHECK(c >= -1e-9);
    }
}

TEST_CASE("loose prototypes leave the seen span") {
    SynthConfig config;
    config.seed = 27;
    config.l_seen = 2;
    config.l_unseen = 2;
    config.m = 10;
    config.transfer_tightness = 0.0;  // pure fresh directions
    const SynthTask task = generate(config);
    const Matrix seen = task.labels.seen_embeddings();
    const Matrix gram = linalg::matmul_a_bt(seen, seen);
    double worst = 0.0;
    for (std::size_t u = 0; u < config.l_unseen; ++u) {
        const std::size_t row = config.l_seen + u;
        std::vector<double> rhs(config.l_seen, 0.0);
        for (std::size_t s = 0; s < config.l_seen; ++s)
            for (std::size_t j = 0; j < config.m; ++j)
                rhs[s] += seen(s, j) * task.labels.embeddings(row, j);
        const std::vector<double> coeff = solve_dense(gram, rhs);
        double residual = 0.0;
        for (std::size_t j = 0; j < config.m; ++j) {
            double rebuilt = 0.0;
            for (std::size_t s = 0; s < config.l_seen; ++s) rebuilt += coeff[s] * seen(s, j);
            const double diff = rebuilt - task.labels.embeddings(row, j);
            residual += diff * diff;
        }
        worst = std::max(worst, std::sqrt(residual));
    }
    // Two random directions in 10 dimensions cannot span a third one.
    CHECK(worst > 1e-3);
}

TEST_CASE("extending the training split leaves everything else untouched") {
    SynthConfig small;
    small.seed = 33;
    small.n_train = 10;
    small.n_test = 9;
    SynthConfig large = small;
    large.n_train = 20;
    const SynthTask a = generate(small);
    const SynthTask b = generate(large);

    CHECK(a.labels.embeddings == b.labels.embeddings);
    CHECK(a.test.features == b.test.features);
    CHECK(a.test.labels == b.test.labels);
    for (std::size_t i = 0; i < a.train.labels.rows(); ++i) {
        for (std::size_t c = 0; c < a.train.labels.cols(); ++c)
            CHECK(a.train.labels(i, c) == b.train.labels(i, c));
        for (std::size_t j = 0; j < a.train.features.cols(); ++j)
            CHECK(a.train.features(i, j) == b.train.features(i, j));
    }
}

TEST_CASE("configuration invariants are enforced") {
    const SynthConfig good;
    SynthConfig c;

    c = good;
    c.n_train = 0;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.n_test = 0;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.l_seen = 1;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.l_unseen = 1;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.m = 0;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.d = 0;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.label_density = 0.0;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.label_density = 1.0;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.noise_scale = -0.1;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
    c = good;
    c.transfer_tightness = 1.5;
    CHECK_THROWS_AS(generate(c), std::invalid_argument);
}
