#include "taep/synth.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "taep/errors.hpp"
#include "taep/kernels.hpp"
#include "taep/rng.hpp"

namespace taep {

namespace {

void check_config(const SynthConfig& c) {
    if (c.n_train == 0 || c.n_test == 0)
        throw std::invalid_argument("synth: instance counts must be positive");
    if (c.l_seen < 2) throw std::invalid_argument("synth: need at least two seen labels");
    if (c.l_unseen < 2) throw std::invalid_argument("synth: need at least two unseen labels");
    if (c.m == 0 || c.d == 0) throw std::invalid_argument("synth: dimensions must be positive");
    if (!(c.label_density > 0.0 && c.label_density < 1.0))
        throw std::invalid_argument("synth: label density must lie strictly between 0 and 1");
    if (c.noise_scale < 0.0) throw std::invalid_argument("synth: noise scale must be nonnegative");
    if (c.transfer_tightness < 0.0 || c.transfer_tightness > 1.0)
        throw std::invalid_argument("synth: transfer tightness must lie in [0, 1]");
}

void normalize_row_in_place(Matrix& m, std::size_t i) {
    const double norm = std::sqrt(linalg::squared_norm(m.row(i)));
    if (norm > 0.0)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) /= norm;
}

// Draws label rows by independent inclusion, rejecting empty and full rows.
Matrix draw_labels(SplitMix64& rng, std::size_t n, std::size_t l, double density) {
    Matrix labels(n, l, 0.0);
    constexpr int kMaxRedraws = 100000;
    for (std::size_t i = 0; i < n; ++i) {
        for (int attempt = 0;; ++attempt) {
            if (attempt >= kMaxRedraws)
                throw NumericalError("synth: could not draw a label row with both a positive "
                                     "and a negative entry");
            std::size_t ones = 0;
            for (std::size_t c = 0; c < l; ++c) {
                const double v = rng.next_double() < density ? 1.0 : 0.0;
                labels(i, c) = v;
                ones += v == 1.0 ? 1 : 0;
            }
            if (ones > 0 && ones < l) break;
        }
    }
    return labels;
}

// feature = A · (mean of positive prototypes) + noise_scale · ε, normalized.
Matrix build_features(const Matrix& labels, const Matrix& prototypes, const Matrix& map,
                      SplitMix64& noise_rng, double noise_scale) {
    const std::size_t n = labels.rows();
    const std::size_t m = prototypes.cols();
    const std::size_t d = map.rows();

    Matrix features(n, d, 0.0);
    std::vector<double> mean(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(mean.begin(), mean.end(), 0.0);
        std::size_t positives = 0;
        for (std::size_t c = 0; c < labels.cols(); ++c) {
            if (labels(i, c) == 1.0) {
                ++positives;
                for (std::size_t j = 0; j < m; ++j) mean[j] += prototypes(c, j);
            }
        }
        for (std::size_t j = 0; j < m; ++j) mean[j] /= static_cast<double>(positives);

        const std::vector<double> mapped = linalg::matvec(map, mean);
        for (std::size_t j = 0; j < d; ++j)
            features(i, j) = mapped[j] + noise_scale * noise_rng.next_gaussian();
        normalize_row_in_place(features, i);
    }
    return features;
}

}  // namespace

SynthTask generate(const SynthConfig& config) {
    check_config(config);

    const std::size_t l = config.l_seen + config.l_unseen;

    // Seen prototypes: unit-normalized Gaussian directions.
    Matrix prototypes(l, config.m, 0.0);
    {
        SplitMix64 rng(config.seed, "prototypes/seen");
        for (std::size_t c = 0; c < config.l_seen; ++c) {
            for (std::size_t j = 0; j < config.m; ++j) prototypes(c, j) = rng.next_gaussian();
            normalize_row_in_place(prototypes, c);
        }
    }

    // Unseen prototypes: convex blend of the seen prototypes, mixed with a
    // fresh unit direction at weight (1 − tightness).
    {
        SplitMix64 blend_rng(config.seed, "prototypes/blend");
        SplitMix64 fresh_rng(config.seed, "prototypes/fresh");
        std::vector<double> weights(config.l_seen, 0.0);
        std::vector<double> fresh(config.m, 0.0);
        for (std::size_t u = 0; u < config.l_unseen; ++u) {
            double total = 0.0;
            for (std::size_t s = 0; s < config.l_seen; ++s) {
                // Exponential draws normalize to a uniform point on the simplex.
                weights[s] = -std::log(1.0 - blend_rng.next_double());
                total += weights[s];
            }
            for (std::size_t s = 0; s < config.l_seen; ++s) weights[s] /= total;

            double fresh_norm = 0.0;
            for (std::size_t j = 0; j < config.m; ++j) {
                fresh[j] = fresh_rng.next_gaussian();
                fresh_norm += fresh[j] * fresh[j];
            }
            fresh_norm = std::sqrt(fresh_norm);

            const std::size_t row = config.l_seen + u;
            for (std::size_t j = 0; j < config.m; ++j) {
                double blend = 0.0;
                for (std::size_t s = 0; s < config.l_seen; ++s)
                    blend += weights[s] * prototypes(s, j);
                const double mix = fresh_norm > 0.0 ? fresh[j] / fresh_norm : 0.0;
                prototypes(row, j) =
                    config.transfer_tightness * blend + (1.0 - config.transfer_tightness) * mix;
            }
            normalize_row_in_place(prototypes, row);
        }
    }

    // Seed-fixed random m→d map.
    Matrix map(config.d, config.m, 0.0);
    {
        SplitMix64 rng(config.seed, "map");
        const double scale = 1.0 / std::sqrt(static_cast<double>(config.m));
        for (std::size_t i = 0; i < map.size(); ++i) map.data()[i] = scale * rng.next_gaussian();
    }

    SynthTask task;
    task.labels.seen_count = config.l_seen;
    task.labels.unseen_count = config.l_unseen;
    task.labels.embeddings = prototypes;
    task.labels.names.reserve(l);
    for (std::size_t s = 0; s < config.l_seen; ++s) {
        std::ostringstream name;
        name << "seen" << s;
        task.labels.names.push_back(name.str());
    }
    for (std::size_t u = 0; u < config.l_unseen; ++u) {
        std::ostringstream name;
        name << "unseen" << u;
        task.labels.names.push_back(name.str());
    }

    {
        SplitMix64 label_rng(config.seed, "labels/train");
        task.train.labels = draw_labels(label_rng, config.n_train, config.l_seen,
                                        config.label_density);
        SplitMix64 noise_rng(config.seed, "noise/train");
        task.train.features = build_features(task.train.labels, prototypes, map, noise_rng,
                                             config.noise_scale);
    }
    {
        SplitMix64 label_rng(config.seed, "labels/test");
        task.test.labels = draw_labels(label_rng, config.n_test, l, config.label_density);
        SplitMix64 noise_rng(config.seed, "noise/test");
        task.test.features = build_features(task.test.labels, prototypes, map, noise_rng,
                                            config.noise_scale);
    }
    return task;
}

}  // namespace taep
