#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "taep/core_model.hpp"
#include "taep/scoring.hpp"

namespace taep::io {

// Matrix text format: optional '#' comment lines, a `rows cols` header line,
// then one whitespace-separated row per line. Values are written with 17
// significant digits so every double round-trips exactly.
Matrix read_matrix(std::istream& in, const std::string& context);
Matrix read_matrix_file(const std::filesystem::path& path);
void write_matrix(std::ostream& out, const Matrix& matrix);
void write_matrix_file(const std::filesystem::path& path, const Matrix& matrix,
                       const std::vector<std::string>& comments = {});

// Embedding text format: one `label_name v1 ... vm` line per label, seen
// labels first. Names are single whitespace-free tokens.
struct Embeddings {
    std::vector<std::string> names;
    Matrix values;
};
Embeddings read_embeddings_file(const std::filesystem::path& path);
void write_embeddings_file(const std::filesystem::path& path, const Embeddings& embeddings);

// Model file: a [meta] key/value section followed by the [W], [W0], [U] and
// [M] sections in matrix layout. Loading re-checks shapes and the
// orthonormality of U.
struct LoadedModel {
    ModelParams params;
    LabelSpace labels;
};
void write_model_file(const std::filesystem::path& path, const ModelParams& params,
                      const LabelSpace& labels);
LoadedModel read_model_file(const std::filesystem::path& path);

// Predictions: one tab-separated line per instance holding the instance
// index, the threshold, the ranked `name=score` list, and the positive set.
void write_predictions_file(const std::filesystem::path& path,
                            const std::vector<Prediction>& predictions,
                            const std::vector<std::string>& label_names);

// Shortest decimal form that round-trips the double exactly.
std::string format_value(double value);

}  // namespace taep::io
