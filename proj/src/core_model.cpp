#include "taep/core_model.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "taep/kernels.hpp"

namespace taep {

namespace {

Matrix copy_rows(const Matrix& src, std::size_t begin, std::size_t count) {
    Matrix out(count, src.cols());
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < src.cols(); ++j) out(i, j) = src(begin + i, j);
    return out;
}

}  // namespace

Matrix LabelSpace::seen_embeddings() const { return copy_rows(embeddings, 0, seen_count); }

Matrix LabelSpace::unseen_embeddings() const {
    return copy_rows(embeddings, seen_count, unseen_count);
}

bool ValidationReport::has_errors() const {
    for (const auto& v : violations)
        if (v.severity == Severity::error) return true;
    return false;
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) {
        out << (v.severity == Severity::error ? "error: " : "warning: ") << v.message << "\n";
    }
    return out.str();
}

Matrix normalize_rows(const Matrix& matrix) {
    if (matrix.cols() == 0) throw std::invalid_argument("normalize_rows: matrix has no columns");
    Matrix out = matrix;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        const double norm = std::sqrt(linalg::squared_norm(out.row(i)));
        if (norm > 0.0) {
            for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) /= norm;
        }
    }
    return out;
}

ValidationReport validate(const Dataset& dataset, const LabelSpace& labels) {
    ValidationReport report;
    auto error = [&report](const std::string& msg) {
        report.violations.push_back({Severity::error, msg});
    };
    auto warning = [&report](const std::string& msg) {
        report.violations.push_back({Severity::warning, msg});
    };

    const std::size_t n = dataset.features.rows();
    if (n == 0) error("dataset has no instances");
    if (dataset.features.cols() == 0) error("feature matrix has no columns");
    if (dataset.labels.rows() != n) {
        std::ostringstream msg;
        msg << "feature rows (" << n << ") and label rows (" << dataset.labels.rows()
            << ") differ";
        error(msg.str());
    }

    for (std::size_t i = 0; i < dataset.labels.rows(); ++i) {
        std::size_t ones = 0;
        std::size_t zeros = 0;
        bool binary = true;
        for (std::size_t c = 0; c < dataset.labels.cols(); ++c) {
            const double v = dataset.labels(i, c);
            if (v == 1.0)
                ++ones;
            else if (v == 0.0)
                ++zeros;
            else
                binary = false;
        }
        std::ostringstream at;
        at << "instance " << i;
        if (!binary) error(at.str() + " has a label entry outside {0,1}");
        if (binary && ones == 0) error(at.str() + " has an empty positive label set");
        if (binary && zeros == 0) error(at.str() + " has an empty negative label set");
    }

    if (labels.names.size() != labels.total()) {
        std::ostringstream msg;
        msg << "label name count (" << labels.names.size() << ") does not equal seen+unseen ("
            << labels.total() << ")";
        error(msg.str());
    }
    std::set<std::string> seen_names;
    for (const auto& name : labels.names) {
        if (!seen_names.insert(name).second) error("duplicate label name '" + name + "'");
    }
    if (labels.seen_count == 0) error("label space has no seen labels");
    if (labels.embeddings.rows() != labels.total()) {
        std::ostringstream msg;
        msg << "embedding rows (" << labels.embeddings.rows() << ") do not equal label count ("
            << labels.total() << ")";
        error(msg.str());
    }
    if (labels.embeddings.cols() == 0) error("embedding matrix has no columns");
    if (dataset.labels.cols() != labels.seen_count) {
        std::ostringstream msg;
        msg << "label matrix has " << dataset.labels.cols() << " columns but the label space has "
            << labels.seen_count << " seen labels";
        error(msg.str());
    }

    for (std::size_t i = 0; i < labels.embeddings.rows(); ++i) {
        if (linalg::squared_norm(labels.embeddings.row(i)) == 0.0) {
            const std::string name = i < labels.names.size() ? labels.names[i] : "?";
            std::ostringstream msg;
            msg << "embedding row " << i << " ('" << name << "') is all zeros";
            warning(msg.str());
        }
    }

    return report;
}

}  // namespace taep
