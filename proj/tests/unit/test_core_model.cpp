#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "taep/core_model.hpp"
#include "taep/synth.hpp"

using namespace taep;

namespace {

bool mentions(const ValidationReport& report, const std::string& needle) {
    for (const Violation& v : report.violations)
        if (v.message.find(needle) != std::string::npos) return true;
    return false;
}

LabelSpace tiny_labels() {
    LabelSpace labels;
    labels.names = {"a", "b", "c"};
    labels.seen_count = 2;
    labels.unseen_count = 1;
    labels.embeddings = Matrix(3, 2, 0.5);
    return labels;
}

Dataset tiny_dataset() {
    Dataset data;
    data.features = Matrix(2, 2, 1.0);
    data.labels = Matrix(2, 2);
    data.labels(0, 0) = 1;
    data.labels(1, 1) = 1;
    return data;
}

}  // namespace

TEST_CASE("normalize_rows hand examples") {
    Matrix m(3, 2);
    m(0, 0) = 3;
    m(0, 1) = 4;
    m(1, 0) = 1;
    m(1, 1) = 0;
    m(2, 0) = 0;
    m(2, 1) = 0;
    const Matrix n = normalize_rows(m);
    CHECK(n(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(n(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(n(1, 0) == 1.0);  // already unit norm
    CHECK(n(1, 1) == 0.0);
    CHECK(n(2, 0) == 0.0);  // zero row passes through
    CHECK(n(2, 1) == 0.0);
}

TEST_CASE("normalize_rows is idempotent within 1e-12") {
    Matrix m(4, 3);
    double v = 0.1;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = (v += 0.7);
    const Matrix once = normalize_rows(m);
    const Matrix twice = normalize_rows(once);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            CHECK(std::abs(once(i, j) - twice(i, j)) <= 1e-12);
}

TEST_CASE("normalize_rows requires at least one column") {
    CHECK_THROWS_AS(normalize_rows(Matrix(2, 0)), std::invalid_argument);
}

TEST_CASE("validate accepts a consistent dataset") {
    const ValidationReport report = validate(tiny_dataset(), tiny_labels());
    CHECK(report.empty());
    CHECK_FALSE(report.has_errors());
}

TEST_CASE("validate accepts generated synthetic data") {
    SynthConfig config;
    config.seed = 21;
    const SynthTask task = generate(config);
    CHECK_FALSE(validate(task.train, task.labels).has_errors());
}

TEST_CASE("validate flags an instance with an empty negative set") {
    Dataset data = tiny_dataset();
    data.labels(0, 0) = 1;
    data.labels(0, 1) = 1;  // all-ones row
    const ValidationReport report = validate(data, tiny_labels());
    CHECK(report.has_errors());
    CHECK(mentions(report, "negative"));
}

TEST_CASE("validate flags an instance with an empty positive set") {
    Dataset data = tiny_dataset();
    data.labels(0, 0) = 0;
    const ValidationReport report = validate(data, tiny_labels());
    CHECK(report.has_errors());
    CHECK(mentions(report, "positive"));
}

TEST_CASE("validate flags a seen-count mismatch") {
    LabelSpace labels = tiny_labels();
    labels.seen_count = 1;
    labels.unseen_count = 2;
    const ValidationReport report = validate(tiny_dataset(), labels);
    CHECK(report.has_errors());
    CHECK(mentions(report, "seen"));
}

TEST_CASE("validate flags non-binary label entries") {
    Dataset data = tiny_dataset();
    data.labels(1, 0) = 0.5;
    CHECK(validate(data, tiny_labels()).has_errors());
}

TEST_CASE("validate flags duplicate label names") {
    LabelSpace labels = tiny_labels();
    labels.names = {"a", "a", "c"};
    CHECK(validate(tiny_dataset(), labels).has_errors());
}

TEST_CASE("validate flags mismatched feature and label row counts") {
    Dataset data = tiny_dataset();
    data.features = Matrix(3, 2, 1.0);
    CHECK(validate(data, tiny_labels()).has_errors());
}

TEST_CASE("zero embedding rows warn without erroring") {
    LabelSpace labels = tiny_labels();
    labels.embeddings(2, 0) = 0.0;
    labels.embeddings(2, 1) = 0.0;
    const ValidationReport report = validate(tiny_dataset(), labels);
    CHECK_FALSE(report.has_errors());
    CHECK_FALSE(report.empty());
}

TEST_CASE("validate is idempotent") {
    Dataset data = tiny_dataset();
    data.labels(0, 0) = 2.0;
    const ValidationReport first = validate(data, tiny_labels());
    const ValidationReport second = validate(data, tiny_labels());
    CHECK(first.violations.size() == second.violations.size());
    CHECK(first.to_string() == second.to_string());
}

TEST_CASE("label space slices seen and unseen embedding blocks") {
    LabelSpace labels = tiny_labels();
    labels.embeddings(0, 0) = 1;
    labels.embeddings(2, 1) = 9;
    const Matrix seen = labels.seen_embeddings();
    const Matrix unseen = labels.unseen_embeddings();
    CHECK(seen.rows() == 2);
    CHECK(seen(0, 0) == 1.0);
    CHECK(unseen.rows() == 1);
    CHECK(unseen(0, 1) == 9.0);
}
