#include "taep/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "taep/errors.hpp"
#include "taep/kernels.hpp"

namespace taep::io {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& token, const std::string& where) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ValidationError(where + ": malformed number '" + token + "'");
    return value;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string token;
    while (in >> token) fields.push_back(token);
    return fields;
}

long long parse_ll(const std::string& token, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long value = std::stoll(token, &used);
        if (used != token.size())
            throw ValidationError(where + ": malformed integer '" + token + "'");
        return value;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw ValidationError(where + ": malformed integer '" + token + "'");
    }
}

// Reads the next non-comment, non-blank line; false at end of stream.
bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        line = text;
        return true;
    }
    return false;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path.string());
    return out;
}

}  // namespace

std::string format_value(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

Matrix read_matrix(std::istream& in, const std::string& context) {
    std::string line;
    std::size_t line_no = 0;
    if (!next_content_line(in, line, line_no))
        throw ValidationError(context + ": missing `rows cols` header");

    const auto header = split_ws(line);
    if (header.size() != 2)
        throw ValidationError(context + ": header must be `rows cols`, got '" + line + "'");
    long long rows = 0;
    long long cols = 0;
    rows = parse_ll(header[0], context + ": header");
    cols = parse_ll(header[1], context + ": header");
    if (rows < 0 || cols < 0)
        throw ValidationError(context + ": header dimensions must be nonnegative");

    Matrix matrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    for (long long i = 0; i < rows; ++i) {
        if (!next_content_line(in, line, line_no)) {
            std::ostringstream msg;
            msg << context << ": expected " << rows << " rows, got " << i;
            throw ValidationError(msg.str());
        }
        const auto fields = split_ws(line);
        if (static_cast<long long>(fields.size()) != cols) {
            std::ostringstream msg;
            msg << context << ": line " << line_no << " has " << fields.size()
                << " values, expected " << cols;
            throw ValidationError(msg.str());
        }
        std::ostringstream where;
        where << context << ": line " << line_no;
        for (long long j = 0; j < cols; ++j)
            matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                parse_double(fields[static_cast<std::size_t>(j)], where.str());
    }
    return matrix;
}

Matrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file: " + path.string());
    return read_matrix(in, path.string());
}

void write_matrix(std::ostream& out, const Matrix& matrix) {
    out << matrix.rows() << " " << matrix.cols() << "\n";
    for (std::size_t i = 0; i < matrix.rows(); ++i) {
        for (std::size_t j = 0; j < matrix.cols(); ++j) {
            if (j != 0) out << " ";
            out << format_value(matrix(i, j));
        }
        out << "\n";
    }
}

void write_matrix_file(const std::filesystem::path& path, const Matrix& matrix,
                       const std::vector<std::string>& comments) {
    std::ofstream out = open_output(path);
    for (const auto& comment : comments) out << "# " << comment << "\n";
    write_matrix(out, matrix);
    if (!out) throw std::invalid_argument("failed writing matrix file: " + path.string());
}

Embeddings read_embeddings_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open embeddings file: " + path.string());

    Embeddings out;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (next_content_line(in, line, line_no)) {
        const auto fields = split_ws(line);
        std::ostringstream where;
        where << path.string() << ": line " << line_no;
        if (fields.size() < 2)
            throw ValidationError(where.str() + ": expected `name v1 ... vm`");
        if (width == 0)
            width = fields.size() - 1;
        else if (fields.size() - 1 != width) {
            std::ostringstream msg;
            msg << where.str() << ": expected " << width << " values, got " << fields.size() - 1;
            throw ValidationError(msg.str());
        }
        for (const std::string& existing : out.names)
            if (existing == fields[0])
                throw ValidationError(where.str() + ": duplicate label name '" + fields[0] + "'");
        out.names.push_back(fields[0]);
        std::vector<double> row(width);
        for (std::size_t j = 0; j < width; ++j) row[j] = parse_double(fields[j + 1], where.str());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ValidationError(path.string() + ": embeddings file is empty");

    out.values = Matrix(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) out.values(i, j) = rows[i][j];
    return out;
}

void write_embeddings_file(const std::filesystem::path& path, const Embeddings& embeddings) {
    if (embeddings.names.size() != embeddings.values.rows())
        throw std::invalid_argument("write_embeddings_file: name count != value rows");
    std::ofstream out = open_output(path);
    for (std::size_t i = 0; i < embeddings.values.rows(); ++i) {
        out << embeddings.names[i];
        for (std::size_t j = 0; j < embeddings.values.cols(); ++j)
            out << " " << format_value(embeddings.values(i, j));
        out << "\n";
    }
    if (!out) throw std::invalid_argument("failed writing embeddings file: " + path.string());
}

namespace {

constexpr int kModelFormatVersion = 1;

void expect_section(std::istream& in, const std::string& name, const std::string& context,
                    std::size_t& line_no) {
    std::string line;
    if (!next_content_line(in, line, line_no) || line != "[" + name + "]")
        throw ValidationError(context + ": expected section [" + name + "]");
}

}  // namespace

void write_model_file(const std::filesystem::path& path, const ModelParams& params,
                      const LabelSpace& labels) {
    if (labels.names.size() != labels.total())
        throw std::invalid_argument("write_model_file: label names do not match counts");
    std::ofstream out = open_output(path);
    out << "[meta]\n";
    out << "format_version " << kModelFormatVersion << "\n";
    out << "beta " << format_value(params.beta) << "\n";
    out << "gamma " << format_value(params.gamma) << "\n";
    out << "lambda " << format_value(params.lambda) << "\n";
    out << "r " << params.r << "\n";
    out << "d " << params.w.rows() << "\n";
    out << "m " << params.u.rows() << "\n";
    out << "seen_count " << labels.seen_count << "\n";
    out << "unseen_count " << labels.unseen_count << "\n";
    out << "labels";
    for (const auto& name : labels.names) out << " " << name;
    out << "\n";
    out << "[W]\n";
    write_matrix(out, params.w);
    out << "[W0]\n";
    Matrix w0(params.w0.size(), 1);
    for (std::size_t i = 0; i < params.w0.size(); ++i) w0(i, 0) = params.w0[i];
    write_matrix(out, w0);
    out << "[U]\n";
    write_matrix(out, params.u);
    out << "[M]\n";
    write_matrix(out, labels.embeddings);
    if (!out) throw std::invalid_argument("failed writing model file: " + path.string());
}

LoadedModel read_model_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path.string());
    const std::string context = path.string();

    std::size_t line_no = 0;
    expect_section(in, "meta", context, line_no);

    LoadedModel out;
    long long r = -1;
    long long d = -1;
    long long m = -1;
    long long seen = -1;
    long long unseen = -1;
    long long version = -1;
    bool have_beta = false;

    std::string line;
    while (true) {
        const std::streampos before = in.tellg();
        if (!next_content_line(in, line, line_no))
            throw ValidationError(context + ": missing [W] section");
        if (line == "[W]") {
            in.seekg(before);
            break;
        }
        const auto fields = split_ws(line);
        std::ostringstream where;
        where << context << ": line " << line_no;
        if (fields.size() < 2) throw ValidationError(where.str() + ": malformed meta entry");
        const std::string& key = fields[0];
        if (key == "format_version")
            version = parse_ll(fields[1], where.str());
        else if (key == "beta") {
            out.params.beta = parse_double(fields[1], where.str());
            have_beta = true;
        } else if (key == "gamma")
            out.params.gamma = parse_double(fields[1], where.str());
        else if (key == "lambda")
            out.params.lambda = parse_double(fields[1], where.str());
        else if (key == "r")
            r = parse_ll(fields[1], where.str());
        else if (key == "d")
            d = parse_ll(fields[1], where.str());
        else if (key == "m")
            m = parse_ll(fields[1], where.str());
        else if (key == "seen_count")
            seen = parse_ll(fields[1], where.str());
        else if (key == "unseen_count")
            unseen = parse_ll(fields[1], where.str());
        else if (key == "labels")
            out.labels.names.assign(fields.begin() + 1, fields.end());
        else
            throw ValidationError(where.str() + ": unknown meta key '" + key + "'");
    }

    if (version != kModelFormatVersion)
        throw ValidationError(context + ": unsupported or missing format_version");
    if (!have_beta || r < 1 || d < 1 || m < 1 || seen < 1 || unseen < 0)
        throw ValidationError(context + ": incomplete [meta] section");
    if (out.params.beta <= 0.0) throw ValidationError(context + ": beta must be positive");

    expect_section(in, "W", context, line_no);
    out.params.w = read_matrix(in, context + " [W]");
    expect_section(in, "W0", context, line_no);
    const Matrix w0 = read_matrix(in, context + " [W0]");
    expect_section(in, "U", context, line_no);
    out.params.u = read_matrix(in, context + " [U]");
    expect_section(in, "M", context, line_no);
    out.labels.embeddings = read_matrix(in, context + " [M]");

    out.params.r = static_cast<std::size_t>(r);
    out.labels.seen_count = static_cast<std::size_t>(seen);
    out.labels.unseen_count = static_cast<std::size_t>(unseen);

    const std::size_t l = out.labels.total();
    if (out.params.w.rows() != static_cast<std::size_t>(d) ||
        out.params.w.cols() != static_cast<std::size_t>(r))
        throw ValidationError(context + ": [W] shape does not match the meta section");
    if (w0.rows() != static_cast<std::size_t>(d) || w0.cols() != 1)
        throw ValidationError(context + ": [W0] shape does not match the meta section");
    if (out.params.u.rows() != static_cast<std::size_t>(m) ||
        out.params.u.cols() != static_cast<std::size_t>(r))
        throw ValidationError(context + ": [U] shape does not match the meta section");
    if (out.labels.embeddings.rows() != l ||
        out.labels.embeddings.cols() != static_cast<std::size_t>(m))
        throw ValidationError(context + ": [M] shape does not match the meta section");
    if (out.labels.names.size() != l)
        throw ValidationError(context + ": label names do not match seen+unseen counts");

    out.params.w0.resize(w0.rows());
    for (std::size_t i = 0; i < w0.rows(); ++i) out.params.w0[i] = w0(i, 0);

    // Orthonormality check on the loaded projection: ‖UᵀU − I‖_F ≤ 1e-8.
    Matrix gram = linalg::matmul_at_b(out.params.u, out.params.u);
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) -= 1.0;
    if (linalg::frobenius_norm(gram) > 1e-8)
        throw ValidationError(context + ": [U] columns are not orthonormal");
    return out;
}

void write_predictions_file(const std::filesystem::path& path,
                            const std::vector<Prediction>& predictions,
                            const std::vector<std::string>& label_names) {
    std::ofstream out = open_output(path);
    out << "# instance\tthreshold\tranked name=score\tpositives\n";
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const Prediction& p = predictions[i];
        out << i << "\t" << format_value(p.threshold) << "\t";
        for (std::size_t rank = 0; rank < p.ranking.size(); ++rank) {
            const std::size_t pos = p.ranking[rank];
            if (rank != 0) out << " ";
            out << label_names.at(p.candidates[pos]) << "=" << format_value(p.scores[pos]);
        }
        out << "\t";
        bool first = true;
        for (std::size_t c = 0; c < p.candidates.size(); ++c) {
            if (!p.positive[c]) continue;
            if (!first) out << " ";
            out << label_names.at(p.candidates[c]);
            first = false;
        }
        out << "\n";
    }
    if (!out) throw std::invalid_argument("failed writing predictions file: " + path.string());
}

}  // namespace taep::io
