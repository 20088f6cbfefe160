#include "taep/aux_similarity.hpp"

#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "taep/errors.hpp"

namespace taep {

namespace {

std::size_t intern(std::unordered_map<std::string, std::size_t>& index,
                   std::vector<std::string>& names,
                   std::vector<std::vector<std::size_t>>& adjacency, const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    const std::size_t id = names.size();
    index.emplace(name, id);
    names.push_back(name);
    adjacency.emplace_back();
    return id;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::string strip(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\r' || s[a] == '\n')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\r' || s[b - 1] == '\n')) --b;
    return s.substr(a, b - a);
}

double parse_count(const std::string& field, const std::string& where) {
    std::istringstream in(field);
    double value = 0.0;
    if (!(in >> value) || !(in >> std::ws).eof())
        throw ValidationError(where + ": malformed count '" + field + "'");
    if (value < 0.0) throw ValidationError(where + ": negative count '" + field + "'");
    return value;
}

}  // namespace

void HierarchyGraph::add_edge(const std::string& child, const std::string& parent) {
    const std::size_t a = intern(index_, names_, adjacency_, child);
    const std::size_t b = intern(index_, names_, adjacency_, parent);
    if (a == b) return;
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
}

std::size_t HierarchyGraph::node_index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw ValidationError("label '" + name + "' does not resolve to a hierarchy node");
    return it->second;
}

std::vector<std::int64_t> HierarchyGraph::bfs_distances(std::size_t source) const {
    std::vector<std::int64_t> dist(names_.size(), -1);
    std::deque<std::size_t> queue;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        const std::size_t node = queue.front();
        queue.pop_front();
        for (const std::size_t next : adjacency_[node]) {
            if (dist[next] < 0) {
                dist[next] = dist[node] + 1;
                queue.push_back(next);
            }
        }
    }
    return dist;
}

double HitCounts::single_count(const std::string& label) const {
    auto it = single.find(label);
    return it == single.end() ? 0.0 : it->second;
}

double HitCounts::pair_count(const std::string& a, const std::string& b) const {
    const auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = pair.find(key);
    return it == pair.end() ? 0.0 : it->second;
}

SimilarityMatrix wordnet_similarity(const HierarchyGraph& graph,
                                    const std::vector<std::string>& labels) {
    if (labels.empty()) throw std::invalid_argument("wordnet_similarity: no labels");

    std::vector<std::size_t> nodes(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) nodes[i] = graph.node_index(labels[i]);

    const std::size_t l = labels.size();
    Matrix r(l, l, 0.0);
    std::vector<std::vector<std::int64_t>> dist(l);
    const std::int64_t ln = static_cast<std::int64_t>(l);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ln; ++i) dist[i] = graph.bfs_distances(nodes[i]);

    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            const std::int64_t len = dist[i][nodes[j]];
            if (len < 0)
                throw ValidationError("labels '" + labels[i] + "' and '" + labels[j] +
                                      "' are not connected in the hierarchy");
            r(i, j) = 1.0 / (static_cast<double>(len) + 1.0);
        }
    }
    return r;
}

SimilarityMatrix wordnet_similarity(const HierarchyGraph& graph, const LabelSpace& labels) {
    return wordnet_similarity(graph, labels.names);
}

SimilarityMatrix cooccurrence_similarity(const HitCounts& counts,
                                         const std::vector<std::string>& labels) {
    if (labels.empty()) throw std::invalid_argument("cooccurrence_similarity: no labels");

    for (const auto& label : labels) {
        if (counts.single_count(label) <= 0.0)
            throw ValidationError("label '" + label + "' has a zero or missing single count");
    }

    const std::size_t l = labels.size();
    Matrix r(l, l, 0.0);
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
            if (i == j) {
                r(i, j) = 1.0;
            } else {
                const double joint = counts.pair_count(labels[i], labels[j]);
                r(i, j) = joint / (counts.single_count(labels[i]) + counts.single_count(labels[j]));
            }
        }
    }
    return r;
}

SimilarityMatrix cooccurrence_similarity(const HitCounts& counts, const LabelSpace& labels) {
    return cooccurrence_similarity(counts, labels.names);
}

HierarchyGraph load_hierarchy_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open hierarchy file: " + path.string());

    HierarchyGraph graph;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        const auto fields = split_tabs(text);
        if (fields.size() != 2 || strip(fields[0]).empty() || strip(fields[1]).empty()) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_no << ": expected `child<TAB>parent`";
            throw ValidationError(msg.str());
        }
        graph.add_edge(strip(fields[0]), strip(fields[1]));
    }
    return graph;
}

HitCounts load_counts_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open counts file: " + path.string());

    HitCounts counts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = strip(line);
        if (text.empty() || text[0] == '#') continue;
        const auto fields = split_tabs(text);
        std::ostringstream where;
        where << path.string() << ":" << line_no;
        if (fields.size() == 2) {
            counts.single[strip(fields[0])] = parse_count(strip(fields[1]), where.str());
        } else if (fields.size() == 3) {
            const std::string a = strip(fields[0]);
            const std::string b = strip(fields[1]);
            const auto key = a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
            counts.pair[key] = parse_count(strip(fields[2]), where.str());
        } else {
            throw ValidationError(where.str() +
                                  ": expected `label<TAB>count` or `label_i<TAB>label_j<TAB>count`");
        }
    }
    return counts;
}

}  // namespace taep
