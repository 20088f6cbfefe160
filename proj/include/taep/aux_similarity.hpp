#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "taep/core_model.hpp"

namespace taep {

// Undirected is-a hierarchy over word strings. Labels resolve to nodes by
// exact string match; synonyms are expressed as extra edges in the file.
class HierarchyGraph {
public:
    // Adds the undirected edge child—parent, creating nodes as needed.
    void add_edge(const std::string& child, const std::string& parent);

    bool has_node(const std::string& name) const { return index_.count(name) != 0; }
    std::size_t node_count() const { return names_.size(); }
    std::size_t node_index(const std::string& name) const;
    const std::vector<std::vector<std::size_t>>& adjacency() const { return adjacency_; }

    // Unweighted shortest-path lengths from `source` to every node;
    // -1 marks unreachable nodes.
    std::vector<std::int64_t> bfs_distances(std::size_t source) const;

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

// Web-scale hit counts: single-label counts and unordered pair counts.
struct HitCounts {
    std::map<std::string, double> single;
    std::map<std::pair<std::string, std::string>, double> pair;

    double single_count(const std::string& label) const;
    double pair_count(const std::string& a, const std::string& b) const;
};

// R_ij = 1 / (path_length(i, j) + 1) over the undirected hierarchy.
SimilarityMatrix wordnet_similarity(const HierarchyGraph& graph,
                                    const std::vector<std::string>& labels);
SimilarityMatrix wordnet_similarity(const HierarchyGraph& graph, const LabelSpace& labels);

// Dice coefficient R_ij = HC(i,j) / (HC(i) + HC(j)); the diagonal is 1.
SimilarityMatrix cooccurrence_similarity(const HitCounts& counts,
                                         const std::vector<std::string>& labels);
SimilarityMatrix cooccurrence_similarity(const HitCounts& counts, const LabelSpace& labels);

// One edge per line: `child<TAB>parent`; '#' starts a comment line.
HierarchyGraph load_hierarchy_file(const std::filesystem::path& path);

// `label<TAB>count` or `label_i<TAB>label_j<TAB>count` per line; '#' comments.
HitCounts load_counts_file(const std::filesystem::path& path);

}  // namespace taep
