#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphrec/types.hpp"

namespace graphrec {

struct SimilarityParams {
    double alpha = 0.01;  // edge threshold as a fraction of the item count
    int delta = 0;        // |r_ui - r_vi| <= delta counts as agreement

    void validate() const;
};

/// Undirected, unweighted user graph. Edges connect users whose number of
/// co-rated items in rating agreement reaches ceil(alpha * n_items).
/// Symmetric, no self-loops, no duplicate edges; immutable once built.
class SimilarityGraph {
public:
    SimilarityGraph() = default;
    /// `edges` as (u,v) node-index pairs; duplicates and orientation are normalized.
    SimilarityGraph(int n_nodes, std::vector<std::pair<int, int>> edges,
                    std::vector<int> node_user_ids);

    int n_nodes() const { return n_nodes_; }
    std::size_t n_edges() const { return n_edges_; }
    const std::vector<int>& neighbors(int node) const { return adjacency_.at(node); }
    int degree(int node) const { return static_cast<int>(adjacency_.at(node).size()); }
    bool has_edge(int u, int v) const;

    /// Node index <-> user id mapping (empty mapping means ids == indices).
    int user_id_of(int node) const;
    const std::vector<int>& node_user_ids() const { return node_user_ids_; }

    int component_count() const;

    /// One-line header `#nodes=<n> alpha=<a> delta=<d>` followed by `u\tv`
    /// lines carrying user ids.
    std::string to_edge_list(const SimilarityParams& params) const;

    /// Parses the export format back; `user_ids` supplies the node order.
    static SimilarityGraph from_edge_list(const std::string& text,
                                          const std::vector<int>& user_ids,
                                          SimilarityParams* params_out = nullptr);

private:
    int n_nodes_ = 0;
    std::size_t n_edges_ = 0;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> node_user_ids_;
};

/// Number of items rated by both u and v with |r_u - r_v| <= delta.
/// u and v are user indices into `ratings`.
int co_similar_count(const RatingTable& ratings, int u, int v, int delta);

/// Edge threshold ceil(alpha * m), computed with a small slack so that
/// alpha * m values that are integers up to floating round-off stay exact.
int edge_threshold(double alpha, int n_items);

SimilarityGraph build_graph(const RatingTable& ratings, int n_items, const SimilarityParams& params);

}  // namespace graphrec
