#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphrec/similarity_graph.hpp"

namespace graphrec {

/// Per-node feature rows in fixed column order:
///   PR, CD, CC, CB, LC, AND
struct GraphFeatureMatrix {
    static constexpr int kColumns = 6;
    static const char* const kColumnNames[kColumns];

    std::vector<std::array<double, kColumns>> rows;
    std::vector<int> user_ids;  // aligned with rows

    int n_rows() const { return static_cast<int>(rows.size()); }

    /// `user_id,PR,CD,CC,CB,LC,AND` header plus one full-precision row per node.
    std::string to_csv() const;
};

struct CentralityOptions {
    bool normalized = true;  // betweenness/load scaled by (n-1)(n-2)/2
    int threads = 1;
    /// When set, betweenness/load are estimated from this many source pivots
    /// (unbiased n/k rescale) instead of all sources. Exact mode when absent.
    std::optional<int> pivots;
    unsigned pivot_seed = 0;
};

/// Power iteration with uniform teleport; nodes without neighbors spread
/// their mass uniformly. Throws after max_iter without L1 convergence.
std::vector<double> pagerank(const SimilarityGraph& g, double damping = 0.85,
                             double tol = 1e-8, int max_iter = 200);

/// deg(u) / (n-1). Requires n >= 2.
std::vector<double> degree_centrality(const SimilarityGraph& g);

/// Closeness with the component-size correction for disconnected graphs:
/// (r / sum of distances) * (r / (n-1)) over the r reachable others.
std::vector<double> closeness_centrality(const SimilarityGraph& g);

std::vector<double> betweenness_centrality(const SimilarityGraph& g,
                                           const CentralityOptions& opts = {});

/// Newman load: one unit per (s,t) pair, split equally among equal-distance
/// predecessors at every node (not proportionally to path counts).
std::vector<double> load_centrality(const SimilarityGraph& g,
                                    const CentralityOptions& opts = {});

std::vector<double> average_neighbor_degree(const SimilarityGraph& g);

/// Weighted variant: sum(w_uv * k_v) / sum(w_uv). `weights` is keyed by
/// (min(u,v), max(u,v)) and must cover every edge.
std::vector<double> average_neighbor_degree_weighted(
    const SimilarityGraph& g, const std::map<std::pair<int, int>, double>& weights);

GraphFeatureMatrix extract_all(const SimilarityGraph& g, const CentralityOptions& opts = {});

}  // namespace graphrec
