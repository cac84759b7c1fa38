#include "graphrec/similarity_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "graphrec/io.hpp"

namespace graphrec {

void SimilarityParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("similarity: alpha must be > 0");
    if (delta < 0 || delta > 4) throw std::invalid_argument("similarity: delta must be in [0,4]");
}

SimilarityGraph::SimilarityGraph(int n_nodes, std::vector<std::pair<int, int>> edges,
                                 std::vector<int> node_user_ids)
    : n_nodes_(n_nodes), node_user_ids_(std::move(node_user_ids)) {
    if (!node_user_ids_.empty() && static_cast<int>(node_user_ids_.size()) != n_nodes) {
        throw std::invalid_argument("graph: user id map size mismatch");
    }
    adjacency_.assign(n_nodes, {});
    for (auto& [u, v] : edges) {
        if (u == v) continue;
        if (u < 0 || v < 0 || u >= n_nodes || v >= n_nodes) {
            throw std::invalid_argument("graph: edge endpoint out of range");
        }
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        n_edges_ += nbrs.size();
    }
    n_edges_ /= 2;
}

bool SimilarityGraph::has_edge(int u, int v) const {
    const auto& nbrs = adjacency_.at(u);
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

int SimilarityGraph::user_id_of(int node) const {
    if (node_user_ids_.empty()) return node;
    return node_user_ids_.at(node);
}

int SimilarityGraph::component_count() const {
    std::vector<char> seen(n_nodes_, 0);
    std::vector<int> stack;
    int components = 0;
    for (int s = 0; s < n_nodes_; ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adjacency_[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
    }
    return components;
}

std::string SimilarityGraph::to_edge_list(const SimilarityParams& params) const {
    std::ostringstream out;
    out << "#nodes=" << n_nodes_ << " alpha=" << io::format_double(params.alpha)
        << " delta=" << params.delta << '\n';
    for (int u = 0; u < n_nodes_; ++u) {
        for (int v : adjacency_[u]) {
            if (u < v) out << user_id_of(u) << '\t' << user_id_of(v) << '\n';
        }
    }
    return out.str();
}

SimilarityGraph SimilarityGraph::from_edge_list(const std::string& text,
                                                const std::vector<int>& user_ids,
                                                SimilarityParams* params_out) {
    std::unordered_map<int, int> index;
    for (int i = 0; i < static_cast<int>(user_ids.size()); ++i) index.emplace(user_ids[i], i);

    const auto lines = io::split(text, '\n');
    if (lines.empty() || lines[0].substr(0, 7) != "#nodes=") {
        throw std::runtime_error("edge list: missing header");
    }
    int n = 0;
    SimilarityParams params;
    {
        const auto fields = io::split(lines[0], ' ');
        n = io::parse_int(fields.at(0).substr(7), "edge list header");
        params.alpha = io::parse_double(fields.at(1).substr(6), "edge list header");
        params.delta = io::parse_int(fields.at(2).substr(6), "edge list header");
    }
    if (n != static_cast<int>(user_ids.size())) {
        throw std::runtime_error("edge list: node count does not match the dataset");
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = io::split(lines[i], '\t');
        if (fields.size() != 2) {
            throw std::runtime_error("edge list line " + std::to_string(i + 1) + ": expected u\\tv");
        }
        const std::string ctx = "edge list line " + std::to_string(i + 1);
        edges.emplace_back(index.at(io::parse_int(fields[0], ctx)),
                           index.at(io::parse_int(fields[1], ctx)));
    }
    if (params_out) *params_out = params;
    return SimilarityGraph(n, std::move(edges), user_ids);
}

int co_similar_count(const RatingTable& ratings, int u, int v, int delta) {
    if (u == v) throw std::invalid_argument("co_similar_count: u == v");
    const auto& ru = ratings.ratings_of(u);
    const auto& rv = ratings.ratings_of(v);
    int count = 0;
    std::size_t i = 0, j = 0;
    while (i < ru.size() && j < rv.size()) {
        if (ru[i].first < rv[j].first) {
            ++i;
        } else if (ru[i].first > rv[j].first) {
            ++j;
        } else {
            if (std::abs(ru[i].second - rv[j].second) <= delta) ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

int edge_threshold(double alpha, int n_items) {
    double raw = alpha * static_cast<double>(n_items);
    return std::max(1, static_cast<int>(std::ceil(raw - 1e-9)));
}

SimilarityGraph build_graph(const RatingTable& ratings, int n_items,
                            const SimilarityParams& params) {
    params.validate();
    if (n_items <= 0) throw std::invalid_argument("build_graph: n_items must be > 0");
    const int n = ratings.n_users();
    const int threshold = edge_threshold(params.alpha, n_items);

    // Inverted index: per (item, rating value) the users who assigned it.
    // Pair counts accumulate into a triangular array indexed by (hi,lo).
    if (n > 46000) throw std::runtime_error("build_graph: user count exceeds pair-count capacity");
    std::vector<std::vector<std::vector<int>>> buckets(
        static_cast<std::size_t>(ratings.n_items()), std::vector<std::vector<int>>(5));
    for (int u = 0; u < n; ++u) {
        for (const auto& [item, rating] : ratings.ratings_of(u)) {
            buckets[item][rating - 1].push_back(u);
        }
    }

    std::vector<std::uint16_t> counts(static_cast<std::size_t>(n) * (n - 1) / 2, 0);
    auto tri = [n](int hi, int lo) {
        return static_cast<std::size_t>(hi) * (hi - 1) / 2 + lo;
    };
    auto bump = [&](int a, int b) {
        std::size_t idx = a > b ? tri(a, b) : tri(b, a);
        if (counts[idx] != std::numeric_limits<std::uint16_t>::max()) ++counts[idx];
    };

    for (const auto& item_buckets : buckets) {
        for (int v = 0; v < 5; ++v) {
            const auto& bv = item_buckets[v];
            // pairs within the same rating value
            for (std::size_t i = 0; i < bv.size(); ++i) {
                for (std::size_t j = i + 1; j < bv.size(); ++j) bump(bv[i], bv[j]);
            }
            // pairs across values within delta
            for (int w = v + 1; w < 5 && w - v <= params.delta; ++w) {
                const auto& bw = item_buckets[w];
                for (int a : bv) {
                    for (int b : bw) bump(a, b);
                }
            }
        }
    }

    std::vector<std::pair<int, int>> edges;
    for (int hi = 1; hi < n; ++hi) {
        const std::size_t row = tri(hi, 0);
        for (int lo = 0; lo < hi; ++lo) {
            if (counts[row + lo] >= threshold) edges.emplace_back(lo, hi);
        }
    }
    return SimilarityGraph(n, std::move(edges), ratings.user_ids());
}

}  // namespace graphrec
