#include "graphrec/graph_features.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "graphrec/io.hpp"

namespace graphrec {

const char* const GraphFeatureMatrix::kColumnNames[GraphFeatureMatrix::kColumns] = {
    "PR", "CD", "CC", "CB", "LC", "AND"};

std::string GraphFeatureMatrix::to_csv() const {
    std::ostringstream out;
    out << "user_id";
    for (const char* name : kColumnNames) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << user_ids[i];
        for (double v : rows[i]) out << ',' << io::format_double(v);
        out << '\n';
    }
    return out.str();
}

std::vector<double> pagerank(const SimilarityGraph& g, double damping, double tol, int max_iter) {
    const int n = g.n_nodes();
    if (n == 0) throw std::invalid_argument("pagerank: empty graph");
    const double teleport = (1.0 - damping) / n;

    std::vector<double> rank(n, 1.0 / n), next(n);
    for (int iter = 0; iter < max_iter; ++iter) {
        double dangling_mass = 0.0;
        for (int u = 0; u < n; ++u) {
            if (g.degree(u) == 0) dangling_mass += rank[u];
        }
        std::fill(next.begin(), next.end(), teleport + damping * dangling_mass / n);
        for (int u = 0; u < n; ++u) {
            const int deg = g.degree(u);
            if (deg == 0) continue;
            const double share = damping * rank[u] / deg;
            for (int v : g.neighbors(u)) next[v] += share;
        }
        double change = 0.0;
        for (int u = 0; u < n; ++u) change += std::abs(next[u] - rank[u]);
        rank.swap(next);
        if (change < tol) return rank;
    }
    double residual = 0.0;
    for (int u = 0; u < n; ++u) residual += std::abs(rank[u] - next[u]);
    throw std::runtime_error("pagerank: no convergence after " + std::to_string(max_iter) +
                             " iterations (residual " + io::format_double(residual) + ")");
}

std::vector<double> degree_centrality(const SimilarityGraph& g) {
    const int n = g.n_nodes();
    if (n < 2) throw std::invalid_argument("degree_centrality: need at least 2 nodes");
    std::vector<double> out(n);
    for (int u = 0; u < n; ++u) out[u] = static_cast<double>(g.degree(u)) / (n - 1);
    return out;
}

namespace {

/// BFS from `source`; fills dist (-1 unreachable), returns visit order.
std::vector<int> bfs(const SimilarityGraph& g, int source, std::vector<int>& dist) {
    dist.assign(g.n_nodes(), -1);
    std::vector<int> order;
    order.reserve(g.n_nodes());
    dist[source] = 0;
    order.push_back(source);
    for (std::size_t head = 0; head < order.size(); ++head) {
        const int u = order[head];
        for (int v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                order.push_back(v);
            }
        }
    }
    return order;
}

/// Runs `per_source` over the given sources in fixed-size chunks; chunk
/// results are reduced in chunk order so the output is identical for any
/// thread count.
void accumulate_sources(const std::vector<int>& sources, int n, int threads,
                        const std::function<void(int, std::vector<double>&)>& per_source,
                        std::vector<double>& out) {
    constexpr std::size_t kChunk = 64;
    const std::size_t n_chunks = (sources.size() + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> partials(n_chunks);

    auto run_chunk = [&](std::size_t c) {
        auto& acc = partials[c];
        acc.assign(n, 0.0);
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(sources.size(), lo + kChunk);
        for (std::size_t i = lo; i < hi; ++i) per_source(sources[i], acc);
    };

    if (threads <= 1 || n_chunks <= 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int n_threads = std::min<std::size_t>(threads, n_chunks);
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                while (true) {
                    std::size_t c = next.fetch_add(1);
                    if (c >= n_chunks) break;
                    run_chunk(c);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    out.assign(n, 0.0);
    for (std::size_t c = 0; c < n_chunks; ++c) {
        for (int u = 0; u < n; ++u) out[u] += partials[c][u];
    }
}

std::vector<int> pick_sources(const SimilarityGraph& g, const CentralityOptions& opts,
                              double& rescale) {
    const int n = g.n_nodes();
    std::vector<int> sources(n);
    std::iota(sources.begin(), sources.end(), 0);
    rescale = 1.0;
    if (opts.pivots && *opts.pivots < n) {
        const int k = *opts.pivots;
        if (k < 1) throw std::invalid_argument("centrality: pivot count must be >= 1");
        std::mt19937 rng(opts.pivot_seed);
        std::shuffle(sources.begin(), sources.end(), rng);
        sources.resize(k);
        std::sort(sources.begin(), sources.end());
        rescale = static_cast<double>(n) / k;
    }
    return sources;
}

void apply_pair_scaling(std::vector<double>& values, int n, bool normalized, double rescale) {
    // Each unordered pair is visited from both endpoints: halve, then
    // optionally scale into [0,1] by the number of pairs excluding the node.
    double scale = 0.5 * rescale;
    if (normalized) {
        if (n > 2) {
            scale /= static_cast<double>(n - 1) * (n - 2) / 2.0;
        } else {
            std::fill(values.begin(), values.end(), 0.0);
            return;
        }
    }
    for (double& v : values) v *= scale;
}

}  // namespace

std::vector<double> closeness_centrality(const SimilarityGraph& g) {
    const int n = g.n_nodes();
    std::vector<double> out(n, 0.0);
    if (n <= 1) return out;
    std::vector<int> dist;
    for (int u = 0; u < n; ++u) {
        if (g.degree(u) == 0) continue;  // isolated: 0 by convention
        bfs(g, u, dist);
        long long sum = 0;
        int reachable = 0;
        for (int v = 0; v < n; ++v) {
            if (v != u && dist[v] > 0) {
                sum += dist[v];
                ++reachable;
            }
        }
        if (sum > 0) {
            const double raw = static_cast<double>(reachable) / static_cast<double>(sum);
            out[u] = raw * (static_cast<double>(reachable) / (n - 1));
        }
    }
    return out;
}

std::vector<double> betweenness_centrality(const SimilarityGraph& g,
                                           const CentralityOptions& opts) {
    const int n = g.n_nodes();
    std::vector<double> out(n, 0.0);
    if (n < 3) {
        return out;
    }
    double rescale = 1.0;
    const std::vector<int> sources = pick_sources(g, opts, rescale);

    auto per_source = [&g, n](int s, std::vector<double>& acc) {
        // Brandes: BFS with path counts, then dependency accumulation in
        // reverse visit order.
        std::vector<int> dist;
        std::vector<double> sigma(n, 0.0), delta(n, 0.0);
        std::vector<std::vector<int>> preds(n);
        dist.assign(n, -1);
        std::vector<int> order;
        order.reserve(n);
        dist[s] = 0;
        sigma[s] = 1.0;
        order.push_back(s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            const int u = order[head];
            for (int v : g.neighbors(u)) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    order.push_back(v);
                }
                if (dist[v] == dist[u] + 1) {
                    sigma[v] += sigma[u];
                    preds[v].push_back(u);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int p : preds[w]) {
                delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) acc[w] += delta[w];
        }
    };

    accumulate_sources(sources, n, opts.threads, per_source, out);
    apply_pair_scaling(out, n, opts.normalized, rescale);
    return out;
}

std::vector<double> load_centrality(const SimilarityGraph& g, const CentralityOptions& opts) {
    const int n = g.n_nodes();
    std::vector<double> out(n, 0.0);
    if (n < 3) return out;
    double rescale = 1.0;
    const std::vector<int> sources = pick_sources(g, opts, rescale);

    auto per_source = [&g, n](int s, std::vector<double>& acc) {
        std::vector<int> dist;
        const std::vector<int> order = bfs(g, s, dist);
        // One unit per reachable target; walking back from the farthest
        // nodes, each node's accumulated flow splits equally among its
        // equal-distance predecessors.
        std::vector<double> flow(n, 1.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int v = *it;
            if (v == s) continue;
            int n_preds = 0;
            for (int u : g.neighbors(v)) {
                if (dist[u] >= 0 && dist[u] == dist[v] - 1) ++n_preds;
            }
            const double share = flow[v] / n_preds;
            for (int u : g.neighbors(v)) {
                if (u != s && dist[u] >= 0 && dist[u] == dist[v] - 1) flow[u] += share;
            }
        }
        for (int v : order) {
            if (v != s) acc[v] += flow[v] - 1.0;  // drop the unit where v is the target
        }
    };

    accumulate_sources(sources, n, opts.threads, per_source, out);
    apply_pair_scaling(out, n, opts.normalized, rescale);
    return out;
}

std::vector<double> average_neighbor_degree(const SimilarityGraph& g) {
    const int n = g.n_nodes();
    std::vector<double> out(n, 0.0);
    for (int u = 0; u < n; ++u) {
        const auto& nbrs = g.neighbors(u);
        if (nbrs.empty()) continue;
        double sum = 0.0;
        for (int v : nbrs) sum += g.degree(v);
        out[u] = sum / static_cast<double>(nbrs.size());
    }
    return out;
}

std::vector<double> average_neighbor_degree_weighted(
    const SimilarityGraph& g, const std::map<std::pair<int, int>, double>& weights) {
    const int n = g.n_nodes();
    std::vector<double> out(n, 0.0);
    for (int u = 0; u < n; ++u) {
        const auto& nbrs = g.neighbors(u);
        if (nbrs.empty()) continue;
        double weighted_sum = 0.0, strength = 0.0;
        for (int v : nbrs) {
            auto key = std::minmax(u, v);
            auto it = weights.find({key.first, key.second});
            if (it == weights.end()) {
                throw std::invalid_argument("average_neighbor_degree_weighted: missing weight for edge (" +
                                            std::to_string(key.first) + "," +
                                            std::to_string(key.second) + ")");
            }
            weighted_sum += it->second * g.degree(v);
            strength += it->second;
        }
        out[u] = strength > 0.0 ? weighted_sum / strength : 0.0;
    }
    return out;
}

GraphFeatureMatrix extract_all(const SimilarityGraph& g, const CentralityOptions& opts) {
    const int n = g.n_nodes();
    GraphFeatureMatrix m;
    m.rows.resize(n);
    m.user_ids.resize(n);
    for (int u = 0; u < n; ++u) m.user_ids[u] = g.user_id_of(u);

    const auto pr = pagerank(g);
    const auto cd = n >= 2 ? degree_centrality(g) : std::vector<double>(n, 0.0);
    const auto cc = closeness_centrality(g);
    const auto cb = betweenness_centrality(g, opts);
    const auto lc = load_centrality(g, opts);
    const auto nd = average_neighbor_degree(g);
    for (int u = 0; u < n; ++u) {
        m.rows[u] = {pr[u], cd[u], cc[u], cb[u], lc[u], nd[u]};
    }
    return m;
}

}  // namespace graphrec
