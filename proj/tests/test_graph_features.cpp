#include <cmath>
#include <random>

#include <stdexcept>

#include "doctest.h"
#include "graphrec/graph_features.hpp"
#include "support/graph_oracles.hpp"

using namespace graphrec;

namespace {

SimilarityGraph path3() { return SimilarityGraph(3, {{0, 1}, {1, 2}}, {}); }
SimilarityGraph triangle() { return SimilarityGraph(3, {{0, 1}, {1, 2}, {0, 2}}, {}); }
SimilarityGraph star4() { return SimilarityGraph(4, {{0, 1}, {0, 2}, {0, 3}}, {}); }

// |got - want| within tol, absolute near zero and relative for large values.
void check_close(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        INFO("index ", i, ": got ", got[i], ", want ", want[i]);
        CHECK(std::abs(got[i] - want[i]) <= tol * std::max(1.0, std::abs(want[i])));
    }
}

}  // namespace

TEST_CASE("pagerank fixed points") {
    SUBCASE("triangle: uniform thirds") {
        for (double v : pagerank(triangle())) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-9));
    }
    SUBCASE("single edge: halves") {
        const SimilarityGraph g(2, {{0, 1}}, {});
        for (double v : pagerank(g)) CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("4-node star solves the 2-variable fixed point") {
        // hub = 0.15/4 + 0.85*3*leaf, leaf = 0.15/4 + 0.85*hub/3
        // => hub = 0.133125/0.2775, leaf from back-substitution
        const double hub = 0.133125 / 0.2775;
        const double leaf = 0.15 / 4 + 0.85 * hub / 3;
        const auto pr = pagerank(star4());
        CHECK(pr[0] == doctest::Approx(hub).epsilon(1e-6));
        for (int i = 1; i < 4; ++i) CHECK(pr[i] == doctest::Approx(leaf).epsilon(1e-6));
    }
    SUBCASE("sums to one, respects the teleport floor") {
        const auto g = oracle::random_graph(30, 0.2, 5);
        const auto pr = pagerank(g);
        double sum = 0.0;
        for (double v : pr) {
            sum += v;
            CHECK(v >= (1.0 - 0.85) / 30 - 1e-12);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("isolated nodes redistribute like dangling pages") {
        const SimilarityGraph g(3, {{0, 1}}, {});
        const auto pr = pagerank(g);
        CHECK(pr[0] == doctest::Approx(pr[1]).epsilon(1e-9));
        CHECK(pr[2] > 0.0);
        CHECK(pr[0] + pr[1] + pr[2] == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("non-convergence reports the residual") {
        CHECK_THROWS_WITH_AS(pagerank(star4(), 0.85, 1e-12, 1), doctest::Contains("residual"),
                             std::runtime_error);
    }
}

TEST_CASE("degree centrality") {
    SUBCASE("complete graph: all ones") {
        for (double v : degree_centrality(triangle())) CHECK(v == 1.0);
    }
    SUBCASE("path: middle 1.0, ends 0.5") {
        const auto cd = degree_centrality(path3());
        CHECK(cd[0] == 0.5);
        CHECK(cd[1] == 1.0);
        CHECK(cd[2] == 0.5);
    }
    SUBCASE("isolated node scores 0") {
        const SimilarityGraph g(3, {{0, 1}}, {});
        CHECK(degree_centrality(g)[2] == 0.0);
    }
    SUBCASE("single node rejected") {
        const SimilarityGraph g(1, {}, {});
        CHECK_THROWS_AS(degree_centrality(g), std::invalid_argument);
    }
}

TEST_CASE("closeness centrality with component correction") {
    SUBCASE("path: middle 1.0, end 2/3") {
        const auto cc = closeness_centrality(path3());
        CHECK(cc[1] == doctest::Approx(1.0));
        CHECK(cc[0] == doctest::Approx(2.0 / 3));
    }
    SUBCASE("complete graphs: all 1.0") {
        for (int n : {3, 5, 7}) {
            const auto g = oracle::graph_from_mask(n, oracle::graph_count(n) - 1);
            for (double v : closeness_centrality(g)) CHECK(v == doctest::Approx(1.0));
        }
    }
    SUBCASE("two disjoint edges: every node 1/3") {
        const SimilarityGraph g(4, {{0, 1}, {2, 3}}, {});
        for (double v : closeness_centrality(g)) CHECK(v == doctest::Approx(1.0 / 3));
    }
    SUBCASE("isolated node scores 0") {
        const SimilarityGraph g(3, {{0, 1}}, {});
        CHECK(closeness_centrality(g)[2] == 0.0);
    }
}

TEST_CASE("betweenness centrality") {
    SUBCASE("path, unnormalized: middle carries the single pair") {
        const auto cb = betweenness_centrality(path3(), {.normalized = false});
        CHECK(cb[0] == doctest::Approx(0.0));
        CHECK(cb[1] == doctest::Approx(1.0));
    }
    SUBCASE("triangle: no intermediates") {
        for (double v : betweenness_centrality(triangle(), {.normalized = false})) {
            CHECK(v == doctest::Approx(0.0));
        }
    }
    SUBCASE("star hub carries all C(3,2) leaf pairs") {
        const auto cb = betweenness_centrality(star4(), {.normalized = false});
        CHECK(cb[0] == doctest::Approx(3.0));
        for (int i = 1; i < 4; ++i) CHECK(cb[i] == doctest::Approx(0.0));
    }
    SUBCASE("normalization divides by (n-1)(n-2)/2") {
        const auto cb = betweenness_centrality(star4(), {.normalized = true});
        CHECK(cb[0] == doctest::Approx(1.0));
    }
}

TEST_CASE("load centrality") {
    SUBCASE("equals betweenness when shortest paths are unique (path graph)") {
        const auto lc = load_centrality(path3(), {.normalized = false});
        const auto cb = betweenness_centrality(path3(), {.normalized = false});
        for (int i = 0; i < 3; ++i) CHECK(lc[i] == doctest::Approx(cb[i]));
    }
    SUBCASE("triangle: all zero") {
        for (double v : load_centrality(triangle(), {.normalized = false})) {
            CHECK(v == doctest::Approx(0.0));
        }
    }
    SUBCASE("4-cycle: every node carries 1/2, agreeing with betweenness") {
        const SimilarityGraph g(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {});
        const auto lc = load_centrality(g, {.normalized = false});
        const auto cb = betweenness_centrality(g, {.normalized = false});
        for (int i = 0; i < 4; ++i) {
            CHECK(lc[i] == doctest::Approx(0.5));
            CHECK(cb[i] == doctest::Approx(0.5));
        }
    }
    SUBCASE("asymmetric tie-splitting: load and betweenness diverge") {
        // Smallest divergence appears on 6 nodes: two hubs (0,3) bridged by
        // three 2-paths with uneven side degrees. Equal splitting at each
        // node weighs the branches differently than path counting does.
        const SimilarityGraph g(6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}, {1, 5}, {2, 3}, {2, 4}}, {});
        const auto lc = load_centrality(g, {.normalized = false});
        const auto cb = betweenness_centrality(g, {.normalized = false});
        const auto lc_oracle = oracle::load(g, false);
        const auto cb_oracle = oracle::betweenness(g, false);
        for (int i = 0; i < 6; ++i) {
            CHECK(lc[i] == doctest::Approx(lc_oracle[i]).epsilon(1e-12));
            CHECK(cb[i] == doctest::Approx(cb_oracle[i]).epsilon(1e-12));
        }
        CHECK(lc[0] == doctest::Approx(3.25));
        CHECK(cb[0] == doctest::Approx(10.0 / 3));
        bool diverged = false;
        for (int i = 0; i < 6; ++i) {
            if (std::abs(lc[i] - cb[i]) > 1e-12) diverged = true;
        }
        CHECK(diverged);
    }
}

TEST_CASE("average neighbor degree") {
    SUBCASE("path") {
        const auto nd = average_neighbor_degree(path3());
        CHECK(nd[0] == doctest::Approx(2.0));
        CHECK(nd[1] == doctest::Approx(1.0));
    }
    SUBCASE("complete graph: all n-1") {
        const auto g = oracle::graph_from_mask(5, oracle::graph_count(5) - 1);
        for (double v : average_neighbor_degree(g)) CHECK(v == doctest::Approx(4.0));
    }
    SUBCASE("star: hub 1.0, leaves n-1") {
        const auto nd = average_neighbor_degree(star4());
        CHECK(nd[0] == doctest::Approx(1.0));
        for (int i = 1; i < 4; ++i) CHECK(nd[i] == doctest::Approx(3.0));
    }
}

TEST_CASE("weighted average neighbor degree") {
    SUBCASE("unit weights reduce to the unweighted value") {
        const auto g = oracle::random_graph(12, 0.4, 2);
        std::map<std::pair<int, int>, double> w;
        for (int u = 0; u < g.n_nodes(); ++u) {
            for (int v : g.neighbors(u)) {
                if (u < v) w[{u, v}] = 1.0;
            }
        }
        const auto weighted = average_neighbor_degree_weighted(g, w);
        const auto plain = average_neighbor_degree(g);
        for (int i = 0; i < g.n_nodes(); ++i) {
            CHECK(weighted[i] == doctest::Approx(plain[i]).epsilon(1e-12));
        }
    }
    SUBCASE("path with weights 2 and 1") {
        std::map<std::pair<int, int>, double> w{{{0, 1}, 2.0}, {{1, 2}, 1.0}};
        const auto weighted = average_neighbor_degree_weighted(path3(), w);
        CHECK(weighted[1] == doctest::Approx((2.0 * 1 + 1.0 * 1) / 3.0));
    }
    SUBCASE("single edge, any weight: neighbor degree 1") {
        const SimilarityGraph g(2, {{0, 1}}, {});
        std::map<std::pair<int, int>, double> w{{{0, 1}, 7.5}};
        const auto weighted = average_neighbor_degree_weighted(g, w);
        CHECK(weighted[0] == doctest::Approx(1.0));
    }
    SUBCASE("missing weight is an error") {
        std::map<std::pair<int, int>, double> w{{{0, 1}, 2.0}};
        CHECK_THROWS_AS(average_neighbor_degree_weighted(path3(), w), std::invalid_argument);
    }
}

TEST_CASE("extract_all composes the six columns in order") {
    SUBCASE("edgeless graph: uniform pagerank, zeros elsewhere") {
        const SimilarityGraph g(4, {}, {});
        const auto m = extract_all(g);
        for (int u = 0; u < 4; ++u) {
            CHECK(m.rows[u][0] == doctest::Approx(0.25).epsilon(1e-9));
            for (int c = 1; c < 6; ++c) CHECK(m.rows[u][c] == 0.0);
        }
    }
    SUBCASE("path row for the middle node") {
        const auto m = extract_all(path3());
        const auto pr = pagerank(path3());
        CHECK(m.rows[1][0] == doctest::Approx(pr[1]));
        CHECK(m.rows[1][1] == doctest::Approx(1.0));  // CD
        CHECK(m.rows[1][2] == doctest::Approx(1.0));  // CC
        CHECK(m.rows[1][3] == doctest::Approx(1.0));  // CB normalized
        CHECK(m.rows[1][4] == doctest::Approx(1.0));  // LC normalized
        CHECK(m.rows[1][5] == doctest::Approx(1.0));  // AND
    }
    SUBCASE("csv export shape") {
        const auto m = extract_all(path3());
        const std::string csv = m.to_csv();
        CHECK(csv.substr(0, 26) == "user_id,PR,CD,CC,CB,LC,AND");
    }
}

TEST_CASE("permutation equivariance of all six features") {
    const auto g = oracle::random_graph(10, 0.35, 11);
    // relabel nodes by reversal
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < g.n_nodes(); ++u) {
        for (int v : g.neighbors(u)) {
            if (u < v) edges.emplace_back(9 - u, 9 - v);
        }
    }
    const SimilarityGraph h(10, std::move(edges), {});
    const auto mg = extract_all(g);
    const auto mh = extract_all(h);
    for (int u = 0; u < 10; ++u) {
        for (int c = 0; c < 6; ++c) {
            CHECK(mg.rows[u][c] == doctest::Approx(mh.rows[9 - u][c]).epsilon(1e-9));
        }
    }
}

TEST_CASE("betweenness and load agree on random trees") {
    // unique shortest paths => identical values
    for (unsigned seed = 0; seed < 20; ++seed) {
        std::mt19937 rng(seed);
        const int n = 3 + static_cast<int>(rng() % 10);
        std::vector<std::pair<int, int>> edges;
        for (int v = 1; v < n; ++v) {
            edges.emplace_back(v, static_cast<int>(rng() % v));  // random parent
        }
        const SimilarityGraph g(n, std::move(edges), {});
        const auto cb = betweenness_centrality(g, {.normalized = false});
        const auto lc = load_centrality(g, {.normalized = false});
        for (int i = 0; i < n; ++i) CHECK(lc[i] == doctest::Approx(cb[i]).epsilon(1e-12));
    }
}

TEST_CASE("exhaustive small-graph agreement with brute-force oracles") {
    // every labeled graph on up to 5 nodes (the acceptance suite pushes this
    // to 6 plus random 7..12-node graphs)
    for (int n = 2; n <= 5; ++n) {
        for (long long mask = 0; mask < oracle::graph_count(n); ++mask) {
            const auto g = oracle::graph_from_mask(n, mask);
            check_close(betweenness_centrality(g, {.normalized = false}),
                        oracle::betweenness(g, false), 1e-9);
            check_close(load_centrality(g, {.normalized = false}), oracle::load(g, false), 1e-9);
            check_close(closeness_centrality(g), oracle::closeness_centrality(g), 1e-9);
            check_close(average_neighbor_degree(g), oracle::average_neighbor_degree(g), 1e-9);
            check_close(pagerank(g), oracle::pagerank(g, 0.85), 1e-6);
        }
    }
}

TEST_CASE("threaded centrality reduction is bitwise deterministic") {
    const auto g = oracle::random_graph(60, 0.15, 21);
    const auto cb1 = betweenness_centrality(g, {.normalized = true, .threads = 1});
    const auto cb4 = betweenness_centrality(g, {.normalized = true, .threads = 4});
    CHECK(cb1 == cb4);  // exact equality required
    const auto lc1 = load_centrality(g, {.normalized = true, .threads = 1});
    const auto lc4 = load_centrality(g, {.normalized = true, .threads = 4});
    CHECK(lc1 == lc4);
}

TEST_CASE("pivot sampling approximates exact betweenness") {
    const auto g = oracle::random_graph(80, 0.12, 33);
    const auto exact = betweenness_centrality(g, {.normalized = true});
    CentralityOptions opts{.normalized = true};
    opts.pivots = 40;
    opts.pivot_seed = 7;
    const auto approx = betweenness_centrality(g, opts);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        err += std::abs(exact[i] - approx[i]);
        scale += exact[i];
    }
    CHECK(err / std::max(scale, 1e-12) < 0.5);  // loose: unbiased but noisy
    // full pivot count must reproduce the exact values
    CentralityOptions all{.normalized = true};
    all.pivots = g.n_nodes();
    CHECK(betweenness_centrality(g, all) == exact);
}
