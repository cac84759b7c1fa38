#include "graphrec/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "graphrec/io.hpp"

namespace graphrec {

namespace {

double sq_dist(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
    return (a - b).squaredNorm();
}

int nearest_centroid(const Eigen::MatrixXd& centroids, const Eigen::RowVectorXd& p,
                     double* best_out = nullptr) {
    int best = 0;
    double best_d = sq_dist(centroids.row(0), p);
    for (int c = 1; c < centroids.rows(); ++c) {
        const double d = sq_dist(centroids.row(c), p);
        if (d < best_d) {  // strict: ties keep the lowest index
            best_d = d;
            best = c;
        }
    }
    if (best_out) *best_out = best_d;
    return best;
}

Eigen::MatrixXd kmeanspp_seed(const Eigen::MatrixXd& points, int k, std::mt19937& rng) {
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd centroids(k, points.cols());
    std::uniform_int_distribution<int> uniform(0, n - 1);
    centroids.row(0) = points.row(uniform(rng));
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < c; ++j) best = std::min(best, sq_dist(centroids.row(j), points.row(i)));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            // all remaining points coincide with chosen centroids
            centroids.row(c) = points.row(uniform(rng));
            continue;
        }
        std::uniform_real_distribution<double> pick(0.0, total);
        double target = pick(rng);
        int chosen = -1;
        for (int i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            chosen = i;
            target -= d2[i];
            if (target <= 0.0) break;
        }
        centroids.row(c) = points.row(chosen);
    }
    return centroids;
}

struct LloydResult {
    Eigen::MatrixXd centroids;
    std::vector<int> assignment;
    double inertia = 0.0;
};

LloydResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids, int max_iter,
                  double tol) {
    const int n = static_cast<int>(points.rows());
    const int k = static_cast<int>(centroids.rows());
    std::vector<int> assignment(n, 0);

    // Nearest-centroid assignment with empty-cluster repair: an empty
    // centroid jumps to the point farthest from its assigned centroid.
    auto assign_all = [&]() {
        double inertia;
        while (true) {
            inertia = 0.0;
            std::vector<int> counts(k, 0);
            for (int i = 0; i < n; ++i) {
                double d = 0.0;
                assignment[i] = nearest_centroid(centroids, points.row(i), &d);
                inertia += d;
                ++counts[assignment[i]];
            }
            int empty = -1;
            for (int c = 0; c < k; ++c) {
                if (counts[c] == 0) {
                    empty = c;
                    break;
                }
            }
            if (empty < 0) return inertia;
            int farthest = 0;
            double worst = -1.0;
            for (int i = 0; i < n; ++i) {
                const double d = sq_dist(centroids.row(assignment[i]), points.row(i));
                if (d > worst) {
                    worst = d;
                    farthest = i;
                }
            }
            // Nothing to grab when every point already coincides with its
            // centroid (duplicate inputs); the empty cluster stays empty.
            if (worst <= 0.0) return inertia;
            centroids.row(empty) = points.row(farthest);
        }
    };

    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iter; ++iter) {
        const double inertia = assign_all();
        if (inertia > prev_inertia + 1e-9 * std::max(1.0, prev_inertia)) {
            throw std::logic_error("kmeans: objective increased during Lloyd iteration");
        }
        const bool converged = iter > 0 && prev_inertia - inertia <= tol;
        prev_inertia = inertia;
        if (converged || iter == max_iter - 1) {
            return {std::move(centroids), std::move(assignment), inertia};
        }
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(assignment[i]) += points.row(i);
            ++counts[assignment[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) centroids.row(c) = sums.row(c) / static_cast<double>(counts[c]);
        }
    }
    throw std::logic_error("kmeans: unreachable");
}

}  // namespace

ClusterModel kmeans_fit(const Eigen::MatrixXd& points, int k, unsigned seed, int max_iter,
                        double tol, int n_init) {
    const int n = static_cast<int>(points.rows());
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > n) throw std::invalid_argument("kmeans: k exceeds number of points");
    if (n_init < 1) throw std::invalid_argument("kmeans: n_init must be >= 1");

    ClusterModel best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < n_init; ++restart) {
        std::seed_seq sseq{seed, static_cast<unsigned>(restart)};
        std::mt19937 rng(sseq);
        LloydResult run = lloyd(points, kmeanspp_seed(points, k, rng), max_iter, tol);
        if (run.inertia < best.inertia) {  // strict: ties keep the lowest restart
            best.k = k;
            best.centroids = std::move(run.centroids);
            best.assignment = std::move(run.assignment);
            best.inertia = run.inertia;
        }
    }
    return best;
}

double silhouette_score(const Eigen::MatrixXd& points, const ClusterModel& model) {
    const int n = static_cast<int>(points.rows());
    const int k = model.k;
    if (k < 2) throw std::invalid_argument("silhouette: need k >= 2");
    std::vector<int> counts(k, 0);
    for (int a : model.assignment) ++counts[a];
    for (int c = 0; c < k; ++c) {
        if (counts[c] == 0) throw std::invalid_argument("silhouette: empty cluster");
    }

    double total = 0.0;
    std::vector<double> dist_sum(k);
    for (int i = 0; i < n; ++i) {
        std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            dist_sum[model.assignment[j]] += std::sqrt(sq_dist(points.row(i), points.row(j)));
        }
        const int own = model.assignment[i];
        if (counts[own] == 1) continue;  // singleton scores 0
        const double a = dist_sum[own] / (counts[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c < k; ++c) {
            if (c != own) b = std::min(b, dist_sum[c] / counts[c]);
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / n;
}

namespace {

SelectionResult sweep(const Eigen::MatrixXd& points, const std::vector<int>& k_range, unsigned seed,
                      bool silhouette) {
    if (k_range.empty()) throw std::invalid_argument("selection: empty k range");
    SelectionResult result;
    for (int k : k_range) {
        ClusterModel model = kmeans_fit(points, k, seed);
        result.k_values.push_back(k);
        result.curve.push_back(silhouette ? silhouette_score(points, model) : model.inertia);
    }
    return result;
}

}  // namespace

SelectionResult elbow_select(const Eigen::MatrixXd& points, const std::vector<int>& k_range,
                             unsigned seed) {
    if (k_range.size() < 3) throw std::invalid_argument("elbow: need at least 3 K values");
    SelectionResult result = sweep(points, k_range, seed, false);

    // Normalize both axes to [0,1]; argmax of the distance to the endpoint
    // chord is scale-invariant, the normalization only feeds the flatness test.
    const double x0 = result.k_values.front(), x1 = result.k_values.back();
    const double y0 = result.curve.front(), y1 = result.curve.back();
    const double xs = x1 - x0;
    const double ys = y1 != y0 ? y1 - y0 : 1.0;
    double best = -1.0;
    int best_k = result.k_values.front();
    for (std::size_t i = 1; i + 1 < result.curve.size(); ++i) {
        const double px = (result.k_values[i] - x0) / xs;
        const double py = (result.curve[i] - y0) / ys;
        // distance from (px,py) to the chord (0,0)-(1,1), up to the 1/sqrt(2)
        // constant; a convex decreasing curve maps above the chord (py > px)
        const double d = py - px;
        if (d > best) {
            best = d;
            best_k = result.k_values[i];
        }
    }
    // Straight or concave curves have no interior knee.
    if (best <= 1e-9) {
        result.degenerate = true;
        result.k_star = result.k_values.front();
    } else {
        result.k_star = best_k;
    }
    return result;
}

SelectionResult silhouette_select(const Eigen::MatrixXd& points, const std::vector<int>& k_range,
                                  unsigned seed) {
    for (int k : k_range) {
        if (k < 2) throw std::invalid_argument("silhouette_select: k range must start at >= 2");
    }
    SelectionResult result = sweep(points, k_range, seed, true);
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.curve.size(); ++i) {
        if (result.curve[i] > result.curve[best]) best = i;
    }
    result.k_star = result.k_values[best];
    return result;
}

int assign(const ClusterModel& model, const Eigen::VectorXd& point) {
    if (point.size() != model.centroids.cols()) {
        throw std::invalid_argument("assign: dimension mismatch");
    }
    return nearest_centroid(model.centroids, point.transpose());
}

std::vector<int> default_k_range(int lo, int hi, int n_points) {
    std::vector<int> range;
    for (int k = lo; k <= hi && k <= n_points; ++k) range.push_back(k);
    if (range.empty()) throw std::invalid_argument("k range empty after clamping to point count");
    return range;
}

std::string SelectionResult::curve_csv(const std::string& name) const {
    std::ostringstream out;
    out << "K," << name << '\n';
    for (std::size_t i = 0; i < k_values.size(); ++i) {
        out << k_values[i] << ',' << io::format_double(curve[i]) << '\n';
    }
    return out.str();
}

std::string ClusterModel::serialize() const {
    std::ostringstream out;
    out << "kmeans v1\n";
    out << k << ' ' << centroids.cols() << ' ' << assignment.size() << ' '
        << io::format_double(inertia) << '\n';
    for (int c = 0; c < k; ++c) {
        for (Eigen::Index j = 0; j < centroids.cols(); ++j) {
            out << (j ? " " : "") << io::format_double(centroids(c, j));
        }
        out << '\n';
    }
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        out << (i ? " " : "") << assignment[i];
    }
    out << '\n';
    return out.str();
}

}  // namespace graphrec
