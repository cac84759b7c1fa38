#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace graphrec {

/// K-means result: centroids, nearest-centroid assignment (ties to the lowest
/// index) and the summed squared-distance objective.
struct ClusterModel {
    int k = 0;
    Eigen::MatrixXd centroids;  // k x dim
    std::vector<int> assignment;
    double inertia = 0.0;

    std::string serialize() const;
};

/// Lloyd iterations from k-means++ seeding, best of n_init restarts by
/// inertia (ties to the lowest restart index). Empty clusters are reseeded to
/// the point farthest from its centroid. The objective is checked to be
/// non-increasing across iterations.
ClusterModel kmeans_fit(const Eigen::MatrixXd& points, int k, unsigned seed, int max_iter = 300,
                        double tol = 1e-6, int n_init = 10);

struct SelectionResult {
    int k_star = 0;
    std::vector<int> k_values;
    std::vector<double> curve;  // inertia or silhouette per k
    bool degenerate = false;    // no interior knee found (elbow only)

    /// `K,<curve name>` CSV.
    std::string curve_csv(const std::string& name) const;
};

/// Knee of the inertia curve: the K whose point lies farthest from the line
/// joining the curve endpoints. A (numerically) straight curve has no
/// interior knee; the smallest K is returned with `degenerate` set.
SelectionResult elbow_select(const Eigen::MatrixXd& points, const std::vector<int>& k_range,
                             unsigned seed);

/// Mean silhouette over all points: (b-a)/max(a,b) with a the mean
/// same-cluster distance and b the smallest mean other-cluster distance.
/// Singleton clusters score 0; a == b == 0 scores 0. Requires k >= 2 and no
/// empty cluster.
double silhouette_score(const Eigen::MatrixXd& points, const ClusterModel& model);

SelectionResult silhouette_select(const Eigen::MatrixXd& points, const std::vector<int>& k_range,
                                  unsigned seed);

/// Nearest centroid, ties to the lowest index.
int assign(const ClusterModel& model, const Eigen::VectorXd& point);

std::vector<int> default_k_range(int lo, int hi, int n_points);

}  // namespace graphrec
