#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "graphrec/autoencoder.hpp"
#include "graphrec/clustering.hpp"
#include "graphrec/feature_builder.hpp"
#include "graphrec/types.hpp"

namespace graphrec {

/// How a cluster-item cell was estimated.
enum class CellSource : std::uint8_t {
    Direct,        // mean of in-cluster ratings of the item
    SimilarItems,  // mean of in-cluster ratings of genre-similar items
    ClusterMean,   // mean of all in-cluster ratings (or global mean)
};

/// Genre Jaccard similarity between two items; pairs with no genres score 0.
double item_similarity(const ItemProfile& a, const ItemProfile& b);

/// Per-item ranked neighbor lists (score descending, then item index
/// ascending; self excluded). Only pairs with score >= min_score are kept.
class ItemSimilarityIndex {
public:
    ItemSimilarityIndex() = default;
    ItemSimilarityIndex(const std::vector<ItemProfile>& items, double min_score);

    struct Entry {
        int item = 0;  // item index
        double score = 0.0;
    };

    int n_items() const { return static_cast<int>(lists_.size()); }
    const std::vector<Entry>& neighbors(int item_idx) const { return lists_.at(item_idx); }

    /// Items with similarity >= threshold (a prefix of the ranked list).
    std::vector<int> similar_items(int item_idx, double threshold) const;

private:
    std::vector<std::vector<Entry>> lists_;
};

/// One-hot user->cluster membership.
struct UserClusterMatrix {
    int k = 0;
    std::vector<int> cluster_of;  // per user index

    Eigen::MatrixXd dense() const;
};

/// K x m estimated ratings with per-cell provenance.
struct ClusterItemMatrix {
    Eigen::MatrixXd values;  // k x n_items, every cell in [1,5]
    std::vector<std::vector<CellSource>> sources;

    std::string to_csv() const;
};

/// Fills every (cluster, item) cell by the tiered fallback: in-cluster item
/// mean, else in-cluster mean over genre-similar items, else the in-cluster
/// mean; a cluster with no training ratings at all falls back to the global
/// train mean (tagged ClusterMean).
ClusterItemMatrix build_cluster_item_matrix(const RatingTable& train, const UserClusterMatrix& uc,
                                            const ItemSimilarityIndex& sim,
                                            double sim_threshold = 0.5);

/// R' = UC x CI, materialized densely. Row u always equals the CI row of u's
/// cluster because UC is one-hot.
Eigen::MatrixXd predict_matrix(const UserClusterMatrix& uc, const ClusterItemMatrix& ci);

/// Cluster for a user with no training ratings: all-zero graph features,
/// demographic bits from the profile, encoded and assigned to the nearest
/// centroid.
int assign_new_user(const UserProfile& profile, const CategorizationScheme& scheme,
                    const AutoencoderModel& model, const ClusterModel& clusters);

struct RankedItem {
    int item = 0;  // item index
    double score = 0.0;
};

/// Top-n unrated items by predicted rating; ties break to the lower index.
std::vector<RankedItem> recommend_top_n(const Eigen::VectorXd& predictions,
                                        const std::vector<char>& already_rated, int n);

}  // namespace graphrec
