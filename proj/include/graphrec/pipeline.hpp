#pragma once

#include <string>
#include <vector>

#include "graphrec/autoencoder.hpp"
#include "graphrec/clustering.hpp"
#include "graphrec/data_ingest.hpp"
#include "graphrec/feature_builder.hpp"
#include "graphrec/graph_features.hpp"
#include "graphrec/recommender.hpp"
#include "graphrec/similarity_graph.hpp"

namespace graphrec {

enum class KSelection { Fixed, Elbow, Silhouette };

KSelection k_selection_from_name(const std::string& name);
const char* k_selection_name(KSelection s);

/// Everything needed to fit the full model from a training rating table.
struct PipelineConfig {
    SimilarityParams similarity;
    SchemeConfig scheme;
    AutoencoderConfig autoencoder;  // input_dim resolved at fit time
    OptimizerSpec optimizer = OptimizerSpec::defaults(OptimizerKind::Adam);

    KSelection k_selection = KSelection::Elbow;
    int fixed_k = 8;
    int k_min = 1;
    int k_max = 30;
    unsigned kmeans_seed = 0;
    int kmeans_n_init = 10;

    double sim_threshold = 0.5;

    double relevance_threshold = 4.0;
    double selection_threshold = 4.0;

    CentralityOptions centrality;

    /// Canonical text form; feeds the config fingerprint.
    std::string serialize() const;
    std::string fingerprint() const;
};

/// A fitted model. Every member is a function of the training ratings, the
/// user/item profiles and the config; test ratings never enter.
struct PipelineModel {
    SimilarityGraph graph;
    GraphFeatureMatrix graph_features;
    CategorizationScheme scheme;
    RawFeatureMatrix raw_features;
    AutoencoderModel autoencoder;
    Eigen::MatrixXd codes;  // all users x code dim
    int selected_k = 0;
    bool k_was_selected = false;
    ClusterModel clusters;
    UserClusterMatrix uc;
    ClusterItemMatrix ci;
    std::string config_fingerprint;

    double predict(int user_idx, int item_idx) const;

    /// Combined hash over all training artifacts; changes iff any of them does.
    std::uint64_t artifact_hash() const;
};

/// Fits graph -> features -> scheme -> autoencoder -> clusters -> CI on the
/// training table. Users without training ratings are encoded from all-zero
/// graph features (the cold-start convention) and assigned like new users.
/// `sim` is the genre similarity index (side information, rating-free).
PipelineModel fit_pipeline(const RatingTable& train, const std::vector<UserProfile>& users,
                           const ItemSimilarityIndex& sim, const PipelineConfig& config);

}  // namespace graphrec
