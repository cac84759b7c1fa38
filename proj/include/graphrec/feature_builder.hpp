#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "graphrec/graph_features.hpp"
#include "graphrec/types.hpp"

namespace graphrec {

enum class LocationMode {
    KnownFlag,  // one 2-bit group: zip region known / unknown
    Digit10,    // 11-bit group: first zip digit 0-9 plus unknown
};

struct SchemeConfig {
    int graph_bins = 3;  // quantile bins per graph feature column
    /// Upper bin edges over age; value v falls in the first bin with v < edge,
    /// else the last bin. Default is the classic 7-bin convention.
    std::vector<int> age_edges = {18, 25, 35, 45, 50, 56};
    LocationMode location = LocationMode::KnownFlag;
    /// Occupation token -> group name. Empty selects the shipped default for
    /// the dataset variant. Unmapped tokens land in "other".
    std::vector<std::pair<std::string, std::string>> occupation_groups;
};

/// Shipped default occupation grouping for a dataset variant. The 1M map keys
/// are the integer occupation codes as decimal strings and it distinguishes
/// K-12 from college students (the 100K vocabulary does not), which is what
/// sets the two variants' feature widths apart.
std::vector<std::pair<std::string, std::string>> default_occupation_groups(DatasetVariant variant);

/// Fitted categorization recipe: quantile bin edges per graph feature plus
/// demographic group maps. Fit on training users only; applying it is pure.
struct CategorizationScheme {
    SchemeConfig config;
    /// Strictly increasing inner edges per graph feature column (deduplicated;
    /// empty means the column was constant and maps to a single bin).
    std::array<std::vector<double>, GraphFeatureMatrix::kColumns> graph_edges;
    std::vector<std::string> occupation_group_names;  // encounter order, "other" guaranteed
    std::vector<std::pair<std::string, std::string>> occupation_map;  // token -> group
    int other_group = 0;  // index into occupation_group_names

    int n_columns() const;
    std::vector<std::string> column_labels() const;

    /// Human-readable key-value document listing every edge and group.
    std::string serialize() const;
};

struct RawFeatureMatrix {
    Eigen::MatrixXd values;           // n_users x D, entries in {0,1}
    std::vector<std::string> labels;  // D column labels
    std::vector<int> user_ids;        // aligned with rows

    std::string to_csv() const;
    static RawFeatureMatrix from_csv(const std::string& text);
};

/// Derives quantile bin edges from the given graph-feature rows (training
/// users only) and resolves the demographic group maps.
CategorizationScheme fit_scheme(const GraphFeatureMatrix& graph_feats,
                                const std::vector<UserProfile>& users,
                                const SchemeConfig& config);

/// One-hot encodes every user: [graph bins | gender | age | occupation |
/// location]. graph_rows[i] supplies user i's graph features; users absent
/// from the graph are encoded from an all-zero row (lowest bins).
RawFeatureMatrix encode_users(const CategorizationScheme& scheme,
                              const std::vector<std::array<double, GraphFeatureMatrix::kColumns>>& graph_rows,
                              const std::vector<UserProfile>& users);

/// Convenience overload taking the feature matrix (rows aligned with users).
RawFeatureMatrix encode_users(const CategorizationScheme& scheme,
                              const GraphFeatureMatrix& graph_feats,
                              const std::vector<UserProfile>& users);

/// Single-user encoding with an all-zero graph row; the cold-start path.
Eigen::VectorXd encode_cold_user(const CategorizationScheme& scheme, const UserProfile& user);

/// Fraction of zero entries.
double sparsity(const RawFeatureMatrix& m);

/// Bin index of `value` among strictly increasing inner `edges`.
int bin_of(double value, const std::vector<double>& edges);

/// Interpolated quantile edges (B-1 inner edges, deduplicated).
std::vector<double> quantile_edges(std::vector<double> values, int bins);

}  // namespace graphrec
