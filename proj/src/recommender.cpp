#include "graphrec/recommender.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

#include "graphrec/io.hpp"

namespace graphrec {

double item_similarity(const ItemProfile& a, const ItemProfile& b) {
    const std::uint32_t both = a.genre_mask & b.genre_mask;
    const std::uint32_t any = a.genre_mask | b.genre_mask;
    if (any == 0) return 0.0;
    return static_cast<double>(std::popcount(both)) / static_cast<double>(std::popcount(any));
}

ItemSimilarityIndex::ItemSimilarityIndex(const std::vector<ItemProfile>& items, double min_score) {
    const int m = static_cast<int>(items.size());
    lists_.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double s = item_similarity(items[i], items[j]);
            if (s >= min_score && s > 0.0) {
                lists_[i].push_back({j, s});
                lists_[j].push_back({i, s});
            }
        }
    }
    for (auto& list : lists_) {
        std::sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
            return a.score != b.score ? a.score > b.score : a.item < b.item;
        });
    }
}

std::vector<int> ItemSimilarityIndex::similar_items(int item_idx, double threshold) const {
    std::vector<int> out;
    for (const Entry& e : lists_.at(item_idx)) {
        if (e.score < threshold) break;
        out.push_back(e.item);
    }
    return out;
}

Eigen::MatrixXd UserClusterMatrix::dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(cluster_of.size()), k);
    for (std::size_t u = 0; u < cluster_of.size(); ++u) {
        m(static_cast<Eigen::Index>(u), cluster_of[u]) = 1.0;
    }
    return m;
}

ClusterItemMatrix build_cluster_item_matrix(const RatingTable& train, const UserClusterMatrix& uc,
                                            const ItemSimilarityIndex& sim, double sim_threshold) {
    if (train.size() == 0) throw std::invalid_argument("cluster-item matrix: empty training set");
    if (static_cast<int>(uc.cluster_of.size()) != train.n_users()) {
        throw std::invalid_argument("cluster-item matrix: user/cluster count mismatch");
    }
    const int k = uc.k;
    const int m = train.n_items();

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, m);
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, m);
    std::vector<double> cluster_sum(k, 0.0);
    std::vector<long> cluster_count(k, 0);
    for (const RatingRecord& r : train.records()) {
        const int c = uc.cluster_of[train.user_index(r.user_id)];
        const int i = train.item_index(r.item_id);
        sums(c, i) += r.rating;
        counts(c, i) += 1.0;
        cluster_sum[c] += r.rating;
        ++cluster_count[c];
    }
    const double global_mean = train.mean_rating();

    ClusterItemMatrix ci;
    ci.values.resize(k, m);
    ci.sources.assign(k, std::vector<CellSource>(m, CellSource::ClusterMean));
    for (int c = 0; c < k; ++c) {
        const double cluster_mean =
            cluster_count[c] > 0 ? cluster_sum[c] / cluster_count[c] : global_mean;
        for (int i = 0; i < m; ++i) {
            if (counts(c, i) > 0.0) {
                ci.values(c, i) = sums(c, i) / counts(c, i);
                ci.sources[c][i] = CellSource::Direct;
                continue;
            }
            double sim_sum = 0.0, sim_count = 0.0;
            for (const auto& e : sim.neighbors(i)) {
                if (e.score < sim_threshold) break;
                sim_sum += sums(c, e.item);
                sim_count += counts(c, e.item);
            }
            if (sim_count > 0.0) {
                ci.values(c, i) = sim_sum / sim_count;
                ci.sources[c][i] = CellSource::SimilarItems;
            } else {
                ci.values(c, i) = cluster_mean;
                ci.sources[c][i] = CellSource::ClusterMean;
            }
        }
    }
    return ci;
}

Eigen::MatrixXd predict_matrix(const UserClusterMatrix& uc, const ClusterItemMatrix& ci) {
    if (uc.k != ci.values.rows()) throw std::invalid_argument("predict_matrix: shape mismatch");
    Eigen::MatrixXd out(static_cast<Eigen::Index>(uc.cluster_of.size()), ci.values.cols());
    for (std::size_t u = 0; u < uc.cluster_of.size(); ++u) {
        out.row(static_cast<Eigen::Index>(u)) = ci.values.row(uc.cluster_of[u]);
    }
    return out;
}

int assign_new_user(const UserProfile& profile, const CategorizationScheme& scheme,
                    const AutoencoderModel& model, const ClusterModel& clusters) {
    const Eigen::VectorXd raw = encode_cold_user(scheme, profile);
    return assign(clusters, model.encode_row(raw));
}

std::vector<RankedItem> recommend_top_n(const Eigen::VectorXd& predictions,
                                        const std::vector<char>& already_rated, int n) {
    if (n < 1) throw std::invalid_argument("recommend_top_n: n must be >= 1");
    if (static_cast<Eigen::Index>(already_rated.size()) != predictions.size()) {
        throw std::invalid_argument("recommend_top_n: rated-mask size mismatch");
    }
    std::vector<RankedItem> ranked;
    for (int i = 0; i < predictions.size(); ++i) {
        if (!already_rated[i]) ranked.push_back({i, predictions[i]});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedItem& a, const RankedItem& b) {
        return a.score != b.score ? a.score > b.score : a.item < b.item;
    });
    if (static_cast<int>(ranked.size()) > n) ranked.resize(n);
    return ranked;
}

std::string ClusterItemMatrix::to_csv() const {
    std::ostringstream out;
    out << "cluster,item_index,value,source\n";
    for (Eigen::Index c = 0; c < values.rows(); ++c) {
        for (Eigen::Index i = 0; i < values.cols(); ++i) {
            const char* tag = "cluster-mean";
            if (sources[c][i] == CellSource::Direct) tag = "direct";
            else if (sources[c][i] == CellSource::SimilarItems) tag = "similar-items";
            out << c << ',' << i << ',' << io::format_double(values(c, i)) << ',' << tag << '\n';
        }
    }
    return out.str();
}

}  // namespace graphrec
