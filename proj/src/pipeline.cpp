#include "graphrec/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "graphrec/io.hpp"

namespace graphrec {

KSelection k_selection_from_name(const std::string& name) {
    if (name == "fixed") return KSelection::Fixed;
    if (name == "elbow") return KSelection::Elbow;
    if (name == "silhouette") return KSelection::Silhouette;
    throw std::invalid_argument("unknown K selection mode '" + name + "'");
}

const char* k_selection_name(KSelection s) {
    switch (s) {
        case KSelection::Fixed: return "fixed";
        case KSelection::Elbow: return "elbow";
        case KSelection::Silhouette: return "silhouette";
    }
    throw std::logic_error("k_selection_name: bad value");
}

std::string PipelineConfig::serialize() const {
    std::ostringstream out;
    out << "alpha=" << io::format_double(similarity.alpha) << "\n";
    out << "delta=" << similarity.delta << "\n";
    out << "graph_bins=" << scheme.graph_bins << "\n";
    out << "age_edges=";
    for (int e : scheme.age_edges) out << e << ' ';
    out << "\n";
    out << "location=" << (scheme.location == LocationMode::KnownFlag ? "known_flag" : "digit10")
        << "\n";
    out << "occupation_groups=" << scheme.occupation_groups.size() << "\n";
    for (const auto& [t, g] : scheme.occupation_groups) out << "  " << t << "=" << g << "\n";
    out << "ae_hidden=" << autoencoder.hidden << "\n";
    out << "ae_code=" << autoencoder.code << "\n";
    out << "ae_sigmoid=" << autoencoder.sigmoid_output << "\n";
    out << "ae_l1=" << io::format_double(autoencoder.l1) << "\n";
    out << "ae_l2=" << io::format_double(autoencoder.l2) << "\n";
    out << "ae_epochs=" << autoencoder.epochs << "\n";
    out << "ae_batch=" << autoencoder.batch_size << "\n";
    out << "ae_val_fraction=" << io::format_double(autoencoder.validation_fraction) << "\n";
    out << "ae_seed=" << autoencoder.seed << "\n";
    out << "optimizer=" << optimizer.describe() << "\n";
    out << "k_selection=" << k_selection_name(k_selection) << "\n";
    out << "fixed_k=" << fixed_k << "\n";
    out << "k_range=" << k_min << ".." << k_max << "\n";
    out << "kmeans_seed=" << kmeans_seed << "\n";
    out << "kmeans_n_init=" << kmeans_n_init << "\n";
    out << "sim_threshold=" << io::format_double(sim_threshold) << "\n";
    out << "relevance_threshold=" << io::format_double(relevance_threshold) << "\n";
    out << "selection_threshold=" << io::format_double(selection_threshold) << "\n";
    out << "centrality_normalized=" << centrality.normalized << "\n";
    out << "centrality_pivots=" << (centrality.pivots ? *centrality.pivots : 0) << "\n";
    out << "centrality_pivot_seed=" << centrality.pivot_seed << "\n";
    return out.str();
}

std::string PipelineConfig::fingerprint() const {
    return io::hex64(io::fnv1a64(serialize()));
}

double PipelineModel::predict(int user_idx, int item_idx) const {
    const double v = ci.values(uc.cluster_of.at(user_idx), item_idx);
    return std::clamp(v, 1.0, 5.0);
}

std::uint64_t PipelineModel::artifact_hash() const {
    std::uint64_t h = io::fnv1a64(config_fingerprint);
    SimilarityParams params;  // header values do not matter for the hash
    h = io::fnv1a64(graph.to_edge_list(params), h);
    h = io::fnv1a64(graph_features.to_csv(), h);
    h = io::fnv1a64(scheme.serialize(), h);
    h = io::fnv1a64(raw_features.to_csv(), h);
    h = io::fnv1a64(autoencoder.serialize(), h);
    h = io::fnv1a64(clusters.serialize(), h);
    h = io::fnv1a64(ci.to_csv(), h);
    return h;
}

PipelineModel fit_pipeline(const RatingTable& train, const std::vector<UserProfile>& users,
                           const ItemSimilarityIndex& sim, const PipelineConfig& config) {
    if (static_cast<int>(users.size()) != train.n_users()) {
        throw std::invalid_argument("fit_pipeline: users/table size mismatch");
    }
    if (sim.n_items() != train.n_items()) {
        throw std::invalid_argument("fit_pipeline: similarity index/table size mismatch");
    }
    const int n = train.n_users();

    PipelineModel model;
    model.config_fingerprint = config.fingerprint();
    model.graph = build_graph(train, train.n_items(), config.similarity);
    model.graph_features = extract_all(model.graph, config.centrality);

    // Users with no training ratings follow the cold-start convention:
    // all-zero graph features, exactly as assign_new_user encodes them. Their
    // profile rows stay in the population for the unsupervised stages (the
    // scheme, autoencoder and clustering see no ratings, only feature rows),
    // so clusters cover the isolated region too.
    bool any_train_user = false;
    for (int u = 0; u < n; ++u) {
        if (train.ratings_of(u).empty()) {
            model.graph_features.rows[u].fill(0.0);
        } else {
            any_train_user = true;
        }
    }
    if (!any_train_user) throw std::runtime_error("fit_pipeline: no users with training ratings");

    model.scheme = fit_scheme(model.graph_features, users, config.scheme);
    model.raw_features = encode_users(model.scheme, model.graph_features, users);

    AutoencoderConfig ae = config.autoencoder;
    ae.input_dim = static_cast<int>(model.raw_features.values.cols());
    model.autoencoder = train_autoencoder(ae, config.optimizer, model.raw_features.values);
    model.codes = model.autoencoder.encode(model.raw_features.values);

    switch (config.k_selection) {
        case KSelection::Fixed:
            model.selected_k = std::min(config.fixed_k, n);
            break;
        case KSelection::Elbow: {
            auto sel = elbow_select(model.codes, default_k_range(config.k_min, config.k_max, n),
                                    config.kmeans_seed);
            model.selected_k = sel.k_star;
            model.k_was_selected = true;
            break;
        }
        case KSelection::Silhouette: {
            auto sel = silhouette_select(
                model.codes, default_k_range(std::max(2, config.k_min), config.k_max, n),
                config.kmeans_seed);
            model.selected_k = sel.k_star;
            model.k_was_selected = true;
            break;
        }
    }
    model.clusters = kmeans_fit(model.codes, model.selected_k, config.kmeans_seed, 300, 1e-6,
                                config.kmeans_n_init);

    model.uc.k = model.selected_k;
    model.uc.cluster_of.resize(n);
    for (int u = 0; u < n; ++u) {
        model.uc.cluster_of[u] = assign(model.clusters, model.codes.row(u).transpose());
    }
    model.ci = build_cluster_item_matrix(train, model.uc, sim, config.sim_threshold);
    return model;
}

}  // namespace graphrec
