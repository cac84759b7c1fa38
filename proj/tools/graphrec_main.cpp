// Staged command-line pipeline. Each stage writes its artifacts into the
// output directory and appends a manifest line; later stages read what the
// earlier ones produced, so every intermediate (graph, features, model,
// clusters, metrics) can be inspected or plotted offline.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "graphrec/config.hpp"
#include "graphrec/io.hpp"

using namespace graphrec;
namespace fs = std::filesystem;

namespace {

struct StageContext {
    RunConfig config;
    fs::path out;
    int jobs = 1;

    fs::path artifact(const std::string& name) const { return out / name; }

    std::string read_artifact(const std::string& name, const std::string& producer) const {
        const fs::path path = artifact(name);
        if (!fs::exists(path)) {
            throw std::runtime_error("missing " + name + " in " + out.string() + "; run '" +
                                     producer + "' first");
        }
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
};

class Manifest {
public:
    Manifest(StageContext& ctx, std::string stage) : ctx_(ctx), stage_(std::move(stage)) {
        start_ = std::chrono::steady_clock::now();
    }

    void add_input(const std::string& name, const std::string& content) {
        inputs_ += (inputs_.empty() ? "" : ",") + name + ":" + io::hex64(io::fnv1a64(content));
    }

    void commit() {
        const auto wall =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_);
        std::ofstream out(ctx_.artifact("manifest.txt"), std::ios::app);
        out << "stage=" << stage_ << " config=" << ctx_.config.fingerprint()
            << " inputs=" << (inputs_.empty() ? "-" : inputs_) << " wall_ms=" << wall.count()
            << "\n";
    }

private:
    StageContext& ctx_;
    std::string stage_;
    std::string inputs_;
    std::chrono::steady_clock::time_point start_;
};

void write_artifact(StageContext& ctx, const std::string& name, const std::string& content) {
    io::write_file(ctx.artifact(name), content);
    std::cout << "wrote " << ctx.artifact(name).string() << "\n";
}

int cmd_graph(StageContext& ctx) {
    Manifest manifest(ctx, "graph");
    const Dataset ds = load_dataset(ctx.config);
    manifest.add_input("dataset", ds.ratings.to_tsv());
    const SimilarityGraph g =
        build_graph(ds.ratings, ds.ratings.n_items(), ctx.config.pipeline.similarity);
    write_artifact(ctx, "graph.edges", g.to_edge_list(ctx.config.pipeline.similarity));
    std::cout << "nodes=" << g.n_nodes() << " edges=" << g.n_edges()
              << " components=" << g.component_count() << "\n";
    if (g.n_edges() == 0) {
        std::cout << "warning: the graph is edgeless at alpha="
                  << io::format_double(ctx.config.pipeline.similarity.alpha) << "\n";
    }
    manifest.commit();
    return 0;
}

int cmd_features(StageContext& ctx) {
    Manifest manifest(ctx, "features");
    const Dataset ds = load_dataset(ctx.config);
    const std::string edges = ctx.read_artifact("graph.edges", "graph");
    manifest.add_input("graph.edges", edges);
    const SimilarityGraph g = SimilarityGraph::from_edge_list(edges, ds.ratings.user_ids());

    CentralityOptions opts = ctx.config.pipeline.centrality;
    if (ctx.jobs > 1) opts.threads = ctx.jobs;
    GraphFeatureMatrix feats = extract_all(g, opts);
    write_artifact(ctx, "graph_features.csv", feats.to_csv());

    // Cold rows for users the training graph never saw.
    for (int u = 0; u < ds.ratings.n_users(); ++u) {
        if (ds.ratings.ratings_of(u).empty()) feats.rows[u].fill(0.0);
    }
    const CategorizationScheme scheme = fit_scheme(feats, ds.users, ctx.config.pipeline.scheme);
    write_artifact(ctx, "scheme.txt", scheme.serialize());
    const RawFeatureMatrix raw = encode_users(scheme, feats, ds.users);
    write_artifact(ctx, "raw_features.csv", raw.to_csv());
    std::cout << "columns=" << scheme.n_columns() << " sparsity=" << io::format_double(sparsity(raw))
              << "\n";
    manifest.commit();
    return 0;
}

int cmd_train_ae(StageContext& ctx) {
    Manifest manifest(ctx, "train-ae");
    const std::string raw_csv = ctx.read_artifact("raw_features.csv", "features");
    manifest.add_input("raw_features.csv", raw_csv);
    const RawFeatureMatrix raw = RawFeatureMatrix::from_csv(raw_csv);

    AutoencoderConfig ae = ctx.config.pipeline.autoencoder;
    ae.input_dim = static_cast<int>(raw.values.cols());
    const AutoencoderModel model = train_autoencoder(ae, ctx.config.pipeline.optimizer, raw.values);
    write_artifact(ctx, "autoencoder.model", model.serialize());
    write_artifact(ctx, "loss_history.csv",
                   loss_history_csv({{optimizer_name(ctx.config.pipeline.optimizer.kind),
                                      model.history()}}));
    std::cout << "final val_loss=" << io::format_double(model.history().back().val_loss) << "\n";
    manifest.commit();
    return 0;
}

int cmd_cluster(StageContext& ctx) {
    Manifest manifest(ctx, "cluster");
    const std::string raw_csv = ctx.read_artifact("raw_features.csv", "features");
    const std::string model_txt = ctx.read_artifact("autoencoder.model", "train-ae");
    manifest.add_input("raw_features.csv", raw_csv);
    manifest.add_input("autoencoder.model", model_txt);
    const RawFeatureMatrix raw = RawFeatureMatrix::from_csv(raw_csv);
    const AutoencoderModel model = AutoencoderModel::deserialize(model_txt);
    const Eigen::MatrixXd codes = model.encode(raw.values);

    {
        std::ostringstream enc;
        enc << "user_id";
        for (Eigen::Index j = 0; j < codes.cols(); ++j) enc << ",c" << j;
        enc << '\n';
        for (Eigen::Index i = 0; i < codes.rows(); ++i) {
            enc << raw.user_ids[static_cast<std::size_t>(i)];
            for (Eigen::Index j = 0; j < codes.cols(); ++j) {
                enc << ',' << io::format_double(codes(i, j));
            }
            enc << '\n';
        }
        write_artifact(ctx, "encoded_features.csv", enc.str());
    }

    const auto& pc = ctx.config.pipeline;
    const int n = static_cast<int>(codes.rows());
    const auto elbow = elbow_select(codes, default_k_range(pc.k_min, pc.k_max, n), pc.kmeans_seed);
    write_artifact(ctx, "elbow_curve.csv", elbow.curve_csv("inertia"));
    const auto sil = silhouette_select(codes, default_k_range(std::max(2, pc.k_min), pc.k_max, n),
                                       pc.kmeans_seed);
    write_artifact(ctx, "silhouette_curve.csv", sil.curve_csv("silhouette"));

    int k = std::min(pc.fixed_k, n);
    if (pc.k_selection == KSelection::Elbow) k = elbow.k_star;
    if (pc.k_selection == KSelection::Silhouette) k = sil.k_star;
    const ClusterModel clusters = kmeans_fit(codes, k, pc.kmeans_seed, 300, 1e-6, pc.kmeans_n_init);
    write_artifact(ctx, "clusters.txt", clusters.serialize());
    std::cout << "elbow_k=" << elbow.k_star << (elbow.degenerate ? " (degenerate)" : "")
              << " silhouette_k=" << sil.k_star << " used_k=" << k
              << " inertia=" << io::format_double(clusters.inertia) << "\n";
    manifest.commit();
    return 0;
}

int cmd_evaluate(StageContext& ctx) {
    Manifest manifest(ctx, "evaluate");
    // The cluster stage must have run: its selection feeds the report header
    // and pins the staged workflow order.
    const std::string clusters_txt = ctx.read_artifact("clusters.txt", "cluster");
    manifest.add_input("clusters.txt", clusters_txt);

    const Dataset ds = load_dataset(ctx.config);
    manifest.add_input("dataset", ds.ratings.to_tsv());
    EvalConfig eval = ctx.config.eval;
    eval.jobs = ctx.jobs;
    eval.keep_predictions = true;
    const MetricReport report = cross_validate(ds, ctx.config.pipeline, eval);
    write_artifact(ctx, "metrics.csv", report.to_csv());
    write_artifact(ctx, "metrics_summary.txt", report.summary());
    write_artifact(ctx, "predictions.csv", predictions_csv(ds, report.predictions));
    std::cout << report.summary();
    manifest.commit();
    return 0;
}

int cmd_coldstart(StageContext& ctx) {
    Manifest manifest(ctx, "coldstart");
    const Dataset ds = load_dataset(ctx.config);
    manifest.add_input("dataset", ds.ratings.to_tsv());
    const ColdStartResult result = cold_start_experiment(ds, ctx.config.coldstart_fractions,
                                                         ctx.config.pipeline, ctx.config.coldstart_seed);
    write_artifact(ctx, "coldstart.csv", result.to_csv());
    std::cout << result.to_csv();
    manifest.commit();
    return 0;
}

int cmd_sweep_alpha(StageContext& ctx) {
    Manifest manifest(ctx, "sweep-alpha");
    const Dataset ds = load_dataset(ctx.config);
    manifest.add_input("dataset", ds.ratings.to_tsv());
    EvalConfig eval = ctx.config.eval;
    eval.jobs = ctx.jobs;
    const AlphaSweepResult result =
        alpha_sweep(ds, ctx.config.sweep_alphas, ctx.config.pipeline, eval);
    write_artifact(ctx, "alpha_sweep.csv", result.to_csv());
    std::cout << result.to_csv();
    manifest.commit();
    return 0;
}

int cmd_sweep_optimizer(StageContext& ctx) {
    Manifest manifest(ctx, "sweep-optimizer");
    const Dataset ds = load_dataset(ctx.config);
    manifest.add_input("dataset", ds.ratings.to_tsv());
    const OptimizerSweepResult result =
        optimizer_sweep(ds, ctx.config.pipeline, ctx.config.eval);
    write_artifact(ctx, "optimizer_histories.csv", result.history_csv());
    write_artifact(ctx, "optimizer_summary.csv", result.summary_csv());
    std::cout << result.summary_csv();
    manifest.commit();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph-based hybrid recommender pipeline"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::optional<long long> seed;
    int jobs = 1;
    app.add_option("--config", config_path, "config file (see print-config for the format)");
    app.add_option("--out", out_dir, "output directory for stage artifacts");
    app.add_option("--seed", seed, "override every stage seed");
    app.add_option("--jobs", jobs, "parallel jobs for folds/sweeps")->check(CLI::PositiveNumber);

    auto* c_graph = app.add_subcommand("graph", "build and export the user similarity graph");
    auto* c_features = app.add_subcommand("features", "graph features, scheme and binary matrix");
    auto* c_train = app.add_subcommand("train-ae", "train the autoencoder on the binary matrix");
    auto* c_cluster = app.add_subcommand("cluster", "encode, select K and fit k-means");
    auto* c_eval = app.add_subcommand("evaluate", "k-fold cross-validated metrics");
    auto* c_cold = app.add_subcommand("coldstart", "held-user cold-start experiment");
    auto* c_salpha = app.add_subcommand("sweep-alpha", "cross-validate across alpha values");
    auto* c_sopt = app.add_subcommand("sweep-optimizer", "loss history per optimizer kind");
    auto* c_print = app.add_subcommand("print-config", "print the effective configuration");

    CLI11_PARSE(app, argc, argv);

    try {
        StageContext ctx;
        if (!config_path.empty()) {
            std::ifstream in(config_path, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open config file: " + config_path);
            std::ostringstream buf;
            buf << in.rdbuf();
            ctx.config = RunConfig::parse(buf.str());
        }
        if (seed) ctx.config.override_seed(static_cast<unsigned>(*seed));
        ctx.out = out_dir;
        ctx.jobs = jobs;

        if (c_print->parsed()) {
            std::cout << ctx.config.serialize();
            return 0;
        }
        fs::create_directories(ctx.out);
        if (c_graph->parsed()) return cmd_graph(ctx);
        if (c_features->parsed()) return cmd_features(ctx);
        if (c_train->parsed()) return cmd_train_ae(ctx);
        if (c_cluster->parsed()) return cmd_cluster(ctx);
        if (c_eval->parsed()) return cmd_evaluate(ctx);
        if (c_cold->parsed()) return cmd_coldstart(ctx);
        if (c_salpha->parsed()) return cmd_sweep_alpha(ctx);
        if (c_sopt->parsed()) return cmd_sweep_optimizer(ctx);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
