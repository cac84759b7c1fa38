#include "graphrec/config.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "graphrec/data_ingest.hpp"
#include "graphrec/io.hpp"

namespace graphrec {

RunConfig::RunConfig() {
    pipeline.similarity.alpha = 0.01;
    pipeline.autoencoder.validation_fraction = 0.2;
    eval.n_folds = 5;
}

namespace {

std::string bool_str(bool v) { return v ? "true" : "false"; }

bool parse_bool(std::string_view v, const std::string& ctx) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::runtime_error(ctx + ": expected true/false, got '" + std::string(v) + "'");
}

std::string list_str(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += io::format_double(values[i]);
    }
    return out;
}

std::vector<double> parse_list(std::string_view v, const std::string& ctx) {
    std::vector<double> out;
    for (std::string_view field : io::split(v, ',')) {
        if (!field.empty()) out.push_back(io::parse_double(field, ctx));
    }
    if (out.empty()) throw std::runtime_error(ctx + ": empty list");
    return out;
}

}  // namespace

std::string RunConfig::serialize() const {
    std::ostringstream out;
    out << "[data]\n";
    out << "path = " << data_path << "\n";
    out << "variant = " << (variant == DatasetVariant::ML100K ? "100k" : "1m") << "\n";
    out << "\n[similarity_graph]\n";
    out << "alpha = " << io::format_double(pipeline.similarity.alpha) << "\n";
    out << "delta = " << pipeline.similarity.delta << "\n";
    out << "\n[graph_features]\n";
    out << "normalized = " << bool_str(pipeline.centrality.normalized) << "\n";
    out << "pivots = " << (pipeline.centrality.pivots ? *pipeline.centrality.pivots : 0) << "\n";
    out << "pivot_seed = " << pipeline.centrality.pivot_seed << "\n";
    out << "threads = " << pipeline.centrality.threads << "\n";
    out << "\n[feature_builder]\n";
    out << "graph_bins = " << pipeline.scheme.graph_bins << "\n";
    out << "location = "
        << (pipeline.scheme.location == LocationMode::KnownFlag ? "known_flag" : "digit10") << "\n";
    out << "\n[autoencoder]\n";
    out << "hidden = " << pipeline.autoencoder.hidden << "\n";
    out << "code = " << pipeline.autoencoder.code << "\n";
    out << "sigmoid_output = " << bool_str(pipeline.autoencoder.sigmoid_output) << "\n";
    out << "l1 = " << io::format_double(pipeline.autoencoder.l1) << "\n";
    out << "l2 = " << io::format_double(pipeline.autoencoder.l2) << "\n";
    out << "epochs = " << pipeline.autoencoder.epochs << "\n";
    out << "batch_size = " << pipeline.autoencoder.batch_size << "\n";
    out << "validation_fraction = " << io::format_double(pipeline.autoencoder.validation_fraction)
        << "\n";
    out << "seed = " << pipeline.autoencoder.seed << "\n";
    out << "\n[optimizer]\n";
    out << "kind = " << optimizer_name(pipeline.optimizer.kind) << "\n";
    out << "learning_rate = " << io::format_double(pipeline.optimizer.learning_rate) << "\n";
    out << "beta1 = " << io::format_double(pipeline.optimizer.beta1) << "\n";
    out << "beta2 = " << io::format_double(pipeline.optimizer.beta2) << "\n";
    out << "rho = " << io::format_double(pipeline.optimizer.rho) << "\n";
    out << "epsilon = " << io::format_double(pipeline.optimizer.epsilon) << "\n";
    out << "momentum = " << io::format_double(pipeline.optimizer.momentum) << "\n";
    out << "\n[clustering]\n";
    out << "selection = " << k_selection_name(pipeline.k_selection) << "\n";
    out << "fixed_k = " << pipeline.fixed_k << "\n";
    out << "k_min = " << pipeline.k_min << "\n";
    out << "k_max = " << pipeline.k_max << "\n";
    out << "seed = " << pipeline.kmeans_seed << "\n";
    out << "n_init = " << pipeline.kmeans_n_init << "\n";
    out << "\n[recommender]\n";
    out << "sim_threshold = " << io::format_double(pipeline.sim_threshold) << "\n";
    out << "\n[evaluation]\n";
    out << "n_folds = " << eval.n_folds << "\n";
    out << "seed = " << eval.seed << "\n";
    out << "relevance_threshold = " << io::format_double(pipeline.relevance_threshold) << "\n";
    out << "selection_threshold = " << io::format_double(pipeline.selection_threshold) << "\n";
    out << "alphas = " << list_str(sweep_alphas) << "\n";
    out << "coldstart_fractions = " << list_str(coldstart_fractions) << "\n";
    out << "coldstart_seed = " << coldstart_seed << "\n";
    return out.str();
}

std::string RunConfig::fingerprint() const { return io::hex64(io::fnv1a64(serialize())); }

void RunConfig::override_seed(unsigned seed) {
    pipeline.autoencoder.seed = seed;
    pipeline.kmeans_seed = seed;
    pipeline.centrality.pivot_seed = seed;
    eval.seed = seed;
    coldstart_seed = seed;
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig config;
    std::string section;
    std::size_t line_no = 0;
    for (std::string_view raw : io::split(text, '\n')) {
        ++line_no;
        const std::string ctx = "config line " + std::to_string(line_no);
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
            line.remove_suffix(1);
        }
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw std::runtime_error(ctx + ": unterminated section");
            section = std::string(line.substr(1, line.size() - 2));
            static const char* known[] = {"data",        "similarity_graph", "graph_features",
                                          "feature_builder", "autoencoder",  "optimizer",
                                          "clustering",  "recommender",      "evaluation"};
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* s) { return section == s; }) == std::end(known)) {
                throw std::runtime_error(ctx + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw std::runtime_error(ctx + ": expected key = value");
        std::string_view key = line.substr(0, eq);
        std::string_view value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.remove_suffix(1);
        while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
        if (key.empty() || value.empty()) throw std::runtime_error(ctx + ": empty key or value");

        auto unknown = [&]() -> std::runtime_error {
            return std::runtime_error(ctx + ": unknown key '" + std::string(key) + "' in [" +
                                      section + "]");
        };

        if (section == "data") {
            if (key == "path") config.data_path = std::string(value);
            else if (key == "variant") {
                if (value == "100k") config.variant = DatasetVariant::ML100K;
                else if (value == "1m") config.variant = DatasetVariant::ML1M;
                else throw std::runtime_error(ctx + ": variant must be 100k or 1m");
            } else throw unknown();
        } else if (section == "similarity_graph") {
            if (key == "alpha") config.pipeline.similarity.alpha = io::parse_double(value, ctx);
            else if (key == "delta") config.pipeline.similarity.delta = io::parse_int(value, ctx);
            else throw unknown();
        } else if (section == "graph_features") {
            if (key == "normalized") config.pipeline.centrality.normalized = parse_bool(value, ctx);
            else if (key == "pivots") {
                const int pivots = io::parse_int(value, ctx);
                if (pivots > 0) config.pipeline.centrality.pivots = pivots;
                else config.pipeline.centrality.pivots.reset();
            } else if (key == "pivot_seed") {
                config.pipeline.centrality.pivot_seed =
                    static_cast<unsigned>(io::parse_int64(value, ctx));
            } else if (key == "threads") {
                config.pipeline.centrality.threads = io::parse_int(value, ctx);
            } else throw unknown();
        } else if (section == "feature_builder") {
            if (key == "graph_bins") config.pipeline.scheme.graph_bins = io::parse_int(value, ctx);
            else if (key == "location") {
                if (value == "known_flag") config.pipeline.scheme.location = LocationMode::KnownFlag;
                else if (value == "digit10") config.pipeline.scheme.location = LocationMode::Digit10;
                else throw std::runtime_error(ctx + ": location must be known_flag or digit10");
            } else throw unknown();
        } else if (section == "autoencoder") {
            auto& ae = config.pipeline.autoencoder;
            if (key == "hidden") ae.hidden = io::parse_int(value, ctx);
            else if (key == "code") ae.code = io::parse_int(value, ctx);
            else if (key == "sigmoid_output") ae.sigmoid_output = parse_bool(value, ctx);
            else if (key == "l1") ae.l1 = io::parse_double(value, ctx);
            else if (key == "l2") ae.l2 = io::parse_double(value, ctx);
            else if (key == "epochs") ae.epochs = io::parse_int(value, ctx);
            else if (key == "batch_size") ae.batch_size = io::parse_int(value, ctx);
            else if (key == "validation_fraction") ae.validation_fraction = io::parse_double(value, ctx);
            else if (key == "seed") ae.seed = static_cast<unsigned>(io::parse_int64(value, ctx));
            else throw unknown();
        } else if (section == "optimizer") {
            auto& opt = config.pipeline.optimizer;
            if (key == "kind") {
                // resets to that rule's defaults; later keys override
                opt = OptimizerSpec::defaults(optimizer_kind_from_name(std::string(value)));
            } else if (key == "learning_rate") opt.learning_rate = io::parse_double(value, ctx);
            else if (key == "beta1") opt.beta1 = io::parse_double(value, ctx);
            else if (key == "beta2") opt.beta2 = io::parse_double(value, ctx);
            else if (key == "rho") opt.rho = io::parse_double(value, ctx);
            else if (key == "epsilon") opt.epsilon = io::parse_double(value, ctx);
            else if (key == "momentum") opt.momentum = io::parse_double(value, ctx);
            else throw unknown();
        } else if (section == "clustering") {
            if (key == "selection") config.pipeline.k_selection = k_selection_from_name(std::string(value));
            else if (key == "fixed_k") config.pipeline.fixed_k = io::parse_int(value, ctx);
            else if (key == "k_min") config.pipeline.k_min = io::parse_int(value, ctx);
            else if (key == "k_max") config.pipeline.k_max = io::parse_int(value, ctx);
            else if (key == "seed") config.pipeline.kmeans_seed = static_cast<unsigned>(io::parse_int64(value, ctx));
            else if (key == "n_init") config.pipeline.kmeans_n_init = io::parse_int(value, ctx);
            else throw unknown();
        } else if (section == "recommender") {
            if (key == "sim_threshold") config.pipeline.sim_threshold = io::parse_double(value, ctx);
            else throw unknown();
        } else if (section == "evaluation") {
            if (key == "n_folds") config.eval.n_folds = io::parse_int(value, ctx);
            else if (key == "seed") config.eval.seed = static_cast<unsigned>(io::parse_int64(value, ctx));
            else if (key == "relevance_threshold") config.pipeline.relevance_threshold = io::parse_double(value, ctx);
            else if (key == "selection_threshold") config.pipeline.selection_threshold = io::parse_double(value, ctx);
            else if (key == "alphas") config.sweep_alphas = parse_list(value, ctx);
            else if (key == "coldstart_fractions") config.coldstart_fractions = parse_list(value, ctx);
            else if (key == "coldstart_seed") config.coldstart_seed = static_cast<unsigned>(io::parse_int64(value, ctx));
            else throw unknown();
        } else {
            throw std::runtime_error(ctx + ": key outside any section");
        }
    }

    // validate early, before any compute
    config.pipeline.similarity.validate();
    config.pipeline.optimizer.validate();
    AutoencoderConfig probe = config.pipeline.autoencoder;
    probe.input_dim = 1;
    probe.validate();
    if (config.eval.n_folds < 2) throw std::runtime_error("config: n_folds must be >= 2");
    if (config.pipeline.k_min < 1 || config.pipeline.k_max < config.pipeline.k_min) {
        throw std::runtime_error("config: bad clustering k range");
    }
    return config;
}

Dataset load_dataset(const RunConfig& config) {
    return config.variant == DatasetVariant::ML100K ? load_movielens_100k(config.data_path)
                                                    : load_movielens_1m(config.data_path);
}

}  // namespace graphrec
