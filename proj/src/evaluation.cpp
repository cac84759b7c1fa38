#include "graphrec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include "graphrec/io.hpp"

namespace graphrec {

double rmse(const std::vector<PredictionPair>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("rmse: empty input");
    double sum = 0.0;
    for (const PredictionPair& p : pairs) {
        const double r = p.actual - p.predicted;
        sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(pairs.size()));
}

PrecisionRecall precision_recall(const std::vector<PredictionPair>& pairs,
                                 double relevance_threshold, double selection_threshold) {
    if (pairs.empty()) throw std::invalid_argument("precision_recall: empty input");
    long tp = 0, fp = 0, fn = 0;
    for (const PredictionPair& p : pairs) {
        const bool relevant = p.actual >= relevance_threshold;
        const bool selected = p.predicted >= selection_threshold;
        if (selected && relevant) ++tp;
        else if (selected) ++fp;
        else if (relevant) ++fn;
    }
    PrecisionRecall out;
    if (tp + fp > 0) out.precision = static_cast<double>(tp) / (tp + fp);
    if (tp + fn > 0) out.recall = static_cast<double>(tp) / (tp + fn);
    return out;
}

PrecisionRecall precision_recall_macro(const std::vector<PredictionPair>& pairs,
                                       double relevance_threshold, double selection_threshold) {
    if (pairs.empty()) throw std::invalid_argument("precision_recall: empty input");
    std::map<int, std::vector<PredictionPair>> by_user;
    for (const PredictionPair& p : pairs) by_user[p.user_idx].push_back(p);
    double p_sum = 0.0, r_sum = 0.0;
    long p_n = 0, r_n = 0;
    for (const auto& [user, user_pairs] : by_user) {
        const PrecisionRecall pr =
            precision_recall(user_pairs, relevance_threshold, selection_threshold);
        if (pr.precision) {
            p_sum += *pr.precision;
            ++p_n;
        }
        if (pr.recall) {
            r_sum += *pr.recall;
            ++r_n;
        }
    }
    PrecisionRecall out;
    if (p_n > 0) out.precision = p_sum / p_n;
    if (r_n > 0) out.recall = r_sum / r_n;
    return out;
}

namespace {

std::string opt_str(const std::optional<double>& v) {
    return v ? io::format_double(*v) : "undefined";
}

std::optional<double> opt_mean(const std::vector<std::optional<double>>& values) {
    double sum = 0.0;
    long n = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0) return std::nullopt;
    return sum / n;
}

FoldMetrics evaluate_fold(const Dataset& dataset, const ItemSimilarityIndex& sim,
                          const PipelineConfig& config, const RatingTable& train,
                          const std::vector<RatingRecord>& test, int fold,
                          std::vector<PredictionPair>* pairs_out = nullptr) {
    const PipelineModel model = fit_pipeline(train, dataset.users, sim, config);
    std::vector<PredictionPair> pairs;
    pairs.reserve(test.size());
    for (const RatingRecord& r : test) {
        PredictionPair p;
        p.user_idx = dataset.ratings.user_index(r.user_id);
        p.item_idx = dataset.ratings.item_index(r.item_id);
        p.actual = r.rating;
        p.predicted = model.predict(p.user_idx, p.item_idx);
        pairs.push_back(p);
    }
    FoldMetrics metrics;
    metrics.fold = fold;
    metrics.n_test = pairs.size();
    metrics.rmse = rmse(pairs);
    metrics.micro = precision_recall(pairs, config.relevance_threshold, config.selection_threshold);
    metrics.macro =
        precision_recall_macro(pairs, config.relevance_threshold, config.selection_threshold);
    if (pairs_out) *pairs_out = std::move(pairs);
    return metrics;
}

}  // namespace

MetricReport cross_validate(const Dataset& dataset, const PipelineConfig& config,
                            const EvalConfig& eval) {
    const FoldPlan plan = kfold_split(dataset.ratings, eval.n_folds, eval.seed);
    const ItemSimilarityIndex sim(dataset.items, std::min(config.sim_threshold, 1.0));

    std::vector<FoldMetrics> folds(eval.n_folds);
    std::vector<std::vector<PredictionPair>> fold_pairs(eval.n_folds);
    auto run_fold = [&](int fold) {
        const RatingTable train = fold_train_table(dataset.ratings, plan, fold);
        const auto test = fold_test_records(dataset.ratings, plan, fold);
        return evaluate_fold(dataset, sim, config, train, test, fold,
                             eval.keep_predictions ? &fold_pairs[fold] : nullptr);
    };

    if (eval.jobs <= 1) {
        for (int fold = 0; fold < eval.n_folds; ++fold) folds[fold] = run_fold(fold);
    } else {
        std::vector<std::future<FoldMetrics>> futures;
        futures.reserve(eval.n_folds);
        for (int fold = 0; fold < eval.n_folds; ++fold) {
            futures.push_back(std::async(std::launch::async, run_fold, fold));
        }
        for (int fold = 0; fold < eval.n_folds; ++fold) folds[fold] = futures[fold].get();
    }

    MetricReport report;
    report.folds = folds;
    if (eval.keep_predictions) {
        for (auto& pairs : fold_pairs) {
            report.predictions.insert(report.predictions.end(), pairs.begin(), pairs.end());
        }
    }
    report.config_fingerprint = config.fingerprint();
    report.eval_fingerprint = io::hex64(io::fnv1a64(
        config.serialize() + "folds=" + std::to_string(eval.n_folds) +
        " seed=" + std::to_string(eval.seed)));

    double mean = 0.0;
    for (const FoldMetrics& f : folds) mean += f.rmse;
    mean /= folds.size();
    double var = 0.0;
    for (const FoldMetrics& f : folds) var += (f.rmse - mean) * (f.rmse - mean);
    report.rmse_mean = mean;
    report.rmse_variance = folds.size() > 1 ? var / (folds.size() - 1) : 0.0;

    std::vector<std::optional<double>> p, r, pm, rm;
    for (const FoldMetrics& f : folds) {
        p.push_back(f.micro.precision);
        r.push_back(f.micro.recall);
        pm.push_back(f.macro.precision);
        rm.push_back(f.macro.recall);
    }
    report.micro.precision = opt_mean(p);
    report.micro.recall = opt_mean(r);
    report.macro.precision = opt_mean(pm);
    report.macro.recall = opt_mean(rm);
    return report;
}

std::string MetricReport::to_csv() const {
    std::ostringstream out;
    out << "fold,n_test,rmse,precision,recall,precision_macro,recall_macro\n";
    for (const FoldMetrics& f : folds) {
        out << f.fold << ',' << f.n_test << ',' << io::format_double(f.rmse) << ','
            << opt_str(f.micro.precision) << ',' << opt_str(f.micro.recall) << ','
            << opt_str(f.macro.precision) << ',' << opt_str(f.macro.recall) << '\n';
    }
    out << "mean," << io::format_double(rmse_mean) << ',' << opt_str(micro.precision) << ','
        << opt_str(micro.recall) << ',' << opt_str(macro.precision) << ','
        << opt_str(macro.recall) << '\n';
    return out.str();
}

std::string MetricReport::summary() const {
    std::ostringstream out;
    out << "rmse=" << io::format_double(rmse_mean)
        << " rmse_variance=" << io::format_double(rmse_variance)
        << " precision=" << opt_str(micro.precision) << " recall=" << opt_str(micro.recall)
        << " precision_macro=" << opt_str(macro.precision)
        << " recall_macro=" << opt_str(macro.recall) << " folds=" << folds.size()
        << " config=" << config_fingerprint << " eval=" << eval_fingerprint << '\n';
    return out.str();
}

AlphaSweepResult alpha_sweep(const Dataset& dataset, const std::vector<double>& alphas,
                             const PipelineConfig& config, const EvalConfig& eval) {
    AlphaSweepResult result;
    result.alphas = alphas;
    result.reports.resize(alphas.size());

    auto run_point = [&](std::size_t i) {
        PipelineConfig point = config;
        point.similarity.alpha = alphas[i];
        EvalConfig inner = eval;
        inner.jobs = 1;  // parallelism is at the sweep level
        return cross_validate(dataset, point, inner);
    };
    if (eval.jobs <= 1) {
        for (std::size_t i = 0; i < alphas.size(); ++i) result.reports[i] = run_point(i);
    } else {
        std::vector<std::future<MetricReport>> futures;
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            futures.push_back(std::async(std::launch::async, run_point, i));
        }
        for (std::size_t i = 0; i < alphas.size(); ++i) result.reports[i] = futures[i].get();
    }
    return result;
}

std::string AlphaSweepResult::to_csv() const {
    std::ostringstream out;
    out << "alpha,rmse,rmse_variance,precision,recall\n";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        out << io::format_double(alphas[i]) << ',' << io::format_double(reports[i].rmse_mean) << ','
            << io::format_double(reports[i].rmse_variance) << ','
            << opt_str(reports[i].micro.precision) << ',' << opt_str(reports[i].micro.recall)
            << '\n';
    }
    return out.str();
}

OptimizerSweepResult optimizer_sweep(const Dataset& dataset, const PipelineConfig& config,
                                     const EvalConfig& eval) {
    // One fold split shared by all optimizer kinds: same training data, same
    // seeds; only the update rule changes.
    const FoldPlan plan = kfold_split(dataset.ratings, eval.n_folds, eval.seed);
    const RatingTable train = fold_train_table(dataset.ratings, plan, 0);
    const auto test = fold_test_records(dataset.ratings, plan, 0);
    const ItemSimilarityIndex sim(dataset.items, std::min(config.sim_threshold, 1.0));

    OptimizerSweepResult result;
    for (OptimizerKind kind : kAllOptimizers) {
        PipelineConfig point = config;
        point.optimizer = OptimizerSpec::defaults(kind);
        const PipelineModel model = fit_pipeline(train, dataset.users, sim, point);

        std::vector<PredictionPair> pairs;
        pairs.reserve(test.size());
        for (const RatingRecord& r : test) {
            PredictionPair p;
            p.user_idx = dataset.ratings.user_index(r.user_id);
            p.item_idx = dataset.ratings.item_index(r.item_id);
            p.actual = r.rating;
            p.predicted = model.predict(p.user_idx, p.item_idx);
            pairs.push_back(p);
        }
        result.names.push_back(optimizer_name(kind));
        result.histories.push_back(model.autoencoder.history());
        result.final_val_loss.push_back(model.autoencoder.history().back().val_loss);
        result.rmse.push_back(rmse(pairs));
    }
    return result;
}

std::string OptimizerSweepResult::history_csv() const {
    std::vector<std::pair<std::string, std::vector<EpochStats>>> runs;
    for (std::size_t i = 0; i < names.size(); ++i) runs.emplace_back(names[i], histories[i]);
    return loss_history_csv(runs);
}

std::string OptimizerSweepResult::summary_csv() const {
    std::ostringstream out;
    out << "optimizer,final_val_loss,rmse\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << names[i] << ',' << io::format_double(final_val_loss[i]) << ','
            << io::format_double(rmse[i]) << '\n';
    }
    return out.str();
}

ColdStartResult cold_start_experiment(const Dataset& dataset, const std::vector<double>& fractions,
                                      const PipelineConfig& config, unsigned seed) {
    const ItemSimilarityIndex sim(dataset.items, std::min(config.sim_threshold, 1.0));
    ColdStartResult result;
    for (double fraction : fractions) {
        const ColdStartSplit split = coldstart_mask(dataset.ratings, fraction, seed);
        if (split.test.empty() || split.train.size() == 0) {
            throw std::invalid_argument("cold_start_experiment: degenerate fraction " +
                                        io::format_double(fraction));
        }
        const PipelineModel model = fit_pipeline(split.train, dataset.users, sim, config);

        // Held users go through the new-user path explicitly.
        std::vector<int> cluster_of(dataset.ratings.n_users(), -1);
        for (int u : split.held_users) {
            cluster_of[u] =
                assign_new_user(dataset.users[u], model.scheme, model.autoencoder, model.clusters);
        }
        const double train_mean = split.train.mean_rating();
        std::vector<PredictionPair> pairs, baseline;
        for (const RatingRecord& r : split.test) {
            PredictionPair p;
            p.user_idx = dataset.ratings.user_index(r.user_id);
            p.item_idx = dataset.ratings.item_index(r.item_id);
            p.actual = r.rating;
            p.predicted =
                std::clamp(model.ci.values(cluster_of[p.user_idx], p.item_idx), 1.0, 5.0);
            pairs.push_back(p);
            p.predicted = train_mean;
            baseline.push_back(p);
        }
        result.fractions.push_back(fraction);
        result.pipeline_rmse.push_back(rmse(pairs));
        result.baseline_rmse.push_back(rmse(baseline));
        result.n_test.push_back(pairs.size());
    }
    return result;
}

std::string ColdStartResult::to_csv() const {
    std::ostringstream out;
    out << "fraction,rmse,baseline_rmse,n_test\n";
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        out << io::format_double(fractions[i]) << ',' << io::format_double(pipeline_rmse[i]) << ','
            << io::format_double(baseline_rmse[i]) << ',' << n_test[i] << '\n';
    }
    return out.str();
}

std::string predictions_csv(const Dataset& dataset, const std::vector<PredictionPair>& pairs) {
    std::ostringstream out;
    out << "user_id,item_id,predicted,actual\n";
    for (const PredictionPair& p : pairs) {
        out << dataset.ratings.user_id_at(p.user_idx) << ',' << dataset.ratings.item_id_at(p.item_idx)
            << ',' << io::format_double(p.predicted) << ',' << io::format_double(p.actual) << '\n';
    }
    return out.str();
}

}  // namespace graphrec
