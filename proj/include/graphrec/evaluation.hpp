#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphrec/pipeline.hpp"

namespace graphrec {

struct PredictionPair {
    double actual = 0.0;
    double predicted = 0.0;
    int user_idx = -1;
    int item_idx = -1;
};

/// Root mean squared error over (actual, predicted) pairs. Throws on empty input.
double rmse(const std::vector<PredictionPair>& pairs);

/// Relevant <=> actual >= relevance_threshold; selected <=> predicted >=
/// selection_threshold. A zero denominator yields an unset optional, not 0.
struct PrecisionRecall {
    std::optional<double> precision;
    std::optional<double> recall;
};
PrecisionRecall precision_recall(const std::vector<PredictionPair>& pairs,
                                 double relevance_threshold = 4.0,
                                 double selection_threshold = 4.0);

/// Mean of per-user precision/recall over users where the metric is defined.
PrecisionRecall precision_recall_macro(const std::vector<PredictionPair>& pairs,
                                       double relevance_threshold = 4.0,
                                       double selection_threshold = 4.0);

struct FoldMetrics {
    int fold = 0;
    std::size_t n_test = 0;
    double rmse = 0.0;
    PrecisionRecall micro;
    PrecisionRecall macro;
};

struct MetricReport {
    double rmse_mean = 0.0;
    double rmse_variance = 0.0;  // sample variance across folds
    PrecisionRecall micro;       // fold averages
    PrecisionRecall macro;
    std::vector<FoldMetrics> folds;
    std::string config_fingerprint;
    std::string eval_fingerprint;  // includes folds/seed
    /// Pooled test-pair predictions in fold order (kept on request).
    std::vector<PredictionPair> predictions;

    std::string to_csv() const;
    std::string summary() const;
};

struct EvalConfig {
    int n_folds = 5;
    unsigned seed = 42;
    int jobs = 1;
    bool keep_predictions = false;
};

/// Per fold: rebuild graph/scheme/autoencoder/clusters/CI from the training
/// records only, predict the fold, aggregate means and variances.
MetricReport cross_validate(const Dataset& dataset, const PipelineConfig& config,
                            const EvalConfig& eval);

struct AlphaSweepResult {
    std::vector<double> alphas;
    std::vector<MetricReport> reports;

    std::string to_csv() const;  // alpha,rmse,rmse_variance,precision,recall
};
AlphaSweepResult alpha_sweep(const Dataset& dataset, const std::vector<double>& alphas,
                             const PipelineConfig& config, const EvalConfig& eval);

struct OptimizerSweepResult {
    std::vector<std::string> names;
    std::vector<std::vector<EpochStats>> histories;
    std::vector<double> final_val_loss;
    std::vector<double> rmse;  // single-fold evaluation per optimizer

    std::string history_csv() const;
    std::string summary_csv() const;  // optimizer,final_val_loss,rmse
};
/// Shared data and seeds across the seven optimizer kinds; loss histories per
/// kind plus a fold-0 RMSE evaluation.
OptimizerSweepResult optimizer_sweep(const Dataset& dataset, const PipelineConfig& config,
                                     const EvalConfig& eval);

struct ColdStartResult {
    std::vector<double> fractions;
    std::vector<double> pipeline_rmse;
    std::vector<double> baseline_rmse;  // global train-mean predictor
    std::vector<std::size_t> n_test;

    std::string to_csv() const;
};
/// Per fraction: hold out all ratings of a user sample, fit on the rest,
/// predict held users through the new-user path, compare with the
/// train-mean baseline on the same pairs.
ColdStartResult cold_start_experiment(const Dataset& dataset, const std::vector<double>& fractions,
                                      const PipelineConfig& config, unsigned seed);

/// `user_id,item_id,predicted,actual` lines.
std::string predictions_csv(const Dataset& dataset, const std::vector<PredictionPair>& pairs);

}  // namespace graphrec
