#pragma once

#include <string>
#include <vector>

#include "graphrec/evaluation.hpp"
#include "graphrec/pipeline.hpp"

namespace graphrec {

/// Everything a run needs, declaratively. Sections in the config file mirror
/// the module names; unknown sections or keys are rejected up front.
struct RunConfig {
    std::string data_path = "data/ml-100k";
    DatasetVariant variant = DatasetVariant::ML100K;

    PipelineConfig pipeline;
    EvalConfig eval;

    std::vector<double> sweep_alphas = {0.005, 0.0075, 0.01, 0.015, 0.02, 0.03};
    std::vector<double> coldstart_fractions = {0.05, 0.1, 0.2, 0.3};
    unsigned coldstart_seed = 23;

    RunConfig();  // dataset-appropriate defaults for 100k

    /// Canonical config document; `parse` accepts exactly this format.
    std::string serialize() const;
    std::string fingerprint() const;

    static RunConfig parse(const std::string& text);

    /// Applies the --seed override to every stage seed.
    void override_seed(unsigned seed);
};

Dataset load_dataset(const RunConfig& config);

}  // namespace graphrec
