#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace graphrec {

enum class OptimizerKind { SGD, Adagrad, Adadelta, RMSProp, Adam, AdaMax, Nadam };

OptimizerKind optimizer_kind_from_name(const std::string& name);
const char* optimizer_name(OptimizerKind kind);
extern const OptimizerKind kAllOptimizers[7];

/// Update-rule selector plus hyperparameters. Defaults follow each rule's
/// defining description; Adadelta deliberately has no learning rate.
struct OptimizerSpec {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 0.001;
    double beta1 = 0.9;    // Adam/AdaMax/Nadam first-moment decay
    double beta2 = 0.999;  // Adam/Nadam second-moment decay
    double rho = 0.9;      // RMSProp decay (Adadelta uses 0.95)
    double epsilon = 1e-8;
    double momentum = 0.0;  // SGD only

    static OptimizerSpec defaults(OptimizerKind kind);
    void validate() const;
    std::string describe() const;
};

/// Per-parameter optimizer state. Parameters are a flat list of matrices;
/// state slots mirror their shapes and start at zero.
class Optimizer {
public:
    explicit Optimizer(OptimizerSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

    const OptimizerSpec& spec() const { return spec_; }

    /// Applies one update step in place. Throws on NaN gradients (the step is
    /// not applied) and on shape mismatches.
    void step(std::vector<Eigen::MatrixXd*> params, const std::vector<Eigen::MatrixXd>& grads);

    long step_count() const { return t_; }

private:
    void ensure_state(const std::vector<Eigen::MatrixXd*>& params);

    OptimizerSpec spec_;
    long t_ = 0;
    std::vector<Eigen::MatrixXd> slot1_;  // first moment / squared-grad accumulator
    std::vector<Eigen::MatrixXd> slot2_;  // second moment / squared-delta accumulator
};

}  // namespace graphrec
