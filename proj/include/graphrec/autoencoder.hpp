#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "graphrec/feature_builder.hpp"
#include "graphrec/optimizers.hpp"

namespace graphrec {

/// Five layer sizes [D, h, code, h, D]; ReLU on every layer including the
/// output (a sigmoid output is available as an ablation flag).
struct AutoencoderConfig {
    int input_dim = 0;
    int hidden = 16;
    int code = 4;
    bool sigmoid_output = false;
    double l1 = 1e-5;  // elastic net, weights only
    double l2 = 1e-5;
    int epochs = 100;
    int batch_size = 32;
    double validation_fraction = 0.2;
    unsigned seed = 0;

    std::vector<int> layer_sizes() const { return {input_dim, hidden, code, hidden, input_dim}; }
    void validate() const;
};

struct EpochStats {
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct ForwardCache {
    std::vector<Eigen::MatrixXd> activations;  // A0 (input) .. A4 (reconstruction)
    std::vector<Eigen::MatrixXd> pre_acts;     // Z1 .. Z4
};

class AutoencoderModel {
public:
    AutoencoderModel() = default;
    /// Glorot-uniform initialization from the config seed.
    explicit AutoencoderModel(const AutoencoderConfig& config);

    const AutoencoderConfig& config() const { return config_; }
    const std::vector<Eigen::MatrixXd>& weights() const { return weights_; }
    std::vector<Eigen::MatrixXd>& weights() { return weights_; }
    /// Biases as column matrices so they share the optimizer's parameter list.
    const std::vector<Eigen::MatrixXd>& biases() const { return biases_; }
    std::vector<Eigen::MatrixXd>& biases() { return biases_; }
    std::vector<EpochStats>& history() { return history_; }
    const std::vector<EpochStats>& history() const { return history_; }

    /// [W1,b1,...,W4,b4], matching backward()'s gradient order.
    std::vector<Eigen::MatrixXd*> parameters();

    /// Batch forward pass; rows are samples.
    ForwardCache forward(const Eigen::MatrixXd& batch) const;
    /// Mean per-sample MSE plus the elastic-net penalty on weights.
    double loss(const Eigen::MatrixXd& batch) const;
    /// Exact gradients of `loss` in parameter order [W1,b1,...,W4,b4].
    std::vector<Eigen::MatrixXd> backward(const Eigen::MatrixXd& batch) const;

    /// Code-layer activations (n x code).
    Eigen::MatrixXd encode(const Eigen::MatrixXd& batch) const;
    Eigen::VectorXd encode_row(const Eigen::VectorXd& row) const;

    bool parameters_finite() const;

    std::string serialize() const;
    static AutoencoderModel deserialize(const std::string& text);

private:
    AutoencoderConfig config_;
    std::vector<Eigen::MatrixXd> weights_;  // W_k: out x in
    std::vector<Eigen::MatrixXd> biases_;   // b_k: out x 1
    std::vector<EpochStats> history_;
};

/// Single-sample forward: (reconstruction, code).
std::pair<Eigen::VectorXd, Eigen::VectorXd> forward_one(const AutoencoderModel& model,
                                                        const Eigen::VectorXd& x);

/// Trains on the binary feature matrix. A seeded shuffle splits off
/// validation rows first; epoch order is deterministic for a fixed seed.
/// Throws (naming the epoch) if the loss stops being finite.
AutoencoderModel train_autoencoder(const AutoencoderConfig& config, const OptimizerSpec& optimizer,
                                   const Eigen::MatrixXd& data);

inline AutoencoderModel train_autoencoder(const AutoencoderConfig& config,
                                          const OptimizerSpec& optimizer,
                                          const RawFeatureMatrix& data) {
    return train_autoencoder(config, optimizer, data.values);
}

/// `epoch,optimizer,train_loss,val_loss` lines for one or more training runs.
std::string loss_history_csv(
    const std::vector<std::pair<std::string, std::vector<EpochStats>>>& runs);

}  // namespace graphrec
