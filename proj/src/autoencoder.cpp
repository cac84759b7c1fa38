#include "graphrec/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "graphrec/io.hpp"

namespace graphrec {

void AutoencoderConfig::validate() const {
    if (input_dim < 1) throw std::invalid_argument("autoencoder: input_dim must be >= 1");
    if (hidden < 1 || code < 1) throw std::invalid_argument("autoencoder: layer sizes must be >= 1");
    if (l1 < 0.0 || l2 < 0.0) throw std::invalid_argument("autoencoder: negative regularizer");
    if (epochs < 1) throw std::invalid_argument("autoencoder: epochs must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("autoencoder: batch_size must be >= 1");
    if (validation_fraction < 0.0 || validation_fraction >= 1.0) {
        throw std::invalid_argument("autoencoder: validation_fraction outside [0,1)");
    }
}

AutoencoderModel::AutoencoderModel(const AutoencoderConfig& config) : config_(config) {
    config_.validate();
    const auto sizes = config_.layer_sizes();
    std::mt19937 rng(config_.seed);
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
        const int fan_in = sizes[k];
        const int fan_out = sizes[k + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        std::uniform_real_distribution<double> dist(-limit, limit);
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
        }
        weights_.push_back(std::move(w));
        // Small positive offset keeps units off the ReLU kink at the start;
        // zero biases can leave whole layers dead with no gradient path back.
        biases_.push_back(Eigen::MatrixXd::Constant(fan_out, 1, 0.1));
    }
}

std::vector<Eigen::MatrixXd*> AutoencoderModel::parameters() {
    std::vector<Eigen::MatrixXd*> params;
    params.reserve(2 * weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        params.push_back(&weights_[k]);
        params.push_back(&biases_[k]);
    }
    return params;
}

namespace {

Eigen::MatrixXd relu(const Eigen::MatrixXd& z) { return z.cwiseMax(0.0); }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

}  // namespace

ForwardCache AutoencoderModel::forward(const Eigen::MatrixXd& batch) const {
    if (batch.cols() != config_.input_dim) {
        throw std::invalid_argument("autoencoder: input width mismatch");
    }
    ForwardCache cache;
    cache.activations.push_back(batch);
    Eigen::MatrixXd a = batch;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        Eigen::MatrixXd z = a * weights_[k].transpose();
        z.rowwise() += biases_[k].col(0).transpose();
        const bool last = k + 1 == weights_.size();
        a = (last && config_.sigmoid_output) ? sigmoid(z) : relu(z);
        cache.pre_acts.push_back(std::move(z));
        cache.activations.push_back(a);
    }
    return cache;
}

double AutoencoderModel::loss(const Eigen::MatrixXd& batch) const {
    if (batch.rows() == 0) throw std::invalid_argument("autoencoder: empty batch");
    const ForwardCache cache = forward(batch);
    const Eigen::MatrixXd& recon = cache.activations.back();
    const double n = static_cast<double>(batch.rows());
    const double d = static_cast<double>(batch.cols());
    double value = (recon - batch).squaredNorm() / (n * d);
    for (const Eigen::MatrixXd& w : weights_) {
        if (config_.l1 > 0.0) value += config_.l1 * w.cwiseAbs().sum();
        if (config_.l2 > 0.0) value += config_.l2 * w.squaredNorm();
    }
    return value;
}

std::vector<Eigen::MatrixXd> AutoencoderModel::backward(const Eigen::MatrixXd& batch) const {
    const ForwardCache cache = forward(batch);
    const double n = static_cast<double>(batch.rows());
    const double d = static_cast<double>(batch.cols());
    const std::size_t layers = weights_.size();

    std::vector<Eigen::MatrixXd> grads(2 * layers);
    Eigen::MatrixXd delta = 2.0 * (cache.activations.back() - batch) / (n * d);
    for (std::size_t k = layers; k-- > 0;) {
        const bool last = k + 1 == layers;
        if (last && config_.sigmoid_output) {
            const auto& a = cache.activations[k + 1].array();
            delta = (delta.array() * a * (1.0 - a)).matrix();
        } else {
            // ReLU subgradient: 0 at z <= 0.
            delta = (delta.array() * (cache.pre_acts[k].array() > 0.0).cast<double>()).matrix();
        }
        Eigen::MatrixXd dw = delta.transpose() * cache.activations[k];
        if (config_.l1 > 0.0) dw += config_.l1 * weights_[k].array().sign().matrix();
        if (config_.l2 > 0.0) dw += 2.0 * config_.l2 * weights_[k];
        grads[2 * k] = std::move(dw);
        grads[2 * k + 1] = delta.colwise().sum().transpose();
        if (k > 0) delta = delta * weights_[k];
    }
    return grads;
}

Eigen::MatrixXd AutoencoderModel::encode(const Eigen::MatrixXd& batch) const {
    if (batch.cols() != config_.input_dim) {
        throw std::invalid_argument("autoencoder: input width mismatch");
    }
    Eigen::MatrixXd a = batch;
    for (int k = 0; k < 2; ++k) {
        Eigen::MatrixXd z = a * weights_[k].transpose();
        z.rowwise() += biases_[k].col(0).transpose();
        a = relu(z);
    }
    return a;
}

Eigen::VectorXd AutoencoderModel::encode_row(const Eigen::VectorXd& row) const {
    return encode(row.transpose()).row(0).transpose();
}

bool AutoencoderModel::parameters_finite() const {
    for (const auto& w : weights_) {
        if (!w.allFinite()) return false;
    }
    for (const auto& b : biases_) {
        if (!b.allFinite()) return false;
    }
    return true;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> forward_one(const AutoencoderModel& model,
                                                        const Eigen::VectorXd& x) {
    const ForwardCache cache = model.forward(x.transpose());
    return {cache.activations.back().row(0).transpose(),
            cache.activations[2].row(0).transpose()};
}

AutoencoderModel train_autoencoder(const AutoencoderConfig& config, const OptimizerSpec& optimizer,
                                   const Eigen::MatrixXd& data) {
    AutoencoderConfig cfg = config;
    if (cfg.input_dim == 0) cfg.input_dim = static_cast<int>(data.cols());
    cfg.validate();
    if (data.cols() != cfg.input_dim) {
        throw std::invalid_argument("train_autoencoder: data width mismatch");
    }
    const int n = static_cast<int>(data.rows());
    if (n < 10) throw std::invalid_argument("train_autoencoder: need at least 10 rows");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::seed_seq split_seed{cfg.seed, 0x5eedu};
    std::mt19937 split_rng(split_seed);
    std::shuffle(order.begin(), order.end(), split_rng);
    const int n_val = static_cast<int>(cfg.validation_fraction * n);
    const int n_train = n - n_val;
    if (n_train < 1) throw std::invalid_argument("train_autoencoder: empty training split");

    Eigen::MatrixXd val(n_val, data.cols()), train(n_train, data.cols());
    for (int i = 0; i < n_val; ++i) val.row(i) = data.row(order[i]);
    for (int i = 0; i < n_train; ++i) train.row(i) = data.row(order[n_val + i]);

    AutoencoderModel model(cfg);
    Optimizer opt(optimizer);
    const std::vector<Eigen::MatrixXd*> params = model.parameters();

    std::vector<int> epoch_order(n_train);
    std::iota(epoch_order.begin(), epoch_order.end(), 0);
    std::seed_seq shuffle_seed{cfg.seed, 0xba7c4u};
    std::mt19937 shuffle_rng(shuffle_seed);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(epoch_order.begin(), epoch_order.end(), shuffle_rng);
        double loss_sum = 0.0;
        for (int start = 0; start < n_train; start += cfg.batch_size) {
            const int count = std::min(cfg.batch_size, n_train - start);
            Eigen::MatrixXd batch(count, data.cols());
            for (int i = 0; i < count; ++i) batch.row(i) = train.row(epoch_order[start + i]);

            const double batch_loss = model.loss(batch);
            if (!std::isfinite(batch_loss)) {
                throw std::runtime_error("train_autoencoder: loss diverged at epoch " +
                                         std::to_string(epoch + 1));
            }
            loss_sum += batch_loss * count;

            opt.step(params, model.backward(batch));
        }
        EpochStats stats;
        stats.train_loss = loss_sum / n_train;
        stats.val_loss = n_val > 0 ? model.loss(val) : model.loss(train);
        if (!std::isfinite(stats.val_loss)) {
            throw std::runtime_error("train_autoencoder: validation loss diverged at epoch " +
                                     std::to_string(epoch + 1));
        }
        model.history().push_back(stats);
    }
    return model;
}

std::string loss_history_csv(
    const std::vector<std::pair<std::string, std::vector<EpochStats>>>& runs) {
    std::ostringstream out;
    out << "epoch,optimizer,train_loss,val_loss\n";
    for (const auto& [name, history] : runs) {
        for (std::size_t e = 0; e < history.size(); ++e) {
            out << (e + 1) << ',' << name << ',' << io::format_double(history[e].train_loss) << ','
                << io::format_double(history[e].val_loss) << '\n';
        }
    }
    return out.str();
}

std::string AutoencoderModel::serialize() const {
    std::ostringstream out;
    out << "autoencoder v1\n";
    out << config_.input_dim << ' ' << config_.hidden << ' ' << config_.code << ' '
        << (config_.sigmoid_output ? 1 : 0) << ' ' << io::format_double(config_.l1) << ' '
        << io::format_double(config_.l2) << ' ' << config_.epochs << ' ' << config_.batch_size
        << ' ' << io::format_double(config_.validation_fraction) << ' ' << config_.seed << '\n';
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        out << "layer " << k << ' ' << weights_[k].rows() << ' ' << weights_[k].cols() << '\n';
        for (Eigen::Index r = 0; r < weights_[k].rows(); ++r) {
            for (Eigen::Index c = 0; c < weights_[k].cols(); ++c) {
                out << (c ? " " : "") << io::format_double(weights_[k](r, c));
            }
            out << '\n';
        }
        for (Eigen::Index r = 0; r < biases_[k].rows(); ++r) {
            out << (r ? " " : "") << io::format_double(biases_[k](r, 0));
        }
        out << '\n';
    }
    out << "history " << history_.size() << '\n';
    for (const EpochStats& s : history_) {
        out << io::format_double(s.train_loss) << ' ' << io::format_double(s.val_loss) << '\n';
    }
    return out.str();
}

AutoencoderModel AutoencoderModel::deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "autoencoder v1") {
        throw std::runtime_error("autoencoder checkpoint: bad header");
    }
    AutoencoderConfig cfg;
    int sigmoid = 0;
    in >> cfg.input_dim >> cfg.hidden >> cfg.code >> sigmoid >> cfg.l1 >> cfg.l2 >> cfg.epochs >>
        cfg.batch_size >> cfg.validation_fraction >> cfg.seed;
    if (!in) throw std::runtime_error("autoencoder checkpoint: bad config line");
    cfg.sigmoid_output = sigmoid != 0;

    AutoencoderModel model;
    model.config_ = cfg;
    for (int k = 0; k < 4; ++k) {
        std::string tag;
        int idx = 0;
        Eigen::Index rows = 0, cols = 0;
        in >> tag >> idx >> rows >> cols;
        if (!in || tag != "layer" || idx != k) {
            throw std::runtime_error("autoencoder checkpoint: bad layer header");
        }
        Eigen::MatrixXd w(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            for (Eigen::Index c = 0; c < cols; ++c) in >> w(r, c);
        }
        Eigen::MatrixXd b(rows, 1);
        for (Eigen::Index r = 0; r < rows; ++r) in >> b(r, 0);
        if (!in) throw std::runtime_error("autoencoder checkpoint: truncated parameters");
        model.weights_.push_back(std::move(w));
        model.biases_.push_back(std::move(b));
    }
    std::string tag;
    std::size_t n_hist = 0;
    in >> tag >> n_hist;
    if (!in || tag != "history") throw std::runtime_error("autoencoder checkpoint: bad history");
    for (std::size_t e = 0; e < n_hist; ++e) {
        EpochStats s;
        in >> s.train_loss >> s.val_loss;
        model.history_.push_back(s);
    }
    return model;
}

}  // namespace graphrec
