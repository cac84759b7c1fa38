#include "graphrec/optimizers.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace graphrec {

const OptimizerKind kAllOptimizers[7] = {
    OptimizerKind::SGD,     OptimizerKind::Adagrad, OptimizerKind::Adadelta,
    OptimizerKind::RMSProp, OptimizerKind::Adam,    OptimizerKind::AdaMax,
    OptimizerKind::Nadam};

const char* optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::SGD: return "sgd";
        case OptimizerKind::Adagrad: return "adagrad";
        case OptimizerKind::Adadelta: return "adadelta";
        case OptimizerKind::RMSProp: return "rmsprop";
        case OptimizerKind::Adam: return "adam";
        case OptimizerKind::AdaMax: return "adamax";
        case OptimizerKind::Nadam: return "nadam";
    }
    throw std::logic_error("optimizer_name: bad kind");
}

OptimizerKind optimizer_kind_from_name(const std::string& name) {
    for (OptimizerKind k : kAllOptimizers) {
        if (name == optimizer_name(k)) return k;
    }
    throw std::invalid_argument("unknown optimizer '" + name + "'");
}

OptimizerSpec OptimizerSpec::defaults(OptimizerKind kind) {
    OptimizerSpec s;
    s.kind = kind;
    switch (kind) {
        case OptimizerKind::SGD:
            s.learning_rate = 0.01;
            break;
        case OptimizerKind::Adagrad:
            s.learning_rate = 0.01;
            s.epsilon = 1e-10;
            break;
        case OptimizerKind::Adadelta:
            s.rho = 0.95;
            s.epsilon = 1e-6;
            break;
        case OptimizerKind::RMSProp:
            s.learning_rate = 0.001;
            s.rho = 0.9;
            break;
        case OptimizerKind::Adam:
            s.learning_rate = 0.001;
            break;
        case OptimizerKind::AdaMax:
            s.learning_rate = 0.002;
            break;
        case OptimizerKind::Nadam:
            s.learning_rate = 0.002;
            break;
    }
    return s;
}

void OptimizerSpec::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v < 1.0; };
    if (learning_rate < 0.0) throw std::invalid_argument("optimizer: negative learning rate");
    if (!in01(beta1) || !in01(beta2)) throw std::invalid_argument("optimizer: beta outside [0,1)");
    if (!in01(rho)) throw std::invalid_argument("optimizer: rho outside [0,1)");
    if (epsilon < 0.0) throw std::invalid_argument("optimizer: negative epsilon");
    if (momentum < 0.0 || momentum >= 1.0) throw std::invalid_argument("optimizer: momentum outside [0,1)");
}

std::string OptimizerSpec::describe() const {
    std::ostringstream out;
    out << optimizer_name(kind) << " lr=" << learning_rate;
    switch (kind) {
        case OptimizerKind::SGD:
            if (momentum > 0.0) out << " momentum=" << momentum;
            break;
        case OptimizerKind::Adagrad:
        case OptimizerKind::RMSProp:
            out << " rho=" << rho << " eps=" << epsilon;
            break;
        case OptimizerKind::Adadelta:
            out << " rho=" << rho << " eps=" << epsilon << " (learning-rate free)";
            break;
        case OptimizerKind::Adam:
        case OptimizerKind::AdaMax:
        case OptimizerKind::Nadam:
            out << " beta1=" << beta1 << " beta2=" << beta2 << " eps=" << epsilon;
            break;
    }
    return out.str();
}

void Optimizer::ensure_state(const std::vector<Eigen::MatrixXd*>& params) {
    if (!slot1_.empty()) {
        if (slot1_.size() != params.size()) {
            throw std::invalid_argument("optimizer: parameter count changed between steps");
        }
        return;
    }
    slot1_.reserve(params.size());
    slot2_.reserve(params.size());
    for (const Eigen::MatrixXd* p : params) {
        slot1_.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
        slot2_.push_back(Eigen::MatrixXd::Zero(p->rows(), p->cols()));
    }
}

void Optimizer::step(std::vector<Eigen::MatrixXd*> params,
                     const std::vector<Eigen::MatrixXd>& grads) {
    if (params.size() != grads.size()) {
        throw std::invalid_argument("optimizer: gradient count mismatch");
    }
    ensure_state(params);
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i]->rows() != grads[i].rows() || params[i]->cols() != grads[i].cols()) {
            throw std::invalid_argument("optimizer: gradient shape mismatch");
        }
        if (!grads[i].allFinite()) {
            throw std::runtime_error("optimizer: non-finite gradient; step aborted");
        }
    }
    ++t_;
    const double lr = spec_.learning_rate;
    const double eps = spec_.epsilon;

    for (std::size_t i = 0; i < params.size(); ++i) {
        Eigen::MatrixXd& p = *params[i];
        const Eigen::MatrixXd& g = grads[i];
        Eigen::MatrixXd& s1 = slot1_[i];
        Eigen::MatrixXd& s2 = slot2_[i];

        switch (spec_.kind) {
            case OptimizerKind::SGD: {
                if (spec_.momentum > 0.0) {
                    s1 = spec_.momentum * s1 + g;
                    p -= lr * s1;
                } else {
                    p -= lr * g;
                }
                break;
            }
            case OptimizerKind::Adagrad: {
                s1.array() += g.array().square();
                p.array() -= lr * g.array() / (s1.array().sqrt() + eps);
                break;
            }
            case OptimizerKind::Adadelta: {
                // RMS-ratio rule; the step size comes entirely from the
                // running squared-delta average.
                s1 = spec_.rho * s1 + (1.0 - spec_.rho) * g.array().square().matrix();
                Eigen::ArrayXXd delta = -((s2.array() + eps).sqrt() / (s1.array() + eps).sqrt()) * g.array();
                s2 = spec_.rho * s2 + (1.0 - spec_.rho) * delta.square().matrix();
                p.array() += delta;
                break;
            }
            case OptimizerKind::RMSProp: {
                s1 = spec_.rho * s1 + (1.0 - spec_.rho) * g.array().square().matrix();
                p.array() -= lr * g.array() / (s1.array().sqrt() + eps);
                break;
            }
            case OptimizerKind::Adam: {
                s1 = spec_.beta1 * s1 + (1.0 - spec_.beta1) * g;
                s2 = spec_.beta2 * s2 + (1.0 - spec_.beta2) * g.array().square().matrix();
                const double bc1 = 1.0 - std::pow(spec_.beta1, t_);
                const double bc2 = 1.0 - std::pow(spec_.beta2, t_);
                p.array() -= lr * (s1.array() / bc1) / ((s2.array() / bc2).sqrt() + eps);
                break;
            }
            case OptimizerKind::AdaMax: {
                s1 = spec_.beta1 * s1 + (1.0 - spec_.beta1) * g;
                // infinity-norm accumulator
                s2 = (spec_.beta2 * s2.array()).max(g.array().abs()).matrix();
                const double bc1 = 1.0 - std::pow(spec_.beta1, t_);
                // s2 == 0 only where every gradient so far was 0; step is 0 there.
                p.array() -= (lr / bc1) * s1.array() / s2.array().max(1e-300);
                break;
            }
            case OptimizerKind::Nadam: {
                s1 = spec_.beta1 * s1 + (1.0 - spec_.beta1) * g;
                s2 = spec_.beta2 * s2 + (1.0 - spec_.beta2) * g.array().square().matrix();
                const double bc1_next = 1.0 - std::pow(spec_.beta1, t_ + 1);
                const double bc1 = 1.0 - std::pow(spec_.beta1, t_);
                const double bc2 = 1.0 - std::pow(spec_.beta2, t_);
                Eigen::ArrayXXd m_hat =
                    spec_.beta1 * s1.array() / bc1_next + (1.0 - spec_.beta1) * g.array() / bc1;
                p.array() -= lr * m_hat / ((s2.array() / bc2).sqrt() + eps);
                break;
            }
        }
    }
}

}  // namespace graphrec
