#include <cmath>
#include <random>

#include <stdexcept>

#include "doctest.h"
#include "graphrec/autoencoder.hpp"

using namespace graphrec;

namespace {

AutoencoderConfig small_config(int d, int h, int code, unsigned seed) {
    AutoencoderConfig c;
    c.input_dim = d;
    c.hidden = h;
    c.code = code;
    c.seed = seed;
    return c;
}

Eigen::MatrixXd random_batch(int rows, int cols, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = dist(rng);
    }
    return m;
}

/// Central finite differences over every parameter entry.
double max_gradient_error(AutoencoderModel& model, const Eigen::MatrixXd& batch, double fd_eps) {
    const auto grads = model.backward(batch);
    const auto params = model.parameters();
    double worst = 0.0;
    for (std::size_t k = 0; k < params.size(); ++k) {
        Eigen::MatrixXd& p = *params[k];
        for (Eigen::Index r = 0; r < p.rows(); ++r) {
            for (Eigen::Index c = 0; c < p.cols(); ++c) {
                const double keep = p(r, c);
                p(r, c) = keep + fd_eps;
                const double up = model.loss(batch);
                p(r, c) = keep - fd_eps;
                const double down = model.loss(batch);
                p(r, c) = keep;
                const double fd = (up - down) / (2 * fd_eps);
                const double an = grads[k](r, c);
                const double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-3});
                worst = std::max(worst, rel);
            }
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("forward basics") {
    SUBCASE("zero weights and biases give zero reconstruction and code") {
        AutoencoderModel model(small_config(5, 3, 2, 1));
        for (auto* p : model.parameters()) p->setZero();
        const auto [recon, code] = forward_one(model, Eigen::VectorXd::Ones(5));
        CHECK(recon.isZero());
        CHECK(code.isZero());
    }
    SUBCASE("identity-like 1-1-1-1-1 net passes positives through") {
        AutoencoderModel model(small_config(1, 1, 1, 1));
        for (auto& w : model.weights()) w.setOnes();
        for (auto& b : model.biases()) b.setZero();
        const auto [recon, code] = forward_one(model, Eigen::VectorXd::Constant(1, 2.0));
        CHECK(recon[0] == doctest::Approx(2.0));
        CHECK(code[0] == doctest::Approx(2.0));
    }
    SUBCASE("relu clips negatives at every layer") {
        AutoencoderModel model(small_config(1, 1, 1, 1));
        for (auto& w : model.weights()) w.setOnes();
        for (auto& b : model.biases()) b.setZero();
        model.weights()[0] *= -1.0;  // first layer flips sign
        const auto [recon, code] = forward_one(model, Eigen::VectorXd::Constant(1, 2.0));
        CHECK(recon[0] == 0.0);
    }
    SUBCASE("matrix-arithmetic oracle on a random net") {
        AutoencoderModel model(small_config(4, 3, 2, 7));
        const Eigen::VectorXd x = random_batch(1, 4, 9).row(0).transpose();
        const auto [recon, code] = forward_one(model, x);
        // straight-line recomputation
        auto relu_v = [](Eigen::VectorXd v) {
            for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::max(0.0, v[i]);
            return v;
        };
        Eigen::VectorXd a = x;
        std::vector<Eigen::VectorXd> acts;
        for (int k = 0; k < 4; ++k) {
            a = relu_v(model.weights()[k] * a + model.biases()[k].col(0));
            acts.push_back(a);
        }
        CHECK((recon - acts[3]).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK((code - acts[1]).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    SUBCASE("width mismatch rejected") {
        AutoencoderModel model(small_config(4, 3, 2, 7));
        CHECK_THROWS_AS(model.forward(Eigen::MatrixXd::Zero(1, 5)), std::invalid_argument);
    }
}

TEST_CASE("loss") {
    AutoencoderModel model(small_config(2, 2, 1, 3));
    SUBCASE("perfect reconstruction with no regularization is zero") {
        AutoencoderConfig c = small_config(1, 1, 1, 1);
        c.l1 = 0.0;
        c.l2 = 0.0;
        AutoencoderModel m(c);
        for (auto& w : m.weights()) w.setOnes();
        for (auto& b : m.biases()) b.setZero();
        Eigen::MatrixXd batch = Eigen::MatrixXd::Constant(3, 1, 2.0);
        CHECK(m.loss(batch) == doctest::Approx(0.0));
    }
    SUBCASE("x=(1,0) reconstructed as (0,0) gives 0.5") {
        AutoencoderConfig c = small_config(2, 2, 1, 3);
        c.l1 = 0.0;
        c.l2 = 0.0;
        AutoencoderModel m(c);
        for (auto* p : m.parameters()) p->setZero();
        Eigen::MatrixXd batch(1, 2);
        batch << 1.0, 0.0;
        CHECK(m.loss(batch) == doctest::Approx(0.5));
    }
    SUBCASE("l1 with |W| summing to 10 adds 0.1") {
        AutoencoderConfig c = small_config(2, 2, 1, 3);
        c.l1 = 0.01;
        c.l2 = 0.0;
        AutoencoderModel m(c);
        for (auto* p : m.parameters()) p->setZero();
        // 10 units of absolute weight spread over the first layer
        m.weights()[0] << 2.5, -2.5, 2.5, -2.5;
        Eigen::MatrixXd batch = Eigen::MatrixXd::Zero(1, 2);
        CHECK(m.loss(batch) == doctest::Approx(0.01 * 10.0));
    }
}

TEST_CASE("backward matches finite differences on random small configs") {
    // 50 seeded configurations, relative error < 1e-4 on every parameter.
    // The subgradient at a ReLU kink is 0 by definition while central
    // differences straddle it, so the fixture randomizes biases and keeps
    // only smooth evaluation points (pre-activations away from 0). Zero
    // biases would otherwise park dead units exactly on the kink.
    int checked = 0;
    for (unsigned seed = 1; seed <= 50; ++seed) {
        std::mt19937 rng(seed * 977);
        const int d = 2 + static_cast<int>(rng() % 5);
        const int h = 2 + static_cast<int>(rng() % 4);
        const int code = 1 + static_cast<int>(rng() % 3);
        AutoencoderConfig c = small_config(d, h, code, seed);
        c.l1 = (seed % 3 == 0) ? 1e-3 : 0.0;
        c.l2 = (seed % 2 == 0) ? 1e-3 : 0.0;
        c.sigmoid_output = seed % 5 == 0;

        bool smooth = false;
        AutoencoderModel model(c);
        Eigen::MatrixXd batch;
        for (unsigned attempt = 0; attempt < 40 && !smooth; ++attempt) {
            model = AutoencoderModel(c);
            std::mt19937 brng(seed * 131 + attempt);
            std::uniform_real_distribution<double> bias(-0.6, 0.6);
            for (auto& b : model.biases()) {
                for (Eigen::Index i = 0; i < b.rows(); ++i) b(i, 0) = bias(brng);
            }
            batch = random_batch(1 + seed % 4, d, seed * 31 + attempt);
            smooth = true;
            for (const auto& z : model.forward(batch).pre_acts) {
                if (z.cwiseAbs().minCoeff() < 1e-3) smooth = false;
            }
        }
        REQUIRE(smooth);
        const double err = max_gradient_error(model, batch, 1e-5);
        INFO("seed ", seed, " d=", d, " h=", h, " code=", code, " err=", err);
        CHECK(err < 1e-4);
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("backward edge rules") {
    SUBCASE("zero input and zero bias: zero data gradient") {
        AutoencoderConfig c = small_config(3, 2, 1, 4);
        c.l1 = 0.0;
        c.l2 = 0.0;
        AutoencoderModel model(c);
        for (auto& b : model.biases()) b.setZero();
        const auto grads = model.backward(Eigen::MatrixXd::Zero(2, 3));
        for (const auto& g : grads) CHECK(g.isZero(1e-15));
    }
    SUBCASE("l1 subgradient: +0.5 weight with l1=0.1 contributes +0.1") {
        AutoencoderConfig c = small_config(1, 1, 1, 4);
        c.l1 = 0.1;
        c.l2 = 0.0;
        AutoencoderModel model(c);
        for (auto* p : model.parameters()) p->setZero();
        model.weights()[0](0, 0) = 0.5;
        const auto grads = model.backward(Eigen::MatrixXd::Zero(1, 1));
        CHECK(grads[0](0, 0) == doctest::Approx(0.1).epsilon(1e-12));
        // sign(0) == 0: untouched zero weights get no l1 push
        CHECK(grads[2](0, 0) == 0.0);
    }
}

TEST_CASE("training") {
    SUBCASE("constant dataset converges to near-zero validation loss with adam") {
        AutoencoderConfig c = small_config(6, 4, 2, 11);
        c.l1 = 0.0;
        c.l2 = 0.0;
        c.epochs = 100;
        Eigen::MatrixXd data = Eigen::MatrixXd::Zero(20, 6);
        for (int i = 0; i < 20; ++i) {
            data(i, 1) = 1.0;
            data(i, 4) = 1.0;
        }
        OptimizerSpec adam = OptimizerSpec::defaults(OptimizerKind::Adam);
        adam.learning_rate = 0.01;
        const AutoencoderModel model = train_autoencoder(c, adam, data);
        CHECK(model.history().size() == 100);
        CHECK(model.history().back().val_loss < 1e-3);
        CHECK(model.parameters_finite());
    }
    SUBCASE("identical seeds give bitwise-identical loss histories") {
        AutoencoderConfig c = small_config(5, 4, 2, 21);
        c.epochs = 8;
        const Eigen::MatrixXd data = (random_batch(30, 5, 5).array() > 0.0).cast<double>();
        const auto a = train_autoencoder(c, OptimizerSpec::defaults(OptimizerKind::RMSProp), data);
        const auto b = train_autoencoder(c, OptimizerSpec::defaults(OptimizerKind::RMSProp), data);
        REQUIRE(a.history().size() == b.history().size());
        for (std::size_t e = 0; e < a.history().size(); ++e) {
            CHECK(a.history()[e].train_loss == b.history()[e].train_loss);
            CHECK(a.history()[e].val_loss == b.history()[e].val_loss);
        }
    }
    SUBCASE("loss stays finite across every epoch for all seven optimizers") {
        const Eigen::MatrixXd data = (random_batch(40, 8, 17).array() > 0.3).cast<double>();
        for (OptimizerKind kind : kAllOptimizers) {
            AutoencoderConfig c = small_config(8, 6, 3, 31);
            c.epochs = 20;
            const auto model = train_autoencoder(c, OptimizerSpec::defaults(kind), data);
            for (const EpochStats& s : model.history()) {
                CHECK(std::isfinite(s.train_loss));
                CHECK(std::isfinite(s.val_loss));
            }
        }
    }
    SUBCASE("plain sgd with tiny rate is non-increasing on a linear-regime set") {
        AutoencoderConfig c = small_config(4, 3, 2, 41);
        c.l1 = 0.0;
        c.l2 = 0.0;
        c.epochs = 30;
        c.batch_size = 1000;  // full batch
        c.validation_fraction = 0.0;
        Eigen::MatrixXd data = random_batch(16, 4, 3).array().abs();
        OptimizerSpec sgd = OptimizerSpec::defaults(OptimizerKind::SGD);
        sgd.learning_rate = 1e-3;
        const auto model = train_autoencoder(c, sgd, data);
        for (std::size_t e = 1; e < model.history().size(); ++e) {
            CHECK(model.history()[e].train_loss <=
                  model.history()[e - 1].train_loss + 1e-12);
        }
    }
    SUBCASE("too few rows rejected") {
        AutoencoderConfig c = small_config(3, 2, 1, 0);
        CHECK_THROWS_AS(
            train_autoencoder(c, OptimizerSpec::defaults(OptimizerKind::Adam),
                              Eigen::MatrixXd::Zero(5, 3)),
            std::invalid_argument);
    }
}

TEST_CASE("encode") {
    SUBCASE("zero-weight model encodes everything to zero") {
        AutoencoderModel model(small_config(5, 3, 2, 2));
        for (auto* p : model.parameters()) p->setZero();
        const Eigen::MatrixXd codes = model.encode(random_batch(4, 5, 1));
        CHECK(codes.rows() == 4);
        CHECK(codes.cols() == 2);
        CHECK(codes.isZero());
    }
    SUBCASE("identical rows encode identically; codes are non-negative") {
        AutoencoderModel model(small_config(5, 3, 2, 6));
        Eigen::MatrixXd batch = random_batch(3, 5, 8);
        batch.row(2) = batch.row(0);
        const Eigen::MatrixXd codes = model.encode(batch);
        CHECK((codes.row(2) - codes.row(0)).lpNorm<Eigen::Infinity>() == 0.0);
        CHECK((codes.array() >= 0.0).all());
    }
    SUBCASE("width mismatch rejected") {
        AutoencoderModel model(small_config(5, 3, 2, 6));
        CHECK_THROWS_AS(model.encode(Eigen::MatrixXd::Zero(1, 4)), std::invalid_argument);
    }
}

TEST_CASE("checkpoint serialization round-trips") {
    AutoencoderConfig c = small_config(6, 4, 3, 13);
    c.epochs = 3;
    const Eigen::MatrixXd data = (random_batch(15, 6, 2).array() > 0.0).cast<double>();
    const auto model = train_autoencoder(c, OptimizerSpec::defaults(OptimizerKind::Adam), data);
    const auto restored = AutoencoderModel::deserialize(model.serialize());
    for (int k = 0; k < 4; ++k) {
        CHECK(restored.weights()[k] == model.weights()[k]);
        CHECK(restored.biases()[k] == model.biases()[k]);
    }
    REQUIRE(restored.history().size() == model.history().size());
    CHECK(restored.history().back().val_loss == model.history().back().val_loss);
    CHECK(restored.serialize() == model.serialize());
}
