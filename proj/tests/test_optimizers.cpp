#include <cmath>

#include <stdexcept>

#include "doctest.h"
#include "graphrec/optimizers.hpp"

using namespace graphrec;

namespace {

Eigen::MatrixXd scalar(double v) {
    Eigen::MatrixXd m(1, 1);
    m(0, 0) = v;
    return m;
}

/// Runs a 2-step scalar trace: p0 with gradients g1 then g2.
std::pair<double, double> trace2(const OptimizerSpec& spec, double p0, double g1, double g2) {
    Optimizer opt(spec);
    Eigen::MatrixXd p = scalar(p0);
    opt.step({&p}, {scalar(g1)});
    const double p1 = p(0, 0);
    opt.step({&p}, {scalar(g2)});
    return {p1, p(0, 0)};
}

}  // namespace

// Every expected value below is straight-line arithmetic from the update
// rule's definition, written out independently of the implementation.

TEST_CASE("sgd trace") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::SGD);
    s.learning_rate = 0.1;
    auto [p1, p2] = trace2(s, 1.0, 1.0, -2.0);
    CHECK(p1 == doctest::Approx(1.0 - 0.1 * 1.0).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(1.0 - 0.1 * 1.0 + 0.1 * 2.0).epsilon(1e-12));
}

TEST_CASE("sgd momentum trace") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::SGD);
    s.learning_rate = 0.1;
    s.momentum = 0.9;
    auto [p1, p2] = trace2(s, 0.0, 1.0, 1.0);
    // v1 = 1; v2 = 0.9*1 + 1 = 1.9
    CHECK(p1 == doctest::Approx(-0.1).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(-0.1 - 0.1 * 1.9).epsilon(1e-12));
}

TEST_CASE("adagrad trace accumulates squared gradients") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::Adagrad);
    s.learning_rate = 1.0;
    const double eps = s.epsilon;
    auto [p1, p2] = trace2(s, 0.0, 2.0, 2.0);
    const double e1 = -2.0 / (std::sqrt(4.0) + eps);
    const double e2 = e1 - 2.0 / (std::sqrt(8.0) + eps);
    CHECK(p1 == doctest::Approx(e1).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(e2).epsilon(1e-12));
    // the idealized -2/sqrt(4), -2/sqrt(8) steps hold to ~1e-9 with the
    // documented epsilon
    CHECK(p1 == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(p2 == doctest::Approx(-1.0 - 2.0 / std::sqrt(8.0)).epsilon(1e-9));
}

TEST_CASE("adadelta trace has no learning rate") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::Adadelta);
    const double rho = s.rho, eps = s.epsilon;
    auto [p1, p2] = trace2(s, 1.0, 0.5, -0.25);

    double eg = 0.0, ed = 0.0, p = 1.0;
    // step 1, g = 0.5
    eg = rho * eg + (1 - rho) * 0.5 * 0.5;
    double dx = -std::sqrt(ed + eps) / std::sqrt(eg + eps) * 0.5;
    ed = rho * ed + (1 - rho) * dx * dx;
    p += dx;
    CHECK(p1 == doctest::Approx(p).epsilon(1e-12));
    // step 2, g = -0.25
    eg = rho * eg + (1 - rho) * 0.25 * 0.25;
    dx = -std::sqrt(ed + eps) / std::sqrt(eg + eps) * -0.25;
    ed = rho * ed + (1 - rho) * dx * dx;
    p += dx;
    CHECK(p2 == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("rmsprop trace") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::RMSProp);
    s.learning_rate = 0.01;
    const double rho = s.rho, eps = s.epsilon;
    auto [p1, p2] = trace2(s, 0.0, 3.0, 3.0);

    double eg = (1 - rho) * 9.0;
    const double e1 = -0.01 * 3.0 / (std::sqrt(eg) + eps);
    eg = rho * eg + (1 - rho) * 9.0;
    const double e2 = e1 - 0.01 * 3.0 / (std::sqrt(eg) + eps);
    CHECK(p1 == doctest::Approx(e1).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(e2).epsilon(1e-12));
}

TEST_CASE("adam trace with bias correction") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::Adam);
    const double lr = s.learning_rate, b1 = s.beta1, b2 = s.beta2, eps = s.epsilon;
    auto [p1, p2] = trace2(s, 0.5, 0.2, -0.1);

    double m = 0.0, v = 0.0, p = 0.5;
    m = b1 * m + (1 - b1) * 0.2;
    v = b2 * v + (1 - b2) * 0.04;
    p -= lr * (m / (1 - b1)) / (std::sqrt(v / (1 - b2)) + eps);
    CHECK(p1 == doctest::Approx(p).epsilon(1e-12));
    m = b1 * m + (1 - b1) * -0.1;
    v = b2 * v + (1 - b2) * 0.01;
    p -= lr * (m / (1 - b1 * b1)) / (std::sqrt(v / (1 - b2 * b2)) + eps);
    CHECK(p2 == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("adam first step moves by ~lr in the gradient direction") {
    for (double g : {0.001, 0.5, 100.0, -3.0}) {
        OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::Adam);
        Optimizer opt(s);
        Eigen::MatrixXd p = scalar(0.0);
        opt.step({&p}, {scalar(g)});
        CHECK(std::abs(p(0, 0)) == doctest::Approx(s.learning_rate).epsilon(1e-4));
        CHECK(std::signbit(p(0, 0)) != std::signbit(g));
    }
}

TEST_CASE("adamax trace uses the infinity norm") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::AdaMax);
    const double lr = s.learning_rate, b1 = s.beta1, b2 = s.beta2;
    auto [p1, p2] = trace2(s, 1.0, 4.0, 1.0);

    double m = 0.0, u = 0.0, p = 1.0;
    m = b1 * m + (1 - b1) * 4.0;
    u = std::max(b2 * u, 4.0);
    p -= (lr / (1 - b1)) * m / u;
    CHECK(p1 == doctest::Approx(p).epsilon(1e-12));
    m = b1 * m + (1 - b1) * 1.0;
    u = std::max(b2 * u, 1.0);  // stays 4*0.999
    p -= (lr / (1 - b1 * b1)) * m / u;
    CHECK(p2 == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("nadam trace applies the nesterov correction") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::Nadam);
    const double lr = s.learning_rate, b1 = s.beta1, b2 = s.beta2, eps = s.epsilon;
    auto [p1, p2] = trace2(s, 0.0, 1.0, 1.0);

    double m = 0.0, v = 0.0, p = 0.0;
    // t = 1
    m = b1 * m + (1 - b1) * 1.0;
    v = b2 * v + (1 - b2) * 1.0;
    double m_hat = b1 * m / (1 - b1 * b1) + (1 - b1) * 1.0 / (1 - b1);
    p -= lr * m_hat / (std::sqrt(v / (1 - b2)) + eps);
    CHECK(p1 == doctest::Approx(p).epsilon(1e-12));
    // t = 2
    m = b1 * m + (1 - b1) * 1.0;
    v = b2 * v + (1 - b2) * 1.0;
    m_hat = b1 * m / (1 - b1 * b1 * b1) + (1 - b1) * 1.0 / (1 - b1 * b1);
    p -= lr * m_hat / (std::sqrt(v / (1 - b2 * b2)) + eps);
    CHECK(p2 == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("state shapes mirror parameters; nan gradients abort the step") {
    Optimizer opt(OptimizerSpec::defaults(OptimizerKind::Adam));
    Eigen::MatrixXd p = Eigen::MatrixXd::Ones(2, 3);
    Eigen::MatrixXd g = Eigen::MatrixXd::Ones(2, 3) * 0.1;
    opt.step({&p}, {g});
    CHECK(opt.step_count() == 1);

    Eigen::MatrixXd before = p;
    Eigen::MatrixXd bad = g;
    bad(1, 2) = std::nan("");
    CHECK_THROWS_AS(opt.step({&p}, {bad}), std::runtime_error);
    CHECK(p == before);  // aborted step leaves parameters untouched

    Eigen::MatrixXd wrong_shape = Eigen::MatrixXd::Ones(3, 2);
    CHECK_THROWS_AS(opt.step({&p}, {wrong_shape}), std::invalid_argument);
}

TEST_CASE("hyperparameter validation") {
    OptimizerSpec s = OptimizerSpec::defaults(OptimizerKind::Adam);
    s.beta1 = 1.0;
    CHECK_THROWS_AS(Optimizer{s}, std::invalid_argument);
    s = OptimizerSpec::defaults(OptimizerKind::SGD);
    s.learning_rate = -1.0;
    CHECK_THROWS_AS(Optimizer{s}, std::invalid_argument);
}

TEST_CASE("optimizer names round-trip") {
    for (OptimizerKind k : kAllOptimizers) {
        CHECK(optimizer_kind_from_name(optimizer_name(k)) == k);
    }
    CHECK_THROWS_AS(optimizer_kind_from_name("adamw"), std::invalid_argument);
}
