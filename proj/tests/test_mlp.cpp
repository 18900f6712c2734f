#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "graphon/errors.hpp"
#include "graphon/mlp.hpp"

using namespace graphon;

namespace {

MlpSpec small_spec(int in, std::vector<int> hidden, int out) {
    MlpSpec s;
    s.input_dim = in;
    s.hidden_widths = std::move(hidden);
    s.output_dim = out;
    return s;
}

}  // namespace

TEST_CASE("spec bookkeeping") {
    MlpSpec s = small_spec(3, {5, 4}, 2);
    CHECK(s.layer_count() == 3);
    CHECK(s.fan_in(0) == 3);
    CHECK(s.fan_out(0) == 5);
    CHECK(s.fan_in(1) == 5);
    CHECK(s.fan_out(1) == 4);
    CHECK(s.fan_in(2) == 4);
    CHECK(s.fan_out(2) == 2);
    CHECK(s.parameter_count() == (3 + 1) * 5 + (5 + 1) * 4 + (4 + 1) * 2);

    CHECK_THROWS_AS(small_spec(0, {4}, 1).validate(), ConfigError);
    CHECK_THROWS_AS(small_spec(1, {}, 1).validate(), ConfigError);
    CHECK_THROWS_AS(small_spec(1, {0}, 1).validate(), ConfigError);
}

TEST_CASE("zero-initialized network returns zero") {
    Mlp net((small_spec(2, {4, 4}, 1)));
    Eigen::VectorXd x(2);
    x << 0.7, -1.3;
    CHECK(net.forward(x)(0) == 0.0);
}

TEST_CASE("hand-computed 1-2-1 tanh network") {
    Mlp net((small_spec(1, {2}, 1)));
    net.weight(0) << 1.0, -0.5;  // column vector of two weights
    net.bias(0) << 0.25, 0.0;
    net.weight(1) << 2.0, -1.0;
    net.bias(1) << 0.1;

    const double x = 0.8;
    const double h1 = std::tanh(1.0 * x + 0.25);
    const double h2 = std::tanh(-0.5 * x);
    const double expected = 2.0 * h1 - 1.0 * h2 + 0.1;

    Eigen::VectorXd in(1);
    in << x;
    CHECK(net.forward(in)(0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("batched forward matches per-sample forward") {
    std::mt19937_64 rng(11);
    Mlp net = Mlp::glorot(small_spec(3, {6, 5}, 2), rng);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd x(3, 7);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);
    const Eigen::MatrixXd y = net.forward_batch(x);
    for (int c = 0; c < 7; ++c) {
        const Eigen::VectorXd yc = net.forward(x.col(c));
        CHECK((yc - y.col(c)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("parameter gradient matches finite differences") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 100; ++trial) {
        const int in = 1 + static_cast<int>(rng() % 3);
        const int out = 1 + static_cast<int>(rng() % 2);
        std::vector<int> hidden = {2 + static_cast<int>(rng() % 7)};
        if (rng() % 2) hidden.push_back(2 + static_cast<int>(rng() % 7));
        MlpSpec spec = small_spec(in, hidden, out);
        if (trial % 2 == 1) spec.hidden_activation = Activation::Sigmoid;
        Mlp net = Mlp::glorot(spec, rng);

        const int batch = 1 + static_cast<int>(rng() % 4);
        Eigen::MatrixXd x(in, batch), upstream(out, batch);
        for (int i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);
        for (int i = 0; i < upstream.size(); ++i) upstream.data()[i] = gauss(rng);

        MlpCache cache;
        net.forward_batch(x, &cache);
        const MlpGrad grad = net.backward_batch(cache, upstream);

        auto scalar_loss = [&]() { return (upstream.array() * net.forward_batch(x).array()).sum(); };
        const double h = 1e-6;
        for (std::size_t k = 0; k < net.flat_size(); k += 1 + rng() % 5) {
            const double saved = net.get_flat(k);
            net.set_flat(k, saved + h);
            const double up = scalar_loss();
            net.set_flat(k, saved - h);
            const double down = scalar_loss();
            net.set_flat(k, saved);
            const double fd = (up - down) / (2 * h);
            CHECK(std::abs(net.grad_flat(grad, k) - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("relu gradient away from the kink") {
    // FD is unreliable at the kink, so pin the pre-activations away from zero.
    MlpSpec spec = small_spec(1, {2}, 1);
    spec.hidden_activation = Activation::Relu;
    Mlp rnet(spec);
    rnet.weight(0) << 1.0, -1.0;
    rnet.bias(0) << 0.5, 0.5;  // at x=1: pre-act 1.5 (active), -0.5 (dead)
    rnet.weight(1) << 1.0, 1.0;
    rnet.bias(1) << 0.0;

    Eigen::MatrixXd x(1, 1), upstream(1, 1);
    x << 1.0;
    upstream << 1.0;
    MlpCache cache;
    CHECK(rnet.forward_batch(x, &cache)(0, 0) == doctest::Approx(1.5));
    Eigen::MatrixXd input_grad;
    const MlpGrad g = rnet.backward_batch(cache, upstream, &input_grad);
    CHECK(g.dw[0](0, 0) == doctest::Approx(1.0));   // active unit: d/dw = x
    CHECK(g.dw[0](1, 0) == doctest::Approx(0.0));   // dead unit: no gradient
    CHECK(input_grad(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("input gradient matches finite differences") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    Mlp net = Mlp::glorot(small_spec(3, {5, 5}, 1), rng);
    Eigen::MatrixXd x(3, 4), upstream(1, 4);
    for (int i = 0; i < x.size(); ++i) x.data()[i] = gauss(rng);
    for (int i = 0; i < upstream.size(); ++i) upstream.data()[i] = gauss(rng);

    MlpCache cache;
    net.forward_batch(x, &cache);
    Eigen::MatrixXd input_grad;
    net.backward_batch(cache, upstream, &input_grad);

    const double h = 1e-6;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 4; ++c) {
            Eigen::MatrixXd xp = x, xm = x;
            xp(r, c) += h;
            xm(r, c) -= h;
            const double up = (upstream.array() * net.forward_batch(xp).array()).sum();
            const double down = (upstream.array() * net.forward_batch(xm).array()).sum();
            CHECK(std::abs(input_grad(r, c) - (up - down) / (2 * h)) < 1e-6);
        }
    }
}

TEST_CASE("adam with zero gradient leaves parameters unchanged") {
    std::mt19937_64 rng(3);
    Mlp net = Mlp::glorot(small_spec(2, {4}, 1), rng);
    const Mlp before = net;
    AdamState state = AdamState::init(net, {});
    adam_step(net, net.zero_grad(), state);
    for (std::size_t k = 0; k < net.flat_size(); ++k)
        CHECK(net.get_flat(k) == before.get_flat(k));
}

TEST_CASE("first adam step moves each parameter by about lr against the gradient sign") {
    std::mt19937_64 rng(5);
    Mlp net = Mlp::glorot(small_spec(1, {3}, 1), rng);
    MlpGrad g = net.zero_grad();
    g.dw[0](0, 0) = 2.5;
    g.db[1](0) = -0.3;

    AdamConfig cfg;
    cfg.learning_rate = 1e-2;
    AdamState state = AdamState::init(net, cfg);
    const double w_before = net.weight(0)(0, 0);
    const double b_before = net.bias(1)(0);
    adam_step(net, g, state);
    // With bias correction the first step has magnitude lr/(1 + eps/|g|).
    CHECK(net.weight(0)(0, 0) == doctest::Approx(w_before - 1e-2).epsilon(1e-6));
    CHECK(net.bias(1)(0) == doctest::Approx(b_before + 1e-2).epsilon(1e-6));
}

TEST_CASE("adam minimizes a quadratic in the parameters") {
    Mlp net((small_spec(1, {1}, 1)));
    // loss = 0.5*(w - 3)^2 on the single output weight.
    AdamConfig cfg;
    cfg.learning_rate = 5e-2;
    AdamState state = AdamState::init(net, cfg);
    for (int k = 0; k < 2000; ++k) {
        MlpGrad g = net.zero_grad();
        g.dw[1](0, 0) = net.weight(1)(0, 0) - 3.0;
        adam_step(net, g, state);
    }
    CHECK(net.weight(1)(0, 0) == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("adam rejects non-finite gradients naming the layer") {
    std::mt19937_64 rng(9);
    Mlp net = Mlp::glorot(small_spec(1, {2}, 1), rng);
    MlpGrad g = net.zero_grad();
    g.dw[1](0, 0) = std::numeric_limits<double>::quiet_NaN();
    AdamState state = AdamState::init(net, {});
    CHECK_THROWS_WITH_AS(adam_step(net, g, state),
                         doctest::Contains("layer 1"), NumericError);
}

TEST_CASE("checkpoint round trip is bit exact") {
    std::mt19937_64 rng(13);
    std::vector<Mlp> nets;
    nets.push_back(Mlp::glorot(small_spec(2, {8, 8}, 1), rng));
    MlpSpec zs = small_spec(3, {4}, 1);
    zs.hidden_activation = Activation::Sigmoid;
    nets.push_back(Mlp::glorot(zs, rng));

    std::stringstream buf;
    save_networks(buf, nets);
    const std::vector<Mlp> loaded = load_networks(buf);

    REQUIRE(loaded.size() == nets.size());
    for (std::size_t k = 0; k < nets.size(); ++k) {
        CHECK(loaded[k].spec() == nets[k].spec());
        REQUIRE(loaded[k].flat_size() == nets[k].flat_size());
        for (std::size_t i = 0; i < nets[k].flat_size(); ++i)
            CHECK(loaded[k].get_flat(i) == nets[k].get_flat(i));
    }
}

TEST_CASE("checkpoint rejects corrupt headers") {
    std::stringstream buf("not a checkpoint");
    CHECK_THROWS_AS(load_networks(buf), IoError);
}

TEST_CASE("glorot init is deterministic in the seed") {
    std::mt19937_64 a(21), b(21), c(22);
    const MlpSpec spec = small_spec(2, {6}, 1);
    Mlp na = Mlp::glorot(spec, a), nb = Mlp::glorot(spec, b), nc = Mlp::glorot(spec, c);
    bool same_ab = true, same_ac = true;
    for (std::size_t k = 0; k < na.flat_size(); ++k) {
        same_ab = same_ab && na.get_flat(k) == nb.get_flat(k);
        same_ac = same_ac && na.get_flat(k) == nc.get_flat(k);
    }
    CHECK(same_ab);
    CHECK(!same_ac);
}
