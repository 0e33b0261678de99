#include <doctest.h>

#include <liftnet/errors.hpp>
#include <liftnet/neuralnet.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace liftnet;

namespace {

Batch random_batch(int n, int in, int out, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Batch b;
    b.in = static_cast<std::size_t>(in);
    b.out = static_cast<std::size_t>(out);
    b.reserve_rows(static_cast<std::size_t>(n));
    std::vector<double> x(static_cast<std::size_t>(in)), y(static_cast<std::size_t>(out));
    for (int i = 0; i < n; ++i) {
        for (double& v : x) v = scale * u(gen);
        for (double& v : y) v = scale * u(gen);
        b.push_row(x.data(), y.data());
    }
    return b;
}

// y = A x + c, a target exactly representable by the linear output path
Batch linear_task(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Batch b;
    b.in = 6;
    b.out = 2;
    b.reserve_rows(static_cast<std::size_t>(n));
    const double A[2][6] = {{0.3, -0.2, 0.5, 0.1, -0.4, 0.25},
                            {-0.15, 0.35, 0.05, -0.3, 0.2, 0.1}};
    const double c[2] = {0.05, -0.1};
    for (int i = 0; i < n; ++i) {
        double x[6], y[2];
        for (double& v : x) v = u(gen);
        for (int k = 0; k < 2; ++k) {
            y[k] = c[k];
            for (int j = 0; j < 6; ++j) y[k] += A[k][j] * x[j];
        }
        b.push_row(x, y);
    }
    return b;
}

std::vector<double> flatten(const NetworkParams& p) {
    std::vector<double> f;
    for (size_t l = 0; l < p.weights.size(); ++l) {
        f.insert(f.end(), p.weights[l].begin(), p.weights[l].end());
        f.insert(f.end(), p.biases[l].begin(), p.biases[l].end());
    }
    return f;
}

} // namespace

TEST_CASE("init_network: shapes, zero biases, seed determinism") {
    NetworkParams p = init_network({6, 256, 128, 64, 2}, 9);
    p.validate();
    CHECK(p.input_width() == 6);
    CHECK(p.output_width() == 2);
    CHECK(p.weights.size() == 4);
    CHECK(p.weights[0].size() == 256u * 6u);
    CHECK(p.weights[3].size() == 2u * 64u);
    CHECK(p.activations[0] == Activation::relu);
    CHECK(p.activations[3] == Activation::linear);
    CHECK(p.parameter_count() == 6u * 256 + 256 + 256u * 128 + 128 + 128u * 64 + 64 + 64u * 2 + 2);
    for (const auto& b : p.biases)
        for (double v : b) CHECK(v == 0.0);

    NetworkParams q = init_network({6, 256, 128, 64, 2}, 9);
    CHECK(flatten(p) == flatten(q));
    NetworkParams r = init_network({6, 256, 128, 64, 2}, 10);
    CHECK(flatten(p) != flatten(r));

    // He scale: sample std of the first layer is near sqrt(2/6)
    double ss = 0.0;
    for (double v : p.weights[0]) ss += v * v;
    const double sd = std::sqrt(ss / static_cast<double>(p.weights[0].size()));
    CHECK(sd == doctest::Approx(std::sqrt(2.0 / 6.0)).epsilon(0.08));

    CHECK_THROWS_AS((void)init_network({6}, 0), config_error);
    CHECK_THROWS_AS((void)init_network({6, 0, 2}, 0), config_error);
}

TEST_CASE("forward: zero weights give zero output; width checked") {
    NetworkParams p = init_network({6, 8, 2}, 1);
    for (auto& w : p.weights) std::fill(w.begin(), w.end(), 0.0);
    FeatureVector f;
    f.Re_p = 5.0;
    f.wbar_x = -0.3;
    LiftCoefficient c = forward(p, f);
    CHECK(c.C_Lx == 0.0);
    CHECK(c.C_Ly == 0.0);
    CHECK_THROWS_AS((void)forward(p, std::vector<double>{1.0, 2.0}), shape_error);
}

TEST_CASE("forward: single linear layer selects inputs") {
    NetworkParams p = init_network({6, 2}, 1);
    std::fill(p.weights[0].begin(), p.weights[0].end(), 0.0);
    p.weights[0][0 * 6 + 2] = 1.0; // out0 <- x2
    p.weights[0][1 * 6 + 5] = 1.0; // out1 <- x5
    p.biases[0] = {0.0, 0.0};
    std::vector<double> out = forward(p, std::vector<double>{10, 20, 30, 40, 50, 60});
    CHECK(out[0] == 30.0);
    CHECK(out[1] == 60.0);
}

TEST_CASE("forward: deterministic across repeated calls") {
    NetworkParams p = init_network({6, 32, 16, 2}, 123);
    std::vector<double> x = {0.1, -0.2, 0.3, -0.4, 0.5, -0.6};
    std::vector<double> a = forward(p, x);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> b = forward(p, x);
        CHECK(a[0] == b[0]);
        CHECK(a[1] == b[1]);
    }
}

TEST_CASE("loss_mse: hand-computed value and batch algebra") {
    NetworkParams p = init_network({6, 2}, 1);
    for (auto& w : p.weights) std::fill(w.begin(), w.end(), 0.0);

    Batch b;
    b.in = 6;
    b.out = 2;
    const double x[6] = {1, 2, 3, 4, 5, 6};
    const double y[2] = {3e-3, 4e-3}; // prediction is (0,0)
    b.push_row(x, y);
    CHECK(loss_mse(p, b) == doctest::Approx(2.5e-5).epsilon(1e-14));

    Batch empty;
    empty.in = 6;
    empty.out = 2;
    CHECK_THROWS_AS((void)loss_mse(p, empty), domain_error);

    // loss of a concatenation = size-weighted mean of part losses
    NetworkParams q = init_network({4, 8, 2}, 3);
    Batch b1 = random_batch(13, 4, 2, 100);
    Batch b2 = random_batch(29, 4, 2, 101);
    Batch cat = b1;
    for (std::size_t i = 0; i < b2.n; ++i)
        cat.push_row(&b2.X[i * b2.in], &b2.Y[i * b2.out]);
    const double want =
        (13.0 * loss_mse(q, b1) + 29.0 * loss_mse(q, b2)) / 42.0;
    CHECK(loss_mse(q, cat) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("backward: finite-difference oracle on a 6x8x2 net, 16 samples") {
    NetworkParams p = init_network({6, 8, 2}, 21);
    // exercise the standardization path exactly as training does
    p.feature_mean.assign(6, 0.1);
    p.feature_std.assign(6, 0.8);
    Batch b = random_batch(16, 6, 2, 22);

    Gradients g = backward(p, b);
    std::vector<std::vector<double>*> params;
    std::vector<std::vector<double>*> grads;
    for (size_t l = 0; l < p.weights.size(); ++l) {
        params.push_back(&p.weights[l]);
        grads.push_back(&g.dW[l]);
        params.push_back(&p.biases[l]);
        grads.push_back(&g.db[l]);
    }
    const double eps = 1e-6;
    for (size_t k = 0; k < params.size(); ++k) {
        for (size_t i = 0; i < params[k]->size(); ++i) {
            const double keep = (*params[k])[i];
            (*params[k])[i] = keep + eps;
            const double up = loss_mse(p, b);
            (*params[k])[i] = keep - eps;
            const double dn = loss_mse(p, b);
            (*params[k])[i] = keep;
            const double fd = (up - dn) / (2 * eps);
            const double an = (*grads[k])[i];
            const double denom = std::max({std::abs(fd), std::abs(an), 1e-8});
            CHECK(std::abs(fd - an) / denom < 1e-5);
        }
    }
}

TEST_CASE("backward: batch gradient is the mean of per-sample gradients") {
    NetworkParams p = init_network({5, 7, 2}, 31);
    Batch b = random_batch(6, 5, 2, 32);
    Gradients whole = backward(p, b);

    std::vector<std::vector<double>> acc_w(p.weights.size());
    std::vector<std::vector<double>> acc_b(p.biases.size());
    for (size_t l = 0; l < p.weights.size(); ++l) {
        acc_w[l].assign(p.weights[l].size(), 0.0);
        acc_b[l].assign(p.biases[l].size(), 0.0);
    }
    for (std::size_t i = 0; i < b.n; ++i) {
        Batch one;
        one.in = b.in;
        one.out = b.out;
        one.push_row(&b.X[i * b.in], &b.Y[i * b.out]);
        Gradients g = backward(p, one);
        for (size_t l = 0; l < g.dW.size(); ++l) {
            for (size_t j = 0; j < g.dW[l].size(); ++j) acc_w[l][j] += g.dW[l][j];
            for (size_t j = 0; j < g.db[l].size(); ++j) acc_b[l][j] += g.db[l][j];
        }
    }
    for (size_t l = 0; l < whole.dW.size(); ++l) {
        for (size_t j = 0; j < whole.dW[l].size(); ++j)
            CHECK(whole.dW[l][j] == doctest::Approx(acc_w[l][j] / 6.0).epsilon(1e-12));
        for (size_t j = 0; j < whole.db[l].size(); ++j)
            CHECK(whole.db[l][j] == doctest::Approx(acc_b[l][j] / 6.0).epsilon(1e-12));
    }
}

TEST_CASE("backward: zero loss implies zero gradients") {
    NetworkParams p = init_network({3, 2}, 41);
    Batch b;
    b.in = 3;
    b.out = 2;
    const double x[3] = {0.5, -1.0, 2.0};
    double y[2];
    std::vector<double> pred = forward(p, std::vector<double>{x[0], x[1], x[2]});
    y[0] = pred[0];
    y[1] = pred[1];
    b.push_row(x, y);
    double loss = 0.0;
    Gradients g = backward(p, b, &loss);
    CHECK(loss == 0.0);
    for (const auto& gw : g.dW)
        for (double v : gw) CHECK(v == 0.0);
    for (const auto& gb : g.db)
        for (double v : gb) CHECK(v == 0.0);
}

TEST_CASE("relu nets are positively homogeneous when bias-free") {
    NetworkParams p = init_network({4, 16, 8, 2}, 51);
    std::vector<double> x = {0.4, -0.7, 1.1, 0.2};
    std::vector<double> xs = x;
    const double lam = 3.0;
    for (double& v : xs) v *= lam;
    std::vector<double> y = forward(p, x);
    std::vector<double> ys = forward(p, xs);
    CHECK(ys[0] == doctest::Approx(lam * y[0]).epsilon(1e-12));
    CHECK(ys[1] == doctest::Approx(lam * y[1]).epsilon(1e-12));
}

TEST_CASE("train: solves a linear task to below 1e-6 validation MSE") {
    // single affine layer: the target is exactly representable, so gradient
    // descent must drive the loss to (near) zero
    Batch data = linear_task(256, 61);
    NetworkParams net = init_network({6, 2}, 62);
    TrainConfig cfg;
    cfg.max_epochs = 2000;
    cfg.patience = 2000; // run to the epoch budget; the task is noiseless
    cfg.batch_size = 256;
    cfg.learning_rate = 5e-2;
    cfg.momentum = 0.9;
    cfg.seed = 63;
    auto [fit, hist] = train(net, data, data, cfg);
    REQUIRE(!hist.val_loss.empty());
    CHECK(hist.best_val_loss < 1e-6);
    CHECK(hist.stop_reason == "max_epochs");
    // returned parameters really are the best-epoch parameters
    CHECK(loss_mse(fit, data) == doctest::Approx(hist.best_val_loss).epsilon(1e-10));
}

TEST_CASE("train: early stopping fires within patience epochs of the best") {
    Batch tr = random_batch(64, 6, 2, 71, 0.5);
    Batch val = random_batch(32, 6, 2, 72, 0.5); // unrelated noise: no generalization
    NetworkParams net = init_network({6, 8, 2}, 73);
    TrainConfig cfg;
    cfg.max_epochs = 300;
    cfg.patience = 10;
    cfg.batch_size = 16;
    cfg.learning_rate = 1e-2;
    cfg.seed = 74;
    auto [fit, hist] = train(net, tr, val, cfg);
    if (hist.stop_reason == "early_stopping") {
        const int stop_epoch = static_cast<int>(hist.val_loss.size()) - 1;
        CHECK(stop_epoch - hist.best_epoch <= cfg.patience);
    }
    CHECK(hist.best_epoch >= 0);
    CHECK(hist.best_val_loss ==
          doctest::Approx(*std::min_element(hist.val_loss.begin(), hist.val_loss.end()))
              .epsilon(1e-15));
}

TEST_CASE("train: deterministic for a fixed seed") {
    Batch data = linear_task(128, 81);
    NetworkParams net = init_network({6, 8, 2}, 82);
    TrainConfig cfg;
    cfg.max_epochs = 20;
    cfg.patience = 20;
    cfg.batch_size = 32;
    cfg.seed = 83;
    auto [fit1, hist1] = train(net, data, data, cfg);
    auto [fit2, hist2] = train(net, data, data, cfg);
    CHECK(hist1.val_loss == hist2.val_loss);
    CHECK(hist1.train_loss == hist2.train_loss);
    CHECK(flatten(fit1) == flatten(fit2));
}

TEST_CASE("train: full-batch momentum-free descent ignores sample order") {
    Batch data = linear_task(32, 91);
    Batch shuffled;
    shuffled.in = data.in;
    shuffled.out = data.out;
    std::vector<std::size_t> order(data.n);
    for (std::size_t i = 0; i < data.n; ++i) order[i] = data.n - 1 - i;
    for (std::size_t i : order) shuffled.push_row(&data.X[i * data.in], &data.Y[i * data.out]);

    NetworkParams net = init_network({6, 8, 2}, 92);
    TrainConfig cfg;
    cfg.max_epochs = 30;
    cfg.patience = 30;
    cfg.batch_size = 64; // >= n: one full batch per epoch
    cfg.momentum = 0.0;
    cfg.standardize_inputs = false;
    cfg.seed = 93;
    auto [fit1, hist1] = train(net, data, data, cfg);
    auto [fit2, hist2] = train(net, shuffled, shuffled, cfg);
    std::vector<double> f1 = flatten(fit1), f2 = flatten(fit2);
    REQUIRE(f1.size() == f2.size());
    for (size_t i = 0; i < f1.size(); ++i)
        CHECK(f1[i] == doctest::Approx(f2[i]).epsilon(1e-10));
}

TEST_CASE("train: configuration validation and divergence reporting") {
    Batch data = linear_task(16, 95);
    NetworkParams net = init_network({6, 8, 2}, 96);
    TrainConfig cfg;
    cfg.max_epochs = 0;
    CHECK_THROWS_AS((void)train(net, data, data, cfg), config_error);

    cfg = TrainConfig{};
    cfg.learning_rate = 1e9; // guaranteed blow-up
    cfg.max_epochs = 50;
    bool threw = false;
    try {
        (void)train(net, data, data, cfg);
    } catch (const training_diverged_error& e) {
        threw = true;
        CHECK(e.epoch() >= 0);
        CHECK(std::string(e.what()).find("diverge") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("model io: roundtrip is bit-identical, format is self-describing") {
    NetworkParams p = init_network({6, 32, 16, 2}, 97);
    p.feature_mean = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    p.feature_std = {1, 2, 3, 4, 5, 6};
    p.provenance = "unit-test fixture";
    const std::string path = "model_probe.ln1";
    save_model(p, path);
    NetworkParams q = load_model(path);
    CHECK(q.layer_sizes == p.layer_sizes);
    CHECK(flatten(q) == flatten(p)); // exact, bit level
    CHECK(q.feature_mean == p.feature_mean);
    CHECK(q.feature_std == p.feature_std);
    CHECK(q.provenance == p.provenance);
    CHECK(q.activations == p.activations);

    // an unrelated architecture loads from its own file just as well
    NetworkParams small = init_network({3, 4, 1}, 98);
    save_model(small, path);
    NetworkParams small2 = load_model(path);
    CHECK(small2.layer_sizes == std::vector<int>{3, 4, 1});
    std::vector<double> out = forward(small2, std::vector<double>{1.0, 2.0, 3.0});
    CHECK(out.size() == 1);
    std::remove(path.c_str());
}

TEST_CASE("model io: corruption and truncation are detected") {
    NetworkParams p = init_network({4, 8, 2}, 99);
    const std::string path = "model_corrupt.ln1";
    save_model(p, path);

    // flip one byte in the middle
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(200);
        char c;
        f.seekg(200);
        f.read(&c, 1);
        c = static_cast<char>(c ^ 0x5a);
        f.seekp(200);
        f.write(&c, 1);
    }
    try {
        (void)load_model(path);
        FAIL("expected checksum failure");
    } catch (const format_error& e) {
        CHECK(std::string(e.what()).find("checksum") != std::string::npos);
    }

    // truncate
    save_model(p, path);
    {
        std::ifstream in(path, std::ios::binary);
        std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out.write(blob.data(), static_cast<std::streamsize>(blob.size() - 20));
    }
    CHECK_THROWS_AS((void)load_model(path), format_error);

    // wrong magic
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "NOTAMODELxxxxxxxxxxxxxxxxxxxxxxxxxxxxxxx";
    }
    try {
        (void)load_model(path);
        FAIL("expected magic failure");
    } catch (const format_error& e) {
        CHECK(std::string(e.what()).find("LIFTNET1") != std::string::npos);
    }
    std::remove(path.c_str());
}
