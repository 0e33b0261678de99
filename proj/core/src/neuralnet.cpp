#include "liftnet/neuralnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "liftnet/rng.hpp"

namespace liftnet {

namespace {

using std::size_t;

// Unrolled dot product: four independent accumulators so the compiler can
// vectorize without reassociation flags.
double dot(const double* a, const double* b, size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

void axpy(double alpha, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// Y[n x out] = X[n x in] * W^T + b, W row-major out x in.
void affine_forward(const double* X, size_t n, size_t in, const double* W,
                    const double* b, size_t out, double* Y) {
    for (size_t i = 0; i < n; ++i) {
        const double* x = X + i * in;
        double* y = Y + i * out;
        for (size_t o = 0; o < out; ++o) y[o] = b[o] + dot(x, W + o * in, in);
    }
}

void relu_inplace(double* v, size_t n) {
    for (size_t i = 0; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
}

// Scratch activations for one forward/backward pass.
struct Workspace {
    std::vector<std::vector<double>> A;     // A[0] = standardized input, then per layer
    std::vector<std::vector<double>> delta; // per layer
};

void standardize_input(const NetworkParams& net, const double* X, size_t n,
                       std::vector<double>& out) {
    const size_t in = static_cast<size_t>(net.input_width());
    out.assign(X, X + n * in);
    if (net.feature_mean.empty()) return;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < in; ++j) {
            const double sd = net.feature_std[j];
            out[i * in + j] = (out[i * in + j] - net.feature_mean[j]) /
                              (sd > 0.0 ? sd : 1.0);
        }
}

void check_batch(const NetworkParams& net, const Batch& batch) {
    if (batch.n == 0) throw domain_error("empty batch");
    if (batch.in != static_cast<size_t>(net.input_width()) ||
        batch.out != static_cast<size_t>(net.output_width()))
        throw shape_error("batch width (" + std::to_string(batch.in) + " -> " +
                          std::to_string(batch.out) + ") does not match network (" +
                          std::to_string(net.input_width()) + " -> " +
                          std::to_string(net.output_width()) + ")");
    if (batch.X.size() != batch.n * batch.in || batch.Y.size() != batch.n * batch.out)
        throw shape_error("batch buffer sizes inconsistent with n");
}

// Runs all layers; ws.A[L] holds the network output before target de-scaling.
void run_forward(const NetworkParams& net, const double* X, size_t n, Workspace& ws) {
    const size_t L = net.weights.size();
    ws.A.resize(L + 1);
    standardize_input(net, X, n, ws.A[0]);
    for (size_t l = 0; l < L; ++l) {
        const size_t in = static_cast<size_t>(net.layer_sizes[l]);
        const size_t out = static_cast<size_t>(net.layer_sizes[l + 1]);
        ws.A[l + 1].resize(n * out);
        affine_forward(ws.A[l].data(), n, in, net.weights[l].data(),
                       net.biases[l].data(), out, ws.A[l + 1].data());
        if (net.activations[l] == Activation::relu)
            relu_inplace(ws.A[l + 1].data(), n * out);
    }
}

// De-scales a raw network output row into target units.
void descale_output(const NetworkParams& net, const double* z, double* y, size_t out) {
    if (net.target_mean.empty()) {
        std::copy(z, z + out, y);
        return;
    }
    for (size_t k = 0; k < out; ++k) y[k] = z[k] * net.target_std[k] + net.target_mean[k];
}

double output_loss(const NetworkParams& net, const Batch& batch, const Workspace& ws) {
    const size_t out = batch.out;
    const std::vector<double>& Z = ws.A.back();
    double acc = 0.0;
    std::vector<double> y(out);
    for (size_t i = 0; i < batch.n; ++i) {
        descale_output(net, Z.data() + i * out, y.data(), out);
        for (size_t k = 0; k < out; ++k) {
            const double e = y[k] - batch.Y[i * out + k];
            acc += e * e;
        }
    }
    return acc / static_cast<double>(batch.n);
}

} // namespace

std::size_t NetworkParams::parameter_count() const {
    size_t c = 0;
    for (size_t l = 0; l < weights.size(); ++l)
        c += weights[l].size() + biases[l].size();
    return c;
}

void NetworkParams::validate() const {
    if (layer_sizes.size() < 2) throw shape_error("need at least input and output layers");
    for (int w : layer_sizes)
        if (w <= 0) throw shape_error("layer widths must be positive");
    const size_t L = layer_sizes.size() - 1;
    if (weights.size() != L || biases.size() != L || activations.size() != L)
        throw shape_error("parameter block count does not match layer count");
    for (size_t l = 0; l < L; ++l) {
        const size_t in = static_cast<size_t>(layer_sizes[l]);
        const size_t out = static_cast<size_t>(layer_sizes[l + 1]);
        if (weights[l].size() != in * out)
            throw shape_error("weight matrix " + std::to_string(l) + " has wrong shape");
        if (biases[l].size() != out)
            throw shape_error("bias vector " + std::to_string(l) + " has wrong shape");
        for (double v : weights[l])
            if (!std::isfinite(v)) throw shape_error("non-finite weight");
        for (double v : biases[l])
            if (!std::isfinite(v)) throw shape_error("non-finite bias");
    }
    const size_t in = static_cast<size_t>(layer_sizes.front());
    const size_t out = static_cast<size_t>(layer_sizes.back());
    if (!feature_mean.empty() && (feature_mean.size() != in || feature_std.size() != in))
        throw shape_error("feature standardization width mismatch");
    if (!target_mean.empty() && (target_mean.size() != out || target_std.size() != out))
        throw shape_error("target standardization width mismatch");
}

void Batch::reserve_rows(std::size_t rows) {
    X.reserve(rows * in);
    Y.reserve(rows * out);
}

void Batch::push_row(const double* x, const double* y) {
    X.insert(X.end(), x, x + in);
    Y.insert(Y.end(), y, y + out);
    ++n;
}

void TrainConfig::validate() const {
    if (max_epochs < 1) throw config_error("max_epochs must be >= 1");
    if (patience < 1) throw config_error("patience must be >= 1");
    if (batch_size < 1) throw config_error("batch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw config_error("learning_rate must be positive");
    if (!(momentum >= 0.0) || !(momentum < 1.0))
        throw config_error("momentum must lie in [0, 1)");
}

NetworkParams init_network(const std::vector<int>& layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2)
        throw config_error("need at least input and output layers");
    for (int w : layer_sizes)
        if (w <= 0) throw config_error("layer widths must be positive");

    std::mt19937_64 rng(seed);
    NetworkParams net;
    net.layer_sizes = layer_sizes;
    const size_t L = layer_sizes.size() - 1;
    net.weights.resize(L);
    net.biases.resize(L);
    net.activations.assign(L, Activation::relu);
    net.activations[L - 1] = Activation::linear;
    for (size_t l = 0; l < L; ++l) {
        const size_t in = static_cast<size_t>(layer_sizes[l]);
        const size_t out = static_cast<size_t>(layer_sizes[l + 1]);
        const double sd = std::sqrt(2.0 / static_cast<double>(in));
        net.weights[l].resize(in * out);
        for (double& w : net.weights[l]) w = sd * standard_normal(rng);
        net.biases[l].assign(out, 0.0);
    }
    return net;
}

std::vector<double> forward(const NetworkParams& net, const std::vector<double>& x) {
    if (x.size() != static_cast<size_t>(net.input_width()))
        throw shape_error("input width " + std::to_string(x.size()) +
                          " does not match network input " +
                          std::to_string(net.input_width()));
    Workspace ws;
    run_forward(net, x.data(), 1, ws);
    const size_t out = static_cast<size_t>(net.output_width());
    std::vector<double> y(out);
    descale_output(net, ws.A.back().data(), y.data(), out);
    return y;
}

LiftCoefficient forward(const NetworkParams& net, const FeatureVector& f) {
    if (net.input_width() != FeatureVector::width || net.output_width() != 2)
        throw shape_error("lift model must map 6 features to 2 outputs");
    const auto arr = f.as_array();
    Workspace ws;
    run_forward(net, arr.data(), 1, ws);
    const double* z = ws.A.back().data();
    double y[2];
    descale_output(net, z, y, 2);
    return {y[0], y[1]};
}

double loss_mse(const NetworkParams& net, const Batch& batch) {
    check_batch(net, batch);
    Workspace ws;
    run_forward(net, batch.X.data(), batch.n, ws);
    return output_loss(net, batch, ws);
}

Gradients backward(const NetworkParams& net, const Batch& batch, double* loss_out) {
    check_batch(net, batch);
    const size_t L = net.weights.size();
    const size_t n = batch.n;

    Workspace ws;
    run_forward(net, batch.X.data(), n, ws);
    if (loss_out) *loss_out = output_loss(net, batch, ws);

    Gradients g;
    g.dW.resize(L);
    g.db.resize(L);
    for (size_t l = 0; l < L; ++l) {
        g.dW[l].assign(net.weights[l].size(), 0.0);
        g.db[l].assign(net.biases[l].size(), 0.0);
    }

    // Output delta: d(loss)/d(raw output) = (2/n) (y_hat - y), chained through
    // the optional target de-scaling.
    const size_t out_w = batch.out;
    std::vector<double> delta(n * out_w);
    const double inv_n = 2.0 / static_cast<double>(n);
    std::vector<double> y(out_w);
    for (size_t i = 0; i < n; ++i) {
        descale_output(net, ws.A[L].data() + i * out_w, y.data(), out_w);
        for (size_t k = 0; k < out_w; ++k) {
            double dk = inv_n * (y[k] - batch.Y[i * out_w + k]);
            if (!net.target_std.empty()) dk *= net.target_std[k];
            delta[i * out_w + k] = dk;
        }
    }

    for (size_t l = L; l-- > 0;) {
        const size_t in = static_cast<size_t>(net.layer_sizes[l]);
        const size_t out = static_cast<size_t>(net.layer_sizes[l + 1]);
        const std::vector<double>& A_prev = ws.A[l];

        // dW = delta^T * A_prev, db = column sums of delta.
        for (size_t i = 0; i < n; ++i) {
            const double* d_row = delta.data() + i * out;
            const double* a_row = A_prev.data() + i * in;
            for (size_t o = 0; o < out; ++o) {
                const double d = d_row[o];
                if (d != 0.0) axpy(d, a_row, g.dW[l].data() + o * in, in);
                g.db[l][o] += d;
            }
        }

        if (l == 0) break;

        // delta_prev = delta * W, masked by the ReLU derivative of A_prev.
        std::vector<double> delta_prev(n * in, 0.0);
        const double* W = net.weights[l].data();
        for (size_t i = 0; i < n; ++i) {
            const double* d_row = delta.data() + i * out;
            double* p_row = delta_prev.data() + i * in;
            for (size_t o = 0; o < out; ++o) {
                const double d = d_row[o];
                if (d != 0.0) axpy(d, W + o * in, p_row, in);
            }
            if (net.activations[l - 1] == Activation::relu) {
                const double* a_row = A_prev.data() + i * in;
                for (size_t j = 0; j < in; ++j)
                    if (a_row[j] <= 0.0) p_row[j] = 0.0;
            }
        }
        delta = std::move(delta_prev);
    }
    return g;
}

namespace {

struct FlatParams {
    std::vector<double> data;
};

void flatten(const NetworkParams& net, FlatParams& f) {
    f.data.clear();
    for (size_t l = 0; l < net.weights.size(); ++l) {
        f.data.insert(f.data.end(), net.weights[l].begin(), net.weights[l].end());
        f.data.insert(f.data.end(), net.biases[l].begin(), net.biases[l].end());
    }
}

void unflatten(const FlatParams& f, NetworkParams& net) {
    size_t pos = 0;
    for (size_t l = 0; l < net.weights.size(); ++l) {
        std::copy_n(f.data.begin() + static_cast<std::ptrdiff_t>(pos),
                    net.weights[l].size(), net.weights[l].begin());
        pos += net.weights[l].size();
        std::copy_n(f.data.begin() + static_cast<std::ptrdiff_t>(pos),
                    net.biases[l].size(), net.biases[l].begin());
        pos += net.biases[l].size();
    }
}

void flatten_grads(const Gradients& g, FlatParams& f) {
    f.data.clear();
    for (size_t l = 0; l < g.dW.size(); ++l) {
        f.data.insert(f.data.end(), g.dW[l].begin(), g.dW[l].end());
        f.data.insert(f.data.end(), g.db[l].begin(), g.db[l].end());
    }
}

void column_stats(const std::vector<double>& X, size_t n, size_t w,
                  std::vector<double>& mean, std::vector<double>& sd) {
    mean.assign(w, 0.0);
    sd.assign(w, 0.0);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < w; ++j) mean[j] += X[i * w + j];
    for (size_t j = 0; j < w; ++j) mean[j] /= static_cast<double>(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < w; ++j) {
            const double dv = X[i * w + j] - mean[j];
            sd[j] += dv * dv;
        }
    for (size_t j = 0; j < w; ++j)
        sd[j] = std::sqrt(sd[j] / static_cast<double>(n));
}

} // namespace

std::pair<NetworkParams, TrainHistory> train(const NetworkParams& net,
                                             const Batch& train_set,
                                             const Batch& val_set,
                                             const TrainConfig& cfg) {
    cfg.validate();
    net.validate();
    check_batch(net, train_set);
    check_batch(net, val_set);

    NetworkParams p = net;
    if (cfg.standardize_inputs)
        column_stats(train_set.X, train_set.n, train_set.in, p.feature_mean,
                     p.feature_std);
    if (cfg.standardize_targets)
        column_stats(train_set.Y, train_set.n, train_set.out, p.target_mean,
                     p.target_std);

    FlatParams theta, vel, grad, lookahead;
    flatten(p, theta);
    vel.data.assign(theta.data.size(), 0.0);

    std::mt19937_64 rng(cfg.seed);
    std::vector<size_t> order(train_set.n);
    std::iota(order.begin(), order.end(), size_t{0});

    const size_t bs = static_cast<size_t>(cfg.batch_size);
    Batch mini;
    mini.in = train_set.in;
    mini.out = train_set.out;
    mini.reserve_rows(std::min(bs, train_set.n));

    NetworkParams scratch = p; // receives lookahead / updated parameters
    NetworkParams best = p;
    TrainHistory hist;
    double best_val = std::numeric_limits<double>::infinity();
    int bad_epochs = 0;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        pinned_shuffle(order, rng);

        double loss_acc = 0.0;
        for (size_t start = 0; start < train_set.n; start += bs) {
            const size_t stop = std::min(start + bs, train_set.n);
            mini.n = 0;
            mini.X.clear();
            mini.Y.clear();
            for (size_t i = start; i < stop; ++i)
                mini.push_row(train_set.X.data() + order[i] * train_set.in,
                              train_set.Y.data() + order[i] * train_set.out);

            // Nesterov: gradient at the momentum lookahead point.
            lookahead.data = theta.data;
            if (cfg.momentum != 0.0)
                axpy(cfg.momentum, vel.data.data(), lookahead.data.data(),
                     lookahead.data.size());
            unflatten(lookahead, scratch);

            double mini_loss = 0.0;
            Gradients g = backward(scratch, mini, &mini_loss);
            loss_acc += mini_loss * static_cast<double>(mini.n);
            flatten_grads(g, grad);

            for (size_t k = 0; k < theta.data.size(); ++k) {
                vel.data[k] = cfg.momentum * vel.data[k] -
                              cfg.learning_rate * grad.data[k];
                theta.data[k] += vel.data[k];
            }
        }

        const double train_loss = loss_acc / static_cast<double>(train_set.n);
        unflatten(theta, scratch);
        const double val_loss = loss_mse(scratch, val_set);
        hist.train_loss.push_back(train_loss);
        hist.val_loss.push_back(val_loss);
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw training_diverged_error("training diverged: non-finite loss at epoch " +
                                              std::to_string(epoch),
                                          epoch);

        if (val_loss < best_val) {
            best_val = val_loss;
            best = scratch;
            hist.best_epoch = epoch;
            bad_epochs = 0;
        } else {
            ++bad_epochs;
            if (bad_epochs >= cfg.patience) {
                hist.stop_reason = "early_stopping";
                break;
            }
        }
    }
    if (hist.stop_reason.empty()) hist.stop_reason = "max_epochs";
    hist.best_val_loss = best_val;
    return {std::move(best), std::move(hist)};
}

} // namespace liftnet
