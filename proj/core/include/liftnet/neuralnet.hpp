#ifndef LIFTNET_NEURALNET_HPP
#define LIFTNET_NEURALNET_HPP

/**
 * @file neuralnet.hpp
 * @brief From-scratch fully connected regression network.
 *
 * Dense layers with ReLU hidden activations and a linear output, trained by
 * minibatch gradient descent with Nesterov momentum, MSE loss, and
 * early stopping on validation loss. The default lift architecture is
 * 6 x 256 x 128 x 64 x 2.
 *
 * Inputs are z-scored with training-set statistics stored inside the model;
 * targets are used raw by default. Everything is deterministic for a fixed
 * seed.
 */

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "liftnet/errors.hpp"
#include "liftnet/features.hpp"

namespace liftnet {

enum class Activation { relu, linear };

struct NetworkParams {
    std::vector<int> layer_sizes; ///< e.g. {6, 256, 128, 64, 2}
    /// weights[l] is row-major out_l x in_l; biases[l] has out_l entries.
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::vector<Activation> activations; ///< one per non-input layer

    /// Input z-scoring constants (size = input width, or empty for none).
    std::vector<double> feature_mean;
    std::vector<double> feature_std;
    /// Optional target de-scaling constants (size = output width, or empty).
    std::vector<double> target_mean;
    std::vector<double> target_std;

    std::string provenance; ///< free-form training description

    int input_width() const { return layer_sizes.front(); }
    int output_width() const { return layer_sizes.back(); }
    std::size_t parameter_count() const;

    /// Structural consistency check; throws shape_error on any mismatch.
    void validate() const;
};

/// Flat sample matrix: inputs row-major n x in, targets row-major n x out.
struct Batch {
    std::size_t n = 0;
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> X;
    std::vector<double> Y;

    void reserve_rows(std::size_t rows);
    void push_row(const double* x, const double* y);
};

struct Gradients {
    std::vector<std::vector<double>> dW;
    std::vector<std::vector<double>> db;
};

struct TrainConfig {
    int max_epochs = 300;
    int patience = 30;
    int batch_size = 256;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    std::uint64_t seed = 0;
    bool standardize_inputs = true;
    bool standardize_targets = false;

    void validate() const; ///< throws config_error on out-of-range values
};

struct TrainHistory {
    std::vector<double> train_loss; ///< per-epoch mean minibatch loss
    std::vector<double> val_loss;   ///< per-epoch full validation loss
    int best_epoch = -1;            ///< 0-based index of the returned params
    double best_val_loss = 0.0;
    std::string stop_reason;        ///< "early_stopping" or "max_epochs"
};

/**
 * He-initialized network: weights ~ N(0, 2 / fan_in), biases zero, hidden
 * layers ReLU, output linear. Deterministic for a fixed seed.
 *
 * @throws config_error on fewer than 2 layers or non-positive widths
 */
NetworkParams init_network(const std::vector<int>& layer_sizes, std::uint64_t seed);

/// Raw multi-width forward pass (applies stored standardization).
/// @throws shape_error if x width mismatches the input layer
std::vector<double> forward(const NetworkParams& net, const std::vector<double>& x);

/// Lift-model forward pass: 6 features in, (C_Lx, C_Ly) out.
LiftCoefficient forward(const NetworkParams& net, const FeatureVector& f);

/// Mean squared error over the batch: (1/n) sum ||y - y_hat||^2.
/// @throws domain_error on an empty batch, shape_error on width mismatch
double loss_mse(const NetworkParams& net, const Batch& batch);

/// Gradients of loss_mse with respect to every weight and bias.
/// @param loss_out optional: receives the batch loss from the same pass
Gradients backward(const NetworkParams& net, const Batch& batch,
                   double* loss_out = nullptr);

/**
 * Minibatch gradient descent with Nesterov momentum and early stopping.
 *
 * Per update, with velocity v and parameters p:
 *   g = grad L(p + momentum * v);  v = momentum * v - lr * g;  p = p + v.
 *
 * Validation loss is measured after every epoch; training stops at max_epochs
 * or once the loss has not strictly improved on the incumbent best for
 * `patience` consecutive epochs. The returned parameters are from the best
 * validation epoch. Standardization constants are computed from train_set
 * before the first update and stored in the returned params.
 *
 * @throws training_diverged_error if any loss turns non-finite
 */
std::pair<NetworkParams, TrainHistory> train(const NetworkParams& net,
                                             const Batch& train_set,
                                             const Batch& val_set,
                                             const TrainConfig& cfg);

/**
 * Serializes a network to the LIFTNET1 container (see README for the byte
 * layout): magic, JSON metadata header, float64 little-endian parameter
 * blocks, trailing CRC-32.
 */
void save_model(const NetworkParams& net, const std::string& path);

/// @throws format_error on bad magic, version, checksum or structure
NetworkParams load_model(const std::string& path);

} // namespace liftnet

#endif // LIFTNET_NEURALNET_HPP
