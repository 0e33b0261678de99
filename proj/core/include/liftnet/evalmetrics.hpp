#ifndef LIFTNET_EVALMETRICS_HPP
#define LIFTNET_EVALMETRICS_HPP

/**
 * @file evalmetrics.hpp
 * @brief Prediction quality metrics: MSE, angular error, relative magnitude
 * error, per-component R^2, and percentile summaries.
 *
 * Angle and relative magnitude are undefined on zero vectors; such samples
 * are excluded from those aggregates and counted in the report (they still
 * contribute to MSE and R^2).
 */

#include <cstddef>
#include <vector>

#include "liftnet/features.hpp"
#include "liftnet/neuralnet.hpp"

namespace liftnet {

struct EvalReport {
    double mse = 0.0;
    double r2_x = 0.0;
    double r2_y = 0.0;

    /// Sorted ascending; percentile curves over the included samples.
    std::vector<double> angular_curve_deg;
    std::vector<double> magnitude_curve_pct;

    double angular_p50 = 0.0;
    double angular_p90 = 0.0;
    double magnitude_p50 = 0.0;
    double magnitude_p90 = 0.0;

    std::size_t count = 0;               ///< all evaluated samples
    std::size_t excluded_zero_true = 0;  ///< zero true vector: no angle, no magnitude
    std::size_t excluded_zero_pred = 0;  ///< zero prediction only: no angle
};

/// Angle between the two vectors in degrees, in [0, 180].
/// @throws undefined_metric_error if either vector is zero
double angular_error_deg(const LiftCoefficient& c, const LiftCoefficient& c_hat);

/// | (||c_hat|| - ||c||) / ||c|| | * 100.
/// @throws undefined_metric_error if the true vector is zero
double magnitude_error_pct(const LiftCoefficient& c, const LiftCoefficient& c_hat);

/// Linear-interpolation percentile of a sorted ascending sample
/// (h = (n-1) p / 100 split into integer and fractional parts).
/// @throws domain_error on empty data or p outside [0, 100]
double percentile(const std::vector<double>& sorted, double p);

/// Runs the network over the batch and aggregates every metric.
/// @throws domain_error on an empty batch
EvalReport evaluate(const NetworkParams& net, const Batch& test);

} // namespace liftnet

#endif // LIFTNET_EVALMETRICS_HPP
