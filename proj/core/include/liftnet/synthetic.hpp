#ifndef LIFTNET_SYNTHETIC_HPP
#define LIFTNET_SYNTHETIC_HPP

/**
 * @file synthetic.hpp
 * @brief Closed-form lift closures used as verification oracles: a smooth
 * rotation-equivariant pseudo-lift for end-to-end training checks, and
 * position-planted force fields with known equilibria for the tracer.
 */

#include <memory>
#include <string>

#include "liftnet/features.hpp"
#include "liftnet/lift_source.hpp"

namespace liftnet {

/**
 * Smooth pseudo-lift with the same symmetry group as the physical problem.
 * With v = (wbar_x, wbar_y) and the nondimensional Hessian
 * Hb = [[wbar_xx, wbar_xy], [wbar_xy, wbar_yy]]:
 *
 *   C_L = s(Re_p) * (c1 v + c2 Hb v + c3 tr(Hb) v + c4 |v|^2 v),
 *   s(Re) = 0.5 + Re / (Re + 10),
 *   (c1, c2, c3, c4) = (0.8, 1.7, -0.6, 2.5).
 *
 * Every term maps v -> Rv under a frame rotation (and respects the x-axis
 * mirror), so rotation/flip-augmented copies of a sample are exactly
 * consistent with this closure. That makes it a valid end-to-end target for
 * the full augment/split/train pipeline.
 */
LiftCoefficient equivariant_pseudo_lift(const FeatureVector& f);

/// Default stiffness for the planted closures [N/m].
inline constexpr double default_planted_stiffness = 1e-6;

/**
 * Named planted lift closures for tracer verification:
 *  - "zero": F = 0 everywhere.
 *  - "linear": F = -k (x, y); single equilibrium at the origin, approached as
 *    exp(-k t / (3 pi mu a)).
 *  - "radial": F = -k (r - r*) r_hat with r* = 0.3 * D and D the smallest
 *    cross-sectional dimension; equilibrium ring at radius r*.
 *  - "pseudo": equivariant_pseudo_lift evaluated on the field's local
 *    features and redimensionalized.
 *
 * @throws config_error on an unknown name
 */
std::unique_ptr<LiftSource> make_synthetic_lift(const std::string& name,
                                                const ChannelField& field,
                                                double k = default_planted_stiffness);

} // namespace liftnet

#endif // LIFTNET_SYNTHETIC_HPP
