#ifndef LIFTNET_LIFT_SOURCE_HPP
#define LIFTNET_LIFT_SOURCE_HPP

/**
 * @file lift_source.hpp
 * @brief Where the tracer gets its lift force from: a trained network, or a
 * closed-form closure planted for verification.
 */

#include <functional>
#include <memory>

#include "liftnet/field3d.hpp"
#include "liftnet/flowfield.hpp"
#include "liftnet/geometry.hpp"
#include "liftnet/neuralnet.hpp"

namespace liftnet {

/// Cross-sectional lift force supplier for straight-channel traces.
class LiftSource {
public:
    virtual ~LiftSource() = default;

    /// Lift force [N] on a particle of diameter a centered at (x, y).
    /// @throws degenerate_point_error / out_of_domain_error where the model
    ///         inputs cannot be evaluated
    virtual Vec2 force(const ChannelField& field, double x, double y, double a,
                       double rho, double mu) const = 0;
};

/// Lift force supplier for 3D traces.
class LiftSource3D {
public:
    virtual ~LiftSource3D() = default;
    virtual Vec3 force(const Field3D& field, const Vec3& pos, double a, double rho,
                       double mu) const = 0;
};

/// Trained-model lift: field derivatives -> features -> network -> force.
/// The network reference must outlive the source.
std::unique_ptr<LiftSource> model_lift_source(const NetworkParams& net);

/// Trained-model lift through the rotational mapping (general 3D flow).
std::unique_ptr<LiftSource3D> model_lift_source_3d(const NetworkParams& net);

/// Position-dependent closed-form lift, F = f(x, y).
std::unique_ptr<LiftSource> function_lift_source(std::function<Vec2(Vec2)> f);

/// Position-dependent closed-form 3D lift, F = f(p).
std::unique_ptr<LiftSource3D> function_lift_source_3d(std::function<Vec3(Vec3)> f);

} // namespace liftnet

#endif // LIFTNET_LIFT_SOURCE_HPP
