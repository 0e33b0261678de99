#ifndef LIFTNET_FIELD3D_HPP
#define LIFTNET_FIELD3D_HPP

/**
 * @file field3d.hpp
 * @brief 3D velocity fields for curved-channel particle tracing.
 *
 * A Field3D supplies the velocity vector plus the gradient and Hessian of the
 * velocity magnitude (the scalar the planar lift model differentiates).
 * Straight channels are extrusions of a ChannelField; arbitrary channels are
 * loaded as structured x,y,z grids; any field can be rigidly reoriented.
 */

#include <memory>
#include <string>

#include "liftnet/flowfield.hpp"
#include "liftnet/geometry.hpp"

namespace liftnet {

struct FlowState3D {
    Vec3 u;  ///< velocity [m/s]
    Vec3 G1; ///< grad ||u|| [1/s]
    Mat3 G2; ///< Hessian of ||u|| [1/(m s)]
};

class Field3D {
public:
    virtual ~Field3D() = default;

    /// Flow state at a point. Near-zero-speed cells return zero gradients
    /// (the magnitude is not differentiable at u = 0).
    /// @throws out_of_domain_error outside the field's cross-section/grid
    virtual FlowState3D eval(const Vec3& p) const = 0;

    /// Signed distance to the lateral walls (positive inside). Axial extent
    /// is intentionally not included; see in_domain.
    virtual double boundary_distance(const Vec3& p) const = 0;

    /// True while the point is inside the full domain including any axial
    /// extent; leaving it terminates a trace as "outlet".
    virtual bool in_domain(const Vec3& p) const = 0;

    /// Velocity scale for degeneracy thresholds [m/s].
    virtual double reference_speed() const = 0;
};

/**
 * Straight channel: cross-section extruded along +z for 0 <= z <= length
 * (length <= 0 means unbounded). The section reference must outlive the
 * field.
 */
std::unique_ptr<Field3D> extruded_field(const ChannelField& section,
                                        double length = 0.0);

/**
 * Rigidly moved copy of another field: world point p corresponds to inner
 * point Q^T (p - t). Velocities and gradients transform accordingly
 * (u -> Q u, G1 -> Q G1, G2 -> Q G2 Q^T). The inner reference must outlive
 * the field.
 */
std::unique_ptr<Field3D> rotated_field(const Field3D& inner, const Mat3& Q,
                                       const Vec3& t = {});

/**
 * Loads a structured-grid field from CSV with header `x,y,z,u,v,w` (SI
 * units). Interpolation is local triquadratic per velocity component;
 * magnitude derivatives follow by the chain rule. Domain is the grid
 * bounding box.
 */
std::unique_ptr<Field3D> load_gridded_field3d(const std::string& csv_path);

} // namespace liftnet

#endif // LIFTNET_FIELD3D_HPP
