#ifndef LIFTNET_ROTATION3D_HPP
#define LIFTNET_ROTATION3D_HPP

/**
 * @file rotation3d.hpp
 * @brief Rotational mapping between an arbitrary 3D flow direction and the
 * planar lift model.
 *
 * The planar model assumes flow along +z with gradients in the xy-plane. For
 * a general velocity u, a Rodrigues rotation R aligns u with +z; the
 * magnitude gradient G1 maps as a vector, the magnitude Hessian G2 by
 * conjugation, z-derivative terms are dropped, the planar model predicts
 * (C'_Lx, C'_Ly), and the force is rotated back with R^T. The predicted force
 * is perpendicular to u by construction.
 */

#include "liftnet/geometry.hpp"
#include "liftnet/neuralnet.hpp"

namespace liftnet {

struct RotationMap {
    Mat3 R;  ///< maps u/||u|| onto +z
    Vec3 u;  ///< the source velocity [m/s]
    double speed = 0.0; ///< cached ||u||
};

/// Velocity-magnitude derivatives at a point: G1 = grad ||u||,
/// G2 = Hessian of ||u||.
struct GradientSet3D {
    Vec3 G1;
    Mat3 G2;
};

/// Cross-plane gradients after rotation, z row/column dropped.
struct PlanarGradients {
    double g_x = 0.0;
    double g_y = 0.0;
    double g_xx = 0.0;
    double g_yy = 0.0;
    double g_xy = 0.0;
};

/**
 * Rodrigues rotation taking u/||u|| to +z:
 * R = I + S + ((1 - n_z) / (n_x^2 + n_y^2)) S^2 with the cross-product matrix
 * S = [[0,0,-n_x],[0,0,-n_y],[n_x,n_y,0]]. Near exact (anti)alignment the
 * formula degenerates and the limits I (parallel) and a half-turn about x
 * (antiparallel) are used.
 *
 * @throws degenerate_point_error on zero velocity
 */
RotationMap rotation_to_z(const Vec3& u);

/// G1' = R G1 (x,y kept); G2' = R sym(G2) R^T (xy block kept). G2 is
/// symmetrized first since gridded data may carry asymmetry at roundoff level.
PlanarGradients map_gradients(const GradientSet3D& g, const RotationMap& rm);

/**
 * Full 3D lift pipeline: rotate into the plane, build features with
 * w = ||u||, run the planar model, embed the prediction at z = 0, rotate back
 * and redimensionalize: F = rho ||u||^2 a^2 R^T (C'_Lx, C'_Ly, 0).
 */
Vec3 lift_3d(const NetworkParams& net, const Vec3& u, const GradientSet3D& g,
             double rho, double mu, double a);

} // namespace liftnet

#endif // LIFTNET_ROTATION3D_HPP
