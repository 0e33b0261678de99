#include "liftnet/rotation3d.hpp"

#include <cmath>

namespace liftnet {

RotationMap rotation_to_z(const Vec3& u) {
    const double speed = u.norm();
    if (!(speed > 0.0) || !std::isfinite(speed))
        throw degenerate_point_error("cannot orient a zero velocity vector");

    const double nx = u.x / speed;
    const double ny = u.y / speed;
    const double nz = u.z / speed;

    RotationMap rm;
    rm.u = u;
    rm.speed = speed;

    // The quotient (1 - nz) / s2 is well conditioned for any nonzero
    // perpendicular component: numerator and denominator shrink together, so
    // the product with the O(s2) entries of S^2 stays accurate to roundoff.
    // Only a vanishing perpendicular (exact +-z, or small enough that the
    // quotient would overflow) takes the snapped limit, where the residual
    // misalignment is below 1e-140.
    const double s2 = nx * nx + ny * ny;
    if (s2 < 1e-290) {
        rm.R = Mat3::identity();
        if (nz < 0.0) { // antiparallel limit: half turn about x
            rm.R(1, 1) = -1.0;
            rm.R(2, 2) = -1.0;
        }
        return rm;
    }

    Mat3 S;
    S(0, 2) = -nx;
    S(1, 2) = -ny;
    S(2, 0) = nx;
    S(2, 1) = ny;
    const double k = (1.0 - nz) / s2;
    rm.R = Mat3::identity() + S + k * (S * S);
    return rm;
}

PlanarGradients map_gradients(const GradientSet3D& g, const RotationMap& rm) {
    Mat3 sym;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) sym(i, j) = 0.5 * (g.G2(i, j) + g.G2(j, i));

    const Vec3 g1 = rm.R * g.G1;
    const Mat3 g2 = rm.R * sym * rm.R.transposed();

    PlanarGradients p;
    p.g_x = g1.x;
    p.g_y = g1.y;
    p.g_xx = g2(0, 0);
    p.g_yy = g2(1, 1);
    p.g_xy = 0.5 * (g2(0, 1) + g2(1, 0));
    return p;
}

Vec3 lift_3d(const NetworkParams& net, const Vec3& u, const GradientSet3D& g,
             double rho, double mu, double a) {
    const RotationMap rm = rotation_to_z(u);
    const PlanarGradients p = map_gradients(g, rm);

    DerivativeSet d;
    d.w = rm.speed;
    d.w_x = p.g_x;
    d.w_y = p.g_y;
    d.w_xx = p.g_xx;
    d.w_yy = p.g_yy;
    d.w_xy = p.g_xy;

    const LiftCoefficient c = forward(net, nondim_features(d, rho, mu, a));
    const Vec3 c_planar{c.C_Lx, c.C_Ly, 0.0};
    const Vec3 c_world = rm.R.transposed() * c_planar;
    const double scale = rho * rm.speed * rm.speed * a * a;
    return {scale * c_world.x, scale * c_world.y, scale * c_world.z};
}

} // namespace liftnet
