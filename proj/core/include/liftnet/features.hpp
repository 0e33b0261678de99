#ifndef LIFTNET_FEATURES_HPP
#define LIFTNET_FEATURES_HPP

/**
 * @file features.hpp
 * @brief Geometry-free parametrization of the local flow around a particle.
 *
 * The lift model never sees channel geometry. Its inputs are the particle
 * Reynolds number and the velocity derivatives at the particle center, each
 * nondimensionalized by the local velocity and the particle diameter; its
 * output is the dimensionless lift coefficient C_L = F / (rho w^2 a^2).
 */

#include <array>

#include "liftnet/errors.hpp"
#include "liftnet/flowfield.hpp"
#include "liftnet/geometry.hpp"

namespace liftnet {

/// Dimensionless model inputs. Construction requires w > 0 (the local
/// velocity divides every derivative term).
struct FeatureVector {
    double Re_p = 0.0;     ///< rho * w * a / mu
    double wbar_x = 0.0;   ///< w_x * a / w
    double wbar_y = 0.0;   ///< w_y * a / w
    double wbar_xx = 0.0;  ///< w_xx * a^2 / w
    double wbar_yy = 0.0;  ///< w_yy * a^2 / w
    double wbar_xy = 0.0;  ///< w_xy * a^2 / w

    static constexpr int width = 6;

    std::array<double, 6> as_array() const {
        return {Re_p, wbar_x, wbar_y, wbar_xx, wbar_yy, wbar_xy};
    }
};

/// Dimensionless cross-sectional lift coefficient.
struct LiftCoefficient {
    double C_Lx = 0.0;
    double C_Ly = 0.0;
};

/// Samples with local velocity below this fraction of the peak velocity are
/// rejected as stagnation points rather than clamped; near-zero w makes the
/// nondimensionalization singular.
inline constexpr double stagnation_rel_threshold = 1e-12;

/// Second-order Taylor reconstruction of the velocity at an offset (dx, dy)
/// from the expansion point. Exact on fields polynomial of total degree <= 2.
double taylor_reconstruct(const DerivativeSet& d, double dx, double dy);

/**
 * Nondimensionalizes a local flow state into model inputs:
 * (rho w a / mu, w_x a / w, w_y a / w, w_xx a^2 / w, w_yy a^2 / w, w_xy a^2 / w).
 *
 * @throws degenerate_point_error if d.w <= 0 (stagnation point)
 * @throws domain_error on non-positive rho, mu or a, or non-finite inputs
 */
FeatureVector nondim_features(const DerivativeSet& d, double rho, double mu, double a);

/// C_L = F / (rho w^2 a^2), componentwise.
/// @throws degenerate_point_error if w <= 0
LiftCoefficient nondim_target(const Vec2& F, double rho, double w, double a);

/// F = rho w^2 a^2 C_L; exact inverse of nondim_target.
Vec2 dim_lift(const LiftCoefficient& c, double rho, double w, double a);

/**
 * Converts a lift coefficient from the convention that scales by the channel
 * height and centerline velocity to this project's local-velocity convention:
 * C_L = C_su * (a^2 U_m^2) / (w^2 H^2).
 *
 * @throws domain_error if w <= 0 or H <= 0
 */
LiftCoefficient su_convert(const LiftCoefficient& c_su, double a, double U_m, double w,
                           double H);

} // namespace liftnet

#endif // LIFTNET_FEATURES_HPP
