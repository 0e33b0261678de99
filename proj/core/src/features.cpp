#include "liftnet/features.hpp"

#include <cmath>

namespace liftnet {

namespace {

bool all_finite(const DerivativeSet& d) {
    return std::isfinite(d.w) && std::isfinite(d.w_x) && std::isfinite(d.w_y) &&
           std::isfinite(d.w_xx) && std::isfinite(d.w_yy) && std::isfinite(d.w_xy);
}

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw domain_error(std::string(name) + " must be positive and finite");
}

} // namespace

double taylor_reconstruct(const DerivativeSet& d, double dx, double dy) {
    return d.w + d.w_x * dx + d.w_y * dy + 0.5 * d.w_xx * dx * dx +
           0.5 * d.w_yy * dy * dy + d.w_xy * dx * dy;
}

FeatureVector nondim_features(const DerivativeSet& d, double rho, double mu, double a) {
    check_positive(rho, "rho");
    check_positive(mu, "mu");
    check_positive(a, "a");
    if (!all_finite(d)) throw domain_error("non-finite flow derivatives");
    if (!(d.w > 0.0))
        throw degenerate_point_error("velocity " + std::to_string(d.w) +
                                     " at a stagnation point cannot be nondimensionalized");
    FeatureVector f;
    f.Re_p = rho * d.w * a / mu;
    f.wbar_x = d.w_x * a / d.w;
    f.wbar_y = d.w_y * a / d.w;
    f.wbar_xx = d.w_xx * a * a / d.w;
    f.wbar_yy = d.w_yy * a * a / d.w;
    f.wbar_xy = d.w_xy * a * a / d.w;
    return f;
}

LiftCoefficient nondim_target(const Vec2& F, double rho, double w, double a) {
    check_positive(rho, "rho");
    check_positive(a, "a");
    if (!(w > 0.0) || !std::isfinite(w))
        throw degenerate_point_error("lift coefficient undefined at w <= 0");
    const double scale = rho * w * w * a * a;
    return {F.x / scale, F.y / scale};
}

Vec2 dim_lift(const LiftCoefficient& c, double rho, double w, double a) {
    check_positive(rho, "rho");
    check_positive(a, "a");
    if (!(w > 0.0) || !std::isfinite(w))
        throw degenerate_point_error("lift force undefined at w <= 0");
    const double scale = rho * w * w * a * a;
    return {c.C_Lx * scale, c.C_Ly * scale};
}

LiftCoefficient su_convert(const LiftCoefficient& c_su, double a, double U_m, double w,
                           double H) {
    check_positive(a, "a");
    check_positive(U_m, "U_m");
    check_positive(w, "w");
    check_positive(H, "H");
    const double factor = (a * a * U_m * U_m) / (w * w * H * H);
    return {c_su.C_Lx * factor, c_su.C_Ly * factor};
}

} // namespace liftnet
