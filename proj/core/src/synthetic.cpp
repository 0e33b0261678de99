#include "liftnet/synthetic.hpp"

#include <cmath>

namespace liftnet {

LiftCoefficient equivariant_pseudo_lift(const FeatureVector& f) {
    constexpr double c1 = 0.8, c2 = 1.7, c3 = -0.6, c4 = 2.5;
    const double vx = f.wbar_x, vy = f.wbar_y;
    const double hv_x = f.wbar_xx * vx + f.wbar_xy * vy;
    const double hv_y = f.wbar_xy * vx + f.wbar_yy * vy;
    const double tr = f.wbar_xx + f.wbar_yy;
    const double v2 = vx * vx + vy * vy;
    const double s = 0.5 + f.Re_p / (f.Re_p + 10.0);
    return {s * (c1 * vx + c2 * hv_x + c3 * tr * vx + c4 * v2 * vx),
            s * (c1 * vy + c2 * hv_y + c3 * tr * vy + c4 * v2 * vy)};
}

namespace {

class PseudoLiftSource final : public LiftSource {
public:
    Vec2 force(const ChannelField& field, double x, double y, double a, double rho,
               double mu) const override {
        const DerivativeSet d = field.eval_derivatives(x, y);
        if (!(d.w > stagnation_rel_threshold * field.max_velocity()))
            throw degenerate_point_error("pseudo-lift undefined at a stagnation point");
        const LiftCoefficient c = equivariant_pseudo_lift(nondim_features(d, rho, mu, a));
        return dim_lift(c, rho, d.w, a);
    }
};

} // namespace

std::unique_ptr<LiftSource> make_synthetic_lift(const std::string& name,
                                                const ChannelField& field, double k) {
    if (name == "zero")
        return function_lift_source([](Vec2) { return Vec2{0.0, 0.0}; });
    if (name == "linear")
        return function_lift_source([k](Vec2 p) { return Vec2{-k * p.x, -k * p.y}; });
    if (name == "radial") {
        const double r_star = 0.3 * field.min_dimension();
        return function_lift_source([k, r_star](Vec2 p) {
            const double r = p.norm();
            if (r == 0.0) return Vec2{0.0, 0.0};
            const double f = -k * (r - r_star) / r;
            return Vec2{f * p.x, f * p.y};
        });
    }
    if (name == "pseudo") return std::make_unique<PseudoLiftSource>();
    throw config_error("unknown synthetic lift '" + name +
                       "' (expected zero, linear, radial or pseudo)");
}

} // namespace liftnet
