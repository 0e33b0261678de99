#include "liftnet/lift_source.hpp"

#include <utility>

#include "liftnet/rotation3d.hpp"

namespace liftnet {

namespace {

class ModelLiftSource final : public LiftSource {
public:
    explicit ModelLiftSource(const NetworkParams& net) : net_(net) {}

    Vec2 force(const ChannelField& field, double x, double y, double a, double rho,
               double mu) const override {
        const DerivativeSet d = field.eval_derivatives(x, y);
        if (!(d.w > stagnation_rel_threshold * field.max_velocity()))
            throw degenerate_point_error("lift undefined at a stagnation point");
        const LiftCoefficient c = forward(net_, nondim_features(d, rho, mu, a));
        return dim_lift(c, rho, d.w, a);
    }

private:
    const NetworkParams& net_;
};

class ModelLiftSource3D final : public LiftSource3D {
public:
    explicit ModelLiftSource3D(const NetworkParams& net) : net_(net) {}

    Vec3 force(const Field3D& field, const Vec3& pos, double a, double rho,
               double mu) const override {
        const FlowState3D st = field.eval(pos);
        if (!(st.u.norm() > stagnation_rel_threshold * field.reference_speed()))
            throw degenerate_point_error("lift undefined in a zero-velocity cell");
        return lift_3d(net_, st.u, {st.G1, st.G2}, rho, mu, a);
    }

private:
    const NetworkParams& net_;
};

class FunctionLiftSource final : public LiftSource {
public:
    explicit FunctionLiftSource(std::function<Vec2(Vec2)> f) : f_(std::move(f)) {}

    Vec2 force(const ChannelField&, double x, double y, double, double,
               double) const override {
        return f_({x, y});
    }

private:
    std::function<Vec2(Vec2)> f_;
};

class FunctionLiftSource3D final : public LiftSource3D {
public:
    explicit FunctionLiftSource3D(std::function<Vec3(Vec3)> f) : f_(std::move(f)) {}

    Vec3 force(const Field3D&, const Vec3& pos, double, double, double) const override {
        return f_(pos);
    }

private:
    std::function<Vec3(Vec3)> f_;
};

} // namespace

std::unique_ptr<LiftSource> model_lift_source(const NetworkParams& net) {
    return std::make_unique<ModelLiftSource>(net);
}

std::unique_ptr<LiftSource3D> model_lift_source_3d(const NetworkParams& net) {
    return std::make_unique<ModelLiftSource3D>(net);
}

std::unique_ptr<LiftSource> function_lift_source(std::function<Vec2(Vec2)> f) {
    return std::make_unique<FunctionLiftSource>(std::move(f));
}

std::unique_ptr<LiftSource3D> function_lift_source_3d(std::function<Vec3(Vec3)> f) {
    return std::make_unique<FunctionLiftSource3D>(std::move(f));
}

} // namespace liftnet
