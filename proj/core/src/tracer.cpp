#include "liftnet/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace liftnet {

namespace {

constexpr double pi = std::numbers::pi;

bool finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

// Planar and 3D traces share the stepping loop through this adapter.
struct PlanarSystem {
    const ChannelField& field;
    const LiftSource& lift;
    const TraceConfig& cfg;
    double a;

    Vec3 rhs(const Vec3& p) const {
        const Vec2 F = lift.force(field, p.x, p.y, a, cfg.rho, cfg.mu);
        const Vec2 v = migration_velocity(F, cfg.mu, a);
        return {v.x, v.y, field.eval_velocity(p.x, p.y)};
    }

    double force_norm(const Vec3& p) const {
        return lift.force(field, p.x, p.y, a, cfg.rho, cfg.mu).norm();
    }

    double clearance(const Vec3& p) const {
        return field.boundary_distance(p.x, p.y);
    }

    Vec3 clearance_normal(const Vec3& p) const {
        const double h = 1e-4 * a;
        const double gx = (field.boundary_distance(p.x + h, p.y) -
                           field.boundary_distance(p.x - h, p.y)) /
                          (2.0 * h);
        const double gy = (field.boundary_distance(p.x, p.y + h) -
                           field.boundary_distance(p.x, p.y - h)) /
                          (2.0 * h);
        return {gx, gy, 0.0};
    }

    bool in_domain(const Vec3& p) const { return field.contains(p.x, p.y); }

    bool at_outlet(const Vec3& p) const {
        return cfg.channel_length > 0.0 && p.z >= cfg.channel_length;
    }

    // Lateral displacement, used by the wall-clamp dwell rule.
    static double lateral_dist(const Vec3& a_, const Vec3& b_) {
        return std::hypot(a_.x - b_.x, a_.y - b_.y);
    }
};

struct CurvedSystem {
    const Field3D& field;
    const LiftSource3D& lift;
    const TraceConfig& cfg;
    double a;

    Vec3 rhs(const Vec3& p) const {
        const FlowState3D st = field.eval(p);
        const Vec3 F = lift.force(field, p, a, cfg.rho, cfg.mu);
        return st.u + migration_velocity(F, cfg.mu, a);
    }

    double force_norm(const Vec3& p) const {
        return lift.force(field, p, a, cfg.rho, cfg.mu).norm();
    }

    double clearance(const Vec3& p) const { return field.boundary_distance(p); }

    Vec3 clearance_normal(const Vec3& p) const {
        const double h = 1e-4 * a;
        Vec3 g;
        g.x = (field.boundary_distance({p.x + h, p.y, p.z}) -
               field.boundary_distance({p.x - h, p.y, p.z})) /
              (2.0 * h);
        g.y = (field.boundary_distance({p.x, p.y + h, p.z}) -
               field.boundary_distance({p.x, p.y - h, p.z})) /
              (2.0 * h);
        g.z = (field.boundary_distance({p.x, p.y, p.z + h}) -
               field.boundary_distance({p.x, p.y, p.z - h})) /
              (2.0 * h);
        return g;
    }

    bool in_domain(const Vec3& p) const { return field.in_domain(p); }

    bool at_outlet(const Vec3&) const { return false; } // leaving in_domain is the outlet

    static double lateral_dist(const Vec3& a_, const Vec3& b_) {
        return (a_ - b_).norm();
    }
};

// One tentative RK4 step; false on any evaluation failure inside a stage.
template <class Sys>
bool rk4_step(const Sys& sys, Vec3& p, double dt) {
    try {
        const Vec3 k1 = sys.rhs(p);
        const Vec3 k2 = sys.rhs(p + (0.5 * dt) * k1);
        const Vec3 k3 = sys.rhs(p + (0.5 * dt) * k2);
        const Vec3 k4 = sys.rhs(p + dt * k3);
        const Vec3 np = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!finite(np)) return false;
        p = np;
        return true;
    } catch (const error&) {
        return false;
    }
}

// Pushes the particle back to the a/2 clearance surface along the local
// inward normal of the wall-distance function. Returns true if it moved.
template <class Sys>
bool enforce_clearance(const Sys& sys, Vec3& p, double a) {
    const double need = 0.5 * a;
    bool moved = false;
    for (int iter = 0; iter < 8; ++iter) {
        const double d = sys.clearance(p);
        if (d >= need) break;
        const Vec3 n = sys.clearance_normal(p);
        const double nn = n.norm();
        if (!(nn > 1e-6)) break; // medial axis / corner: direction undefined
        p += ((need - d) / nn) * n;
        moved = true;
    }
    return moved;
}

template <class Sys>
Trajectory run_trace(const Sys& sys, const ParticleState& particle,
                     const TraceConfig& cfg) {
    cfg.validate();
    if (!(particle.a > 0.0)) throw domain_error("particle diameter must be positive");
    if (sys.clearance(particle.pos) < 0.5 * particle.a * (1.0 - 1e-9))
        throw domain_error("particle " + std::to_string(particle.id) +
                           " starts inside the wall clearance");

    Trajectory traj;
    traj.particle_id = particle.id;

    Vec3 p = particle.pos;
    double t = 0.0;
    double dt = cfg.dt;
    const double dt_min = cfg.dt_min > 0.0 ? cfg.dt_min : cfg.dt / 1048576.0;

    traj.points.push_back({t, p});

    int eq_count = 0;
    int clamp_count = 0;
    Vec3 clamp_anchor = p;
    std::size_t accepted = 0;
    bool done = false;

    while (!done) {
        if (t >= cfg.max_time || accepted >= cfg.max_steps) {
            traj.reason = Termination::max_time;
            break;
        }

        const double dt_eff = std::min(dt, cfg.max_time - t);
        Vec3 trial = p;
        if (!rk4_step(sys, trial, dt_eff)) {
            dt *= 0.5;
            if (dt < dt_min) {
                traj.reason = Termination::dt_underflow;
                traj.diagnostic = "step size fell below " + std::to_string(dt_min) +
                                  " s near (" + std::to_string(p.x) + ", " +
                                  std::to_string(p.y) + ", " + std::to_string(p.z) +
                                  ")";
                break;
            }
            continue;
        }

        p = trial;
        t += dt_eff;
        ++accepted;
        dt = std::min(dt * 2.0, cfg.dt);

        const bool clamped = enforce_clearance(sys, p, particle.a);

        Termination reason{};
        if (!sys.in_domain(p) || sys.at_outlet(p)) {
            reason = Termination::outlet;
            done = true;
        }

        if (!done) {
            // Equilibrium dwell: the lift stays below threshold for a full
            // window of accepted steps.
            double fnorm = std::numeric_limits<double>::infinity();
            try {
                fnorm = sys.force_norm(p);
            } catch (const error&) {
            }
            eq_count = fnorm < cfg.force_threshold ? eq_count + 1 : 0;
            if (eq_count >= cfg.equilibrium_dwell) {
                reason = Termination::equilibrium;
                done = true;
            }
        }

        if (!done) {
            // Wall-clamp dwell: pinned to the clearance surface for a full
            // window without sliding anywhere. A sliding particle re-anchors
            // each window, so only a truly stuck one terminates.
            if (clamped) {
                if (clamp_count == 0) clamp_anchor = p;
                ++clamp_count;
                if (clamp_count % cfg.equilibrium_dwell == 0) {
                    if (Sys::lateral_dist(p, clamp_anchor) < 1e-3 * particle.a) {
                        reason = Termination::wall_clamp;
                        done = true;
                    } else {
                        clamp_anchor = p;
                    }
                }
            } else {
                clamp_count = 0;
            }
        }

        if (done || cfg.record_every <= 1 ||
            accepted % static_cast<std::size_t>(cfg.record_every) == 0)
            traj.points.push_back({t, p});

        if (done) {
            traj.reason = reason;
            break;
        }
    }

    if (traj.points.back().t < t) traj.points.push_back({t, p});
    return traj;
}

} // namespace

const char* to_string(Termination t) {
    switch (t) {
    case Termination::outlet: return "outlet";
    case Termination::equilibrium: return "equilibrium";
    case Termination::wall_clamp: return "wall_clamp";
    case Termination::max_time: return "max_time";
    case Termination::dt_underflow: return "dt_underflow";
    }
    return "unknown";
}

void TraceConfig::validate() const {
    if (!(dt > 0.0)) throw config_error("dt must be positive");
    if (!(max_time > 0.0)) throw config_error("max_time must be positive");
    if (!(force_threshold > 0.0)) throw config_error("force_threshold must be positive");
    if (equilibrium_dwell < 1) throw config_error("equilibrium_dwell must be >= 1");
    if (!(rho > 0.0) || !(mu > 0.0))
        throw config_error("fluid properties must be positive");
    if (record_every < 1) throw config_error("record_every must be >= 1");
    if (max_steps < 1) throw config_error("max_steps must be >= 1");
}

Vec2 migration_velocity(const Vec2& F, double mu, double a) {
    if (!(mu > 0.0) || !(a > 0.0))
        throw domain_error("viscosity and diameter must be positive");
    const double c = 1.0 / (3.0 * pi * mu * a);
    return {F.x * c, F.y * c};
}

Vec3 migration_velocity(const Vec3& F, double mu, double a) {
    if (!(mu > 0.0) || !(a > 0.0))
        throw domain_error("viscosity and diameter must be positive");
    const double c = 1.0 / (3.0 * pi * mu * a);
    return {F.x * c, F.y * c, F.z * c};
}

Trajectory trace_one(const ParticleState& particle, const ChannelField& field,
                     const LiftSource& lift, const TraceConfig& cfg) {
    return run_trace(PlanarSystem{field, lift, cfg, particle.a}, particle, cfg);
}

std::vector<Trajectory> trace(const std::vector<ParticleState>& particles,
                              const ChannelField& field, const LiftSource& lift,
                              const TraceConfig& cfg) {
    std::vector<Trajectory> out;
    out.reserve(particles.size());
    for (const auto& p : particles) out.push_back(trace_one(p, field, lift, cfg));
    return out;
}

Trajectory trace_curved_one(const ParticleState& particle, const Field3D& field,
                            const LiftSource3D& lift, const TraceConfig& cfg) {
    return run_trace(CurvedSystem{field, lift, cfg, particle.a}, particle, cfg);
}

std::vector<Trajectory> trace_curved(const std::vector<ParticleState>& particles,
                                     const Field3D& field, const LiftSource3D& lift,
                                     const TraceConfig& cfg) {
    std::vector<Trajectory> out;
    out.reserve(particles.size());
    for (const auto& p : particles)
        out.push_back(trace_curved_one(p, field, lift, cfg));
    return out;
}

} // namespace liftnet
