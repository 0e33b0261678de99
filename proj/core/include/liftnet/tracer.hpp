#ifndef LIFTNET_TRACER_HPP
#define LIFTNET_TRACER_HPP

/**
 * @file tracer.hpp
 * @brief Lagrangian particle tracing under model-predicted lift.
 *
 * Particles are advected by the undisturbed flow and migrate laterally with
 * the quasi-steady velocity v = F_L / (3 pi mu a) (Stokes drag balance,
 * point particles, neutrally buoyant). Integration is RK4 with step
 * rejection: a stage that hits a stagnation point or leaves the domain
 * rejects the step and halves dt, recovering toward the base step after
 * success.
 */

#include <string>
#include <vector>

#include "liftnet/field3d.hpp"
#include "liftnet/flowfield.hpp"
#include "liftnet/geometry.hpp"
#include "liftnet/lift_source.hpp"

namespace liftnet {

struct ParticleState {
    Vec3 pos;       ///< center [m]; planar traces use z as the axial start
    double a = 0.0; ///< diameter [m]
    int id = 0;
};

enum class Termination {
    outlet,       ///< reached the axial end or otherwise left the domain
    equilibrium,  ///< lift below threshold for a full dwell window
    wall_clamp,   ///< pinned to the wall-clearance surface without sliding
    max_time,     ///< time or step budget exhausted
    dt_underflow, ///< repeated step rejection shrank dt below dt_min
};

const char* to_string(Termination t);

struct TrajectoryPoint {
    double t = 0.0;
    Vec3 pos;
};

struct Trajectory {
    int particle_id = 0;
    std::vector<TrajectoryPoint> points; ///< strictly increasing t
    Termination reason = Termination::max_time;
    std::string diagnostic; ///< details for dt_underflow
};

struct TraceConfig {
    double dt = 0.0;       ///< base RK4 step [s]
    double dt_min = 0.0;   ///< rejection floor; 0 means dt / 2^20
    double max_time = 0.0; ///< [s]
    std::size_t max_steps = 2000000;
    double channel_length = 0.0;    ///< planar outlet at z >= length; <= 0 disables
    double force_threshold = 1e-12; ///< equilibrium force level [N]
    int equilibrium_dwell = 50;     ///< consecutive quiet steps required
    double rho = 0.0;               ///< fluid density [kg/m^3]
    double mu = 0.0;                ///< dynamic viscosity [Pa s]
    int record_every = 1;           ///< sample thinning (first/last always kept)

    void validate() const; ///< throws config_error on out-of-range values
};

/// Quasi-steady migration velocity from a lift force: F / (3 pi mu a).
Vec2 migration_velocity(const Vec2& F, double mu, double a);
Vec3 migration_velocity(const Vec3& F, double mu, double a);

/// Traces one particle through a straight channel (axial +z).
/// @throws domain_error if the particle starts inside the wall clearance
Trajectory trace_one(const ParticleState& particle, const ChannelField& field,
                     const LiftSource& lift, const TraceConfig& cfg);

std::vector<Trajectory> trace(const std::vector<ParticleState>& particles,
                              const ChannelField& field, const LiftSource& lift,
                              const TraceConfig& cfg);

/// Traces one particle through a general 3D field; advection follows the 3D
/// velocity and the lateral force comes from the rotational-mapping pipeline.
Trajectory trace_curved_one(const ParticleState& particle, const Field3D& field,
                            const LiftSource3D& lift, const TraceConfig& cfg);

std::vector<Trajectory> trace_curved(const std::vector<ParticleState>& particles,
                                     const Field3D& field, const LiftSource3D& lift,
                                     const TraceConfig& cfg);

} // namespace liftnet

#endif // LIFTNET_TRACER_HPP
