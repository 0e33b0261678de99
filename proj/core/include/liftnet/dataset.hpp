#ifndef LIFTNET_DATASET_HPP
#define LIFTNET_DATASET_HPP

/**
 * @file dataset.hpp
 * @brief Lift-map ingestion, symmetry augmentation, and reproducible splits.
 *
 * A lift map is a table of (particle, local flow state) -> lift coefficient
 * samples. Augmentation exploits the rotational equivariance of the
 * parametrization: rotating the cross-sectional frame rotates positions,
 * gradients (as vectors), Hessians (as symmetric tensors) and targets
 * together, producing physically valid new samples from old ones.
 */

#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "liftnet/features.hpp"
#include "liftnet/flowfield.hpp"

namespace liftnet {

enum class GeometryTag { R, T, S, P, other };

GeometryTag parse_geometry_tag(const std::string& s);
std::string to_string(GeometryTag tag);

/// One dimensional lift-map row: particle, fluid, local flow state, target.
struct LiftSample {
    double x0 = 0.0;  ///< particle center x [m]
    double y0 = 0.0;  ///< particle center y [m]
    double a = 0.0;   ///< particle diameter [m]
    double rho = 0.0; ///< fluid density [kg/m^3]
    double mu = 0.0;  ///< dynamic viscosity [Pa s]
    double U_m = 0.0; ///< channel peak velocity [m/s] (dataset metadata)
    DerivativeSet d;
    LiftCoefficient target;
    GeometryTag geometry_tag = GeometryTag::other;
    /// Opaque sample identity. Augmented copies append "#..." to the base id;
    /// everything before the first '#' identifies the source sample.
    std::string provenance_id;
};

/// Features for a sample, with the stagnation rejection scaled by the
/// sample's own peak velocity.
FeatureVector sample_features(const LiftSample& s);

struct LoadOptions {
    /// strict: any invalid row throws; lenient: rows are skipped and reported.
    bool strict = true;
    /// Targets are in the channel-height/centerline convention and the file
    /// carries an extra H column; converted on load.
    bool su_format = false;
    /// Schema mapping: canonical column name -> name used in the file.
    std::map<std::string, std::string> column_map;
};

/**
 * Loads lift samples from CSV (header
 * `x0,y0,a,rho,mu,U_m,w,w_x,w_y,w_xx,w_yy,w_xy,C_Lx,C_Ly,geometry_tag`).
 *
 * @param skipped  lenient mode: receives one message per rejected row
 * @throws format_error on malformed files, or on any bad row in strict mode
 */
std::vector<LiftSample> load_liftmaps(const std::string& path,
                                      const LoadOptions& opts = {},
                                      std::vector<std::string>* skipped = nullptr);

/// Writes samples in the canonical schema; numbers round-trip bit-exactly.
void save_liftmaps(const std::string& path, const std::vector<LiftSample>& samples);

/// Rotates the cross-sectional frame by theta (counterclockwise): position
/// and gradient as vectors, Hessian by conjugation, target as a vector.
LiftSample rotate_sample(const LiftSample& s, double theta);

/// Mirror about the x-axis: y0, w_y, w_xy and C_Ly change sign.
LiftSample flip_sample(const LiftSample& s);

/**
 * Rotation/flip augmentation: every sample is emitted at rotations
 * k*delta_theta for k = 0..(2*pi/delta_theta - 1), each optionally followed by
 * its x-axis mirror. Defaults give 18 rotations x 2 = 36 copies per sample.
 *
 * @throws config_error if delta_theta does not evenly divide a full turn
 */
std::vector<LiftSample> augment(const std::vector<LiftSample>& ds,
                                double delta_theta = std::numbers::pi / 9.0,
                                bool include_flip = true);

struct SplitSpec {
    double train = 0.7;
    double val = 0.15;
    double test = 0.15;
    std::uint64_t seed = 0;
};

struct SplitResult {
    std::vector<LiftSample> train, val, test;
};

/**
 * Deterministic, seed-pinned partition into train/val/test.
 *
 * With group_augmented (default), all samples sharing a base provenance id
 * travel together so augmented copies of one source sample never straddle the
 * split boundary; sizes then deviate from the exact fractions by at most one
 * group. Ungrouped, sizes are within 1 of fraction * |ds|.
 *
 * @throws config_error on fractions outside (0,1) or not summing to 1
 * @throws domain_error if |ds| < 3
 */
SplitResult split(const std::vector<LiftSample>& ds, const SplitSpec& spec,
                  bool group_augmented = true);

} // namespace liftnet

#endif // LIFTNET_DATASET_HPP
