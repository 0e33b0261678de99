#ifndef LIFTNET_FLOWFIELD_HPP
#define LIFTNET_FLOWFIELD_HPP

/**
 * @file flowfield.hpp
 * @brief Axial velocity fields w(x,y) for straight-channel cross-sections.
 *
 * A ChannelField supplies the undisturbed (particle-free) axial velocity and
 * its first and second cross-sectional derivatives. Analytic cross-sections
 * (rectangular duct, circular pipe, equilateral triangle) differentiate their
 * closed forms term by term; arbitrary cross-sections are loaded as gridded
 * tables and interpolated with tensor-product splines.
 *
 * Conventions: the cross-section lives in the xy-plane with the channel
 * centroid at the origin; flow is axial in +z. All lengths in meters,
 * velocities in m/s.
 */

#include <memory>
#include <string>
#include <vector>

#include "liftnet/errors.hpp"
#include "liftnet/geometry.hpp"

namespace liftnet {

/// Dimensional local flow state at a point: velocity plus its cross-sectional
/// derivatives, evaluated at the particle center.
struct DerivativeSet {
    double w = 0.0;    ///< axial velocity [m/s]
    double w_x = 0.0;  ///< dw/dx [1/s]
    double w_y = 0.0;  ///< dw/dy [1/s]
    double w_xx = 0.0; ///< d2w/dx2 [1/(m s)]
    double w_yy = 0.0; ///< d2w/dy2 [1/(m s)]
    double w_xy = 0.0; ///< d2w/dxdy [1/(m s)]
};

enum class FieldKind { rect_duct, circular, equilateral_triangle, gridded };

/// Axis-aligned extents of a cross-section, for grid sweeps.
struct SectionBounds {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
};

/**
 * Immutable axial velocity field over a channel cross-section.
 *
 * All evaluation methods are pure and safe to call concurrently.
 */
class ChannelField {
public:
    virtual ~ChannelField() = default;

    virtual FieldKind kind() const = 0;

    /// Peak axial velocity the field was normalized to [m/s].
    virtual double max_velocity() const = 0;

    /// Smallest cross-sectional dimension [m]; sets finite-difference and
    /// containment tolerances.
    virtual double min_dimension() const = 0;

    /// Tight axis-aligned bounding box of the cross-section.
    virtual SectionBounds bounding_box() const = 0;

    /// Signed distance to the nearest wall: positive inside, negative outside.
    /// Gridded fields without a mask polygon fall back to the grid bounding box.
    virtual double boundary_distance(double x, double y) const = 0;

    /// Axial velocity at (x,y). The closed cross-section is admissible, so
    /// walls themselves evaluate (to ~0).
    /// Throws out_of_domain_error outside the cross-section.
    virtual double eval_velocity(double x, double y) const = 0;

    /// Velocity and first/second derivatives at a strictly interior point.
    /// Throws out_of_domain_error on or outside the walls.
    virtual DerivativeSet eval_derivatives(double x, double y) const = 0;

    bool contains(double x, double y) const {
        return boundary_distance(x, y) >= -containment_tol();
    }

protected:
    double containment_tol() const { return 1e-9 * min_dimension(); }

    void require_inside(double x, double y) const {
        if (!contains(x, y))
            throw out_of_domain_error("point (" + std::to_string(x) + ", " +
                                      std::to_string(y) + ") is outside the cross-section");
    }

    void require_strict_interior(double x, double y) const {
        if (boundary_distance(x, y) <= 0.0)
            throw out_of_domain_error("point (" + std::to_string(x) + ", " +
                                      std::to_string(y) +
                                      ") is on or outside the channel wall");
    }
};

/**
 * Rectangular duct of width W (x extent) and height H (y extent), centered at
 * the origin. Velocity is the classical Fourier-series solution, rescaled so
 * the centerline value equals U_m.
 *
 * @param W    duct width [m], > 0
 * @param H    duct height [m], > 0
 * @param U_m  centerline (maximum) velocity [m/s], > 0
 * @param series_terms number of odd series terms (default 50)
 */
std::unique_ptr<ChannelField> rect_duct_field(double W, double H, double U_m,
                                              int series_terms = 50);

/// Circular pipe of diameter D: w(r) = U_m (1 - (2r/D)^2).
std::unique_ptr<ChannelField> circular_field(double D, double U_m);

/// Equilateral triangle of side s, centroid at the origin, one vertex on +y.
/// Uses the exact cubic product-of-wall-distances solution, normalized so the
/// centroid velocity equals U_m.
std::unique_ptr<ChannelField> equilateral_triangle_field(double s, double U_m);

/// Structured-grid sample of an axial velocity field.
struct GriddedFieldTable {
    std::vector<double> x;  ///< strictly increasing node coordinates [m]
    std::vector<double> y;  ///< strictly increasing node coordinates [m]
    /// Row-major node velocities: value at (x[i], y[j]) is w[j * x.size() + i].
    std::vector<double> w;
    double U_m = 0.0;               ///< peak velocity; 0 means "infer from nodes"
    std::vector<Vec2> mask_polygon; ///< wetted-domain boundary; empty = bounding box
};

/**
 * Interpolating field over a structured rectangular grid.
 *
 * order 3 (default): tensor-product natural cubic spline, C2 everywhere, so
 * second derivatives are continuous. order 2: local biquadratic on the
 * nearest 3x3 stencil; node derivatives then coincide with central finite
 * differences of the table.
 *
 * Node velocities outside the mask polygon (when one is given) are clamped
 * to zero before the spline is built.
 */
std::unique_ptr<ChannelField> gridded_field_from_table(GriddedFieldTable table,
                                                       int order = 3);

/**
 * Loads a gridded field from CSV with header `x,y,w` (row-major structured
 * grid, SI units). A sidecar `<path>.meta.json` may supply `U_m` and
 * `mask_polygon`; without it, U_m is the largest node velocity and the domain
 * is the grid bounding box.
 */
std::unique_ptr<ChannelField> load_gridded_field(const std::string& csv_path,
                                                 int order = 3);

} // namespace liftnet

#endif // LIFTNET_FLOWFIELD_HPP
