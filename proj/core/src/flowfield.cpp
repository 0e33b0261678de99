#include "liftnet/flowfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace liftnet {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw domain_error(std::string(name) + " must be positive and finite");
}

// cosh(a)/cosh(b) and sinh(a)/cosh(b) for 0 <= a <= b, without overflowing
// even when b is in the hundreds.
double cosh_ratio(double a, double b) {
    return std::exp(a - b) * (1.0 + std::exp(-2.0 * a)) / (1.0 + std::exp(-2.0 * b));
}

double sinh_ratio(double a, double b) {
    return std::exp(a - b) * (1.0 - std::exp(-2.0 * a)) / (1.0 + std::exp(-2.0 * b));
}

// ---------------------------------------------------------------------------
// Rectangular duct
// ---------------------------------------------------------------------------
//
// Classical series solution for fully developed laminar flow in a duct
// |x| <= W/2, |y| <= H/2, written as an exact transverse parabola plus a
// harmonic cosh*cos correction:
//
//   S(x,y) = 1 - (2y/H)^2
//            - (32/pi^3) sum_{n odd} (-1)^((n-1)/2) / n^3
//              * cosh(n pi x / H) / cosh(n pi W / (2H)) * cos(n pi y / H)
//
// The correction terms decay like exp(-n pi (W/2-|x|)/H) at interior points,
// so the truncated sum is exponentially accurate away from the side walls.
// The field is rescaled so that S maps to U_m at the centerline.
class RectDuctField final : public ChannelField {
public:
    RectDuctField(double W, double H, double U_m, int terms)
        : W_(W), H_(H), U_m_(U_m), terms_(terms) {
        check_positive(W, "W");
        check_positive(H, "H");
        check_positive(U_m, "U_m");
        if (terms < 1) throw domain_error("series_terms must be >= 1");
        scale_ = U_m_ / raw(0.0, 0.0).w;
    }

    FieldKind kind() const override { return FieldKind::rect_duct; }
    double max_velocity() const override { return U_m_; }
    double min_dimension() const override { return std::min(W_, H_); }

    SectionBounds bounding_box() const override {
        return {-0.5 * W_, 0.5 * W_, -0.5 * H_, 0.5 * H_};
    }

    double boundary_distance(double x, double y) const override {
        return std::min(0.5 * W_ - std::abs(x), 0.5 * H_ - std::abs(y));
    }

    double eval_velocity(double x, double y) const override {
        require_inside(x, y);
        return scale_ * raw(x, y).w;
    }

    DerivativeSet eval_derivatives(double x, double y) const override {
        require_strict_interior(x, y);
        DerivativeSet d = raw(x, y);
        d.w *= scale_;
        d.w_x *= scale_;
        d.w_y *= scale_;
        d.w_xx *= scale_;
        d.w_yy *= scale_;
        d.w_xy *= scale_;
        return d;
    }

private:
    DerivativeSet raw(double x, double y) const {
        constexpr double pi = std::numbers::pi;
        const double eta = 2.0 * y / H_;

        DerivativeSet d;
        d.w = 1.0 - eta * eta;
        d.w_y = -8.0 * y / (H_ * H_);
        d.w_yy = -8.0 / (H_ * H_);

        const double sx = x < 0.0 ? -1.0 : 1.0;
        const double ax = std::abs(x);
        for (int k = 0; k < terms_; ++k) {
            const int n = 2 * k + 1;
            const double alpha = n * pi / H_;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            const double coeff = (32.0 / (pi * pi * pi)) * sign / (n * n * n);
            const double b = alpha * 0.5 * W_;
            const double ch = cosh_ratio(alpha * ax, b);
            const double sh = sx * sinh_ratio(alpha * ax, b);
            const double c = std::cos(alpha * y);
            const double s = std::sin(alpha * y);

            d.w -= coeff * ch * c;
            d.w_x -= coeff * alpha * sh * c;
            d.w_y += coeff * alpha * ch * s;
            d.w_xx -= coeff * alpha * alpha * ch * c;
            d.w_yy += coeff * alpha * alpha * ch * c;
            d.w_xy += coeff * alpha * alpha * sh * s;
        }
        return d;
    }

    double W_, H_, U_m_;
    int terms_;
    double scale_;
};

// ---------------------------------------------------------------------------
// Circular pipe: exact paraboloid
// ---------------------------------------------------------------------------
class CircularField final : public ChannelField {
public:
    CircularField(double D, double U_m) : D_(D), U_m_(U_m) {
        check_positive(D, "D");
        check_positive(U_m, "U_m");
    }

    FieldKind kind() const override { return FieldKind::circular; }
    double max_velocity() const override { return U_m_; }
    double min_dimension() const override { return D_; }

    SectionBounds bounding_box() const override {
        return {-0.5 * D_, 0.5 * D_, -0.5 * D_, 0.5 * D_};
    }

    double boundary_distance(double x, double y) const override {
        return 0.5 * D_ - std::hypot(x, y);
    }

    double eval_velocity(double x, double y) const override {
        require_inside(x, y);
        const double q = 4.0 * (x * x + y * y) / (D_ * D_);
        return U_m_ * (1.0 - q);
    }

    DerivativeSet eval_derivatives(double x, double y) const override {
        require_strict_interior(x, y);
        const double c = -8.0 * U_m_ / (D_ * D_);
        DerivativeSet d;
        d.w = U_m_ * (1.0 - 4.0 * (x * x + y * y) / (D_ * D_));
        d.w_x = c * x;
        d.w_y = c * y;
        d.w_xx = c;
        d.w_yy = c;
        d.w_xy = 0.0;
        return d;
    }

private:
    double D_, U_m_;
};

// ---------------------------------------------------------------------------
// Equilateral triangle: exact cubic solution
// ---------------------------------------------------------------------------
//
// With the centroid at the origin and one vertex on +y, the three wall lines
// sit at inradius r_i = s / (2 sqrt(3)). Writing L_i for the distance to wall
// line i (positive inside), the velocity is proportional to L1*L2*L3 -- the
// one non-trivial cross-section where the Poisson problem has a polynomial
// solution. The product is maximal at the centroid (L1+L2+L3 is constant).
class TriangleField final : public ChannelField {
public:
    TriangleField(double s, double U_m) : s_(s), U_m_(U_m) {
        check_positive(s, "s");
        check_positive(U_m, "U_m");
        const double r_i = s_ / (2.0 * std::sqrt(3.0));
        // Wall half-planes L_i = r_i - (a_i x + b_i y); outward normals
        // (a_i, b_i) point at 270, 30, 150 degrees.
        a_ = {0.0, std::sqrt(3.0) / 2.0, -std::sqrt(3.0) / 2.0};
        b_ = {-1.0, 0.5, 0.5};
        r_i_ = r_i;
        scale_ = U_m_ / (r_i * r_i * r_i);
    }

    FieldKind kind() const override { return FieldKind::equilateral_triangle; }
    double max_velocity() const override { return U_m_; }
    double min_dimension() const override { return 2.0 * r_i_; }

    SectionBounds bounding_box() const override {
        // base at y = -r_i, apex at (0, 2 r_i)
        return {-0.5 * s_, 0.5 * s_, -r_i_, 2.0 * r_i_};
    }

    double boundary_distance(double x, double y) const override {
        double d = std::numeric_limits<double>::max();
        for (int i = 0; i < 3; ++i) d = std::min(d, wall_dist(i, x, y));
        return d;
    }

    double eval_velocity(double x, double y) const override {
        require_inside(x, y);
        return scale_ * wall_dist(0, x, y) * wall_dist(1, x, y) * wall_dist(2, x, y);
    }

    DerivativeSet eval_derivatives(double x, double y) const override {
        require_strict_interior(x, y);
        const double L1 = wall_dist(0, x, y);
        const double L2 = wall_dist(1, x, y);
        const double L3 = wall_dist(2, x, y);
        // grad L_i = (-a_i, -b_i); product rule on L1 L2 L3.
        const double g1x = -a_[0], g2x = -a_[1], g3x = -a_[2];
        const double g1y = -b_[0], g2y = -b_[1], g3y = -b_[2];

        DerivativeSet d;
        d.w = scale_ * L1 * L2 * L3;
        d.w_x = scale_ * (g1x * L2 * L3 + g2x * L1 * L3 + g3x * L1 * L2);
        d.w_y = scale_ * (g1y * L2 * L3 + g2y * L1 * L3 + g3y * L1 * L2);
        d.w_xx = 2.0 * scale_ * (g1x * g2x * L3 + g1x * g3x * L2 + g2x * g3x * L1);
        d.w_yy = 2.0 * scale_ * (g1y * g2y * L3 + g1y * g3y * L2 + g2y * g3y * L1);
        d.w_xy = scale_ * ((g1x * g2y + g2x * g1y) * L3 + (g1x * g3y + g3x * g1y) * L2 +
                           (g2x * g3y + g3x * g2y) * L1);
        return d;
    }

private:
    double wall_dist(int i, double x, double y) const {
        return r_i_ - (a_[static_cast<size_t>(i)] * x + b_[static_cast<size_t>(i)] * y);
    }

    double s_, U_m_;
    std::array<double, 3> a_{}, b_{};
    double r_i_ = 0.0;
    double scale_ = 0.0;
};

} // namespace

std::unique_ptr<ChannelField> rect_duct_field(double W, double H, double U_m,
                                              int series_terms) {
    return std::make_unique<RectDuctField>(W, H, U_m, series_terms);
}

std::unique_ptr<ChannelField> circular_field(double D, double U_m) {
    return std::make_unique<CircularField>(D, U_m);
}

std::unique_ptr<ChannelField> equilateral_triangle_field(double s, double U_m) {
    return std::make_unique<TriangleField>(s, U_m);
}

} // namespace liftnet
