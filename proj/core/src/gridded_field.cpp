#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>

#include <json.hpp>

#include "liftnet/csv.hpp"
#include "liftnet/flowfield.hpp"

namespace liftnet {

namespace {

using std::size_t;

// ---------------------------------------------------------------------------
// 1D natural cubic spline machinery
// ---------------------------------------------------------------------------

// Precomputed LU sweep of the natural-spline tridiagonal system for one knot
// vector; the matrix depends only on knot spacing, so repeated solves against
// different value vectors reuse the factorization.
class SplineAxis {
public:
    explicit SplineAxis(std::vector<double> knots) : t_(std::move(knots)) {
        const size_t n = t_.size();
        h_.resize(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) h_[i] = t_[i + 1] - t_[i];
        // Interior equations i = 1..n-2:
        //   (h[i-1]/6) m[i-1] + ((h[i-1]+h[i])/3) m[i] + (h[i]/6) m[i+1] = d[i]
        // Natural ends pin m[0] = m[n-1] = 0.
        if (n > 2) {
            const size_t k = n - 2;
            cp_.resize(k);
            inv_den_.resize(k);
            double prev_cp = 0.0;
            for (size_t i = 0; i < k; ++i) {
                const double a = (i == 0) ? 0.0 : h_[i] / 6.0;
                const double b = (h_[i] + h_[i + 1]) / 3.0;
                const double c = h_[i + 1] / 6.0;
                const double den = b - a * prev_cp;
                inv_den_[i] = 1.0 / den;
                cp_[i] = c * inv_den_[i];
                prev_cp = cp_[i];
            }
        }
    }

    const std::vector<double>& knots() const { return t_; }
    size_t size() const { return t_.size(); }

    /// Natural-spline second derivatives at the knots for values v (with
    /// element stride), written to m (contiguous, size n).
    void second_derivs(const double* v, std::ptrdiff_t stride, double* m) const {
        const size_t n = t_.size();
        m[0] = 0.0;
        m[n - 1] = 0.0;
        if (n == 2) return;
        const size_t k = n - 2;
        // Forward sweep on the RHS, reusing m[1..n-2] as scratch.
        double prev = 0.0;
        for (size_t i = 0; i < k; ++i) {
            const double v0 = v[static_cast<std::ptrdiff_t>(i) * stride];
            const double v1 = v[static_cast<std::ptrdiff_t>(i + 1) * stride];
            const double v2 = v[static_cast<std::ptrdiff_t>(i + 2) * stride];
            const double d = (v2 - v1) / h_[i + 1] - (v1 - v0) / h_[i];
            const double a = (i == 0) ? 0.0 : h_[i] / 6.0;
            prev = (d - a * prev) * inv_den_[i];
            m[i + 1] = prev;
        }
        for (size_t i = k - 1; i > 0; --i) m[i] -= cp_[i - 1] * m[i + 1];
    }

    /// Index of the interval [t[i], t[i+1]] containing q (clamped to valid).
    size_t interval(double q) const {
        auto it = std::upper_bound(t_.begin(), t_.end(), q);
        auto idx = static_cast<size_t>(it - t_.begin());
        if (idx == 0) return 0;
        if (idx >= t_.size()) return t_.size() - 2;
        return idx - 1;
    }

    /// Spline value and derivatives on interval i from knot values/2nd derivs.
    void eval(size_t i, double q, const double* v, std::ptrdiff_t stride,
              const double* m, double& f, double& d1, double& d2) const {
        const double h = h_[i];
        const double A = (t_[i + 1] - q) / h;
        const double B = (q - t_[i]) / h;
        const double vi = v[static_cast<std::ptrdiff_t>(i) * stride];
        const double vj = v[static_cast<std::ptrdiff_t>(i + 1) * stride];
        f = A * vi + B * vj +
            ((A * A * A - A) * m[i] + (B * B * B - B) * m[i + 1]) * h * h / 6.0;
        d1 = (vj - vi) / h +
             (-(3.0 * A * A - 1.0) * m[i] + (3.0 * B * B - 1.0) * m[i + 1]) * h / 6.0;
        d2 = A * m[i] + B * m[i + 1];
    }

private:
    std::vector<double> t_;
    std::vector<double> h_;
    std::vector<double> cp_;
    std::vector<double> inv_den_;
};

// ---------------------------------------------------------------------------
// Mask polygon helpers
// ---------------------------------------------------------------------------

bool point_in_polygon(const std::vector<Vec2>& poly, double x, double y) {
    bool inside = false;
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y > y) != (b.y > y)) {
            const double x_cross = a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double distance_to_polygon(const std::vector<Vec2>& poly, double x, double y) {
    double best = std::numeric_limits<double>::max();
    const size_t n = poly.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[j];
        const Vec2& b = poly[i];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double len2 = ex * ex + ey * ey;
        double t = len2 > 0.0 ? ((x - a.x) * ex + (y - a.y) * ey) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double dx = x - (a.x + t * ex);
        const double dy = y - (a.y + t * ey);
        best = std::min(best, std::hypot(dx, dy));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Gridded field
// ---------------------------------------------------------------------------

class GriddedField final : public ChannelField {
public:
    GriddedField(GriddedFieldTable table, int order)
        : order_(order),
          xaxis_(std::move(table.x)),
          yaxis_(std::move(table.y)),
          w_(std::move(table.w)),
          mask_(std::move(table.mask_polygon)) {
        validate();

        // Nodes outside the wetted mask carry no flow.
        if (!mask_.empty()) {
            for (size_t j = 0; j < ny(); ++j)
                for (size_t i = 0; i < nx(); ++i)
                    if (!point_in_polygon(mask_, xaxis_.knots()[i], yaxis_.knots()[j]))
                        w_[j * nx() + i] = 0.0;
        }

        U_m_ = table.U_m;
        if (U_m_ == 0.0) U_m_ = *std::max_element(w_.begin(), w_.end());
        if (!(U_m_ > 0.0) || !std::isfinite(U_m_))
            throw domain_error("gridded field peak velocity must be positive");

        if (order_ == 3) {
            // One x-spline per grid row; queries then spline the per-row
            // results in y, which reproduces the tensor-product interpolant.
            row_m_.resize(nx() * ny());
            for (size_t j = 0; j < ny(); ++j)
                xaxis_.second_derivs(&w_[j * nx()], 1, &row_m_[j * nx()]);
        }
    }

    FieldKind kind() const override { return FieldKind::gridded; }
    double max_velocity() const override { return U_m_; }

    double min_dimension() const override {
        return std::min(xaxis_.knots().back() - xaxis_.knots().front(),
                        yaxis_.knots().back() - yaxis_.knots().front());
    }

    SectionBounds bounding_box() const override {
        return {xaxis_.knots().front(), xaxis_.knots().back(),
                yaxis_.knots().front(), yaxis_.knots().back()};
    }

    double boundary_distance(double x, double y) const override {
        const double box = std::min(
            std::min(x - xaxis_.knots().front(), xaxis_.knots().back() - x),
            std::min(y - yaxis_.knots().front(), yaxis_.knots().back() - y));
        if (mask_.empty()) return box;
        const double d = distance_to_polygon(mask_, x, y);
        const double signed_d = point_in_polygon(mask_, x, y) ? d : -d;
        // The mask may extend past the sampled grid; never report a point
        // outside the data window as interior.
        return std::min(signed_d, box);
    }

    double eval_velocity(double x, double y) const override {
        require_inside(x, y);
        DerivativeSet d;
        interpolate(x, y, d, /*need_derivs=*/false);
        return d.w;
    }

    DerivativeSet eval_derivatives(double x, double y) const override {
        require_strict_interior(x, y);
        DerivativeSet d;
        interpolate(x, y, d, /*need_derivs=*/true);
        return d;
    }

private:
    size_t nx() const { return xaxis_.size(); }
    size_t ny() const { return yaxis_.size(); }

    void validate() const {
        if (order_ != 2 && order_ != 3)
            throw config_error("interpolation order must be 2 or 3");
        const size_t min_nodes = order_ == 2 ? 3 : 2;
        if (nx() < min_nodes || ny() < min_nodes)
            throw format_error("gridded field needs at least " +
                               std::to_string(min_nodes) + " nodes per axis");
        if (w_.size() != nx() * ny())
            throw format_error("velocity table size != nx * ny");
        for (const auto* axis : {&xaxis_, &yaxis_}) {
            const auto& t = axis->knots();
            for (size_t i = 0; i + 1 < t.size(); ++i)
                if (!(t[i] < t[i + 1]))
                    throw format_error("grid coordinates must be strictly increasing");
        }
        for (double v : w_)
            if (!std::isfinite(v)) throw format_error("non-finite node velocity");
        if (!mask_.empty() && mask_.size() < 3)
            throw format_error("mask polygon needs at least 3 vertices");
    }

    void interpolate(double x, double y, DerivativeSet& d, bool need_derivs) const {
        if (order_ == 3)
            cubic(x, y, d, need_derivs);
        else
            biquadratic(x, y, d);
    }

    void cubic(double x, double y, DerivativeSet& d, bool need_derivs) const {
        const size_t ix = xaxis_.interval(x);
        const size_t iy = yaxis_.interval(y);

        // Per-row spline values (and x-derivatives) at x, then spline those
        // columns in y.
        std::vector<double> f(ny()), g(ny()), h(ny()), m(ny());
        for (size_t j = 0; j < ny(); ++j) {
            double fj, gj, hj;
            xaxis_.eval(ix, x, &w_[j * nx()], 1, &row_m_[j * nx()], fj, gj, hj);
            f[j] = fj;
            g[j] = gj;
            h[j] = hj;
        }

        double d1, d2, ignored;
        yaxis_.second_derivs(f.data(), 1, m.data());
        yaxis_.eval(iy, y, f.data(), 1, m.data(), d.w, d1, d2);
        if (!need_derivs) return;
        d.w_y = d1;
        d.w_yy = d2;

        yaxis_.second_derivs(g.data(), 1, m.data());
        yaxis_.eval(iy, y, g.data(), 1, m.data(), d.w_x, d.w_xy, ignored);

        yaxis_.second_derivs(h.data(), 1, m.data());
        yaxis_.eval(iy, y, h.data(), 1, m.data(), d.w_xx, ignored, ignored);
    }

    // Quadratic Lagrange basis over three knots, with derivatives.
    static void quad_basis(const double* t, double q, double* l, double* l1, double* l2) {
        for (int i = 0; i < 3; ++i) {
            const double ta = t[(i + 1) % 3];
            const double tb = t[(i + 2) % 3];
            const double den = (t[i] - ta) * (t[i] - tb);
            l[i] = (q - ta) * (q - tb) / den;
            l1[i] = (2.0 * q - ta - tb) / den;
            l2[i] = 2.0 / den;
        }
    }

    size_t stencil_center(const SplineAxis& axis, double q) const {
        const auto& t = axis.knots();
        size_t i = axis.interval(q);
        // Nearest node of the bracketing pair, clamped so i-1..i+1 is valid.
        if (q - t[i] > t[i + 1] - q) ++i;
        return std::clamp<size_t>(i, 1, t.size() - 2);
    }

    void biquadratic(double x, double y, DerivativeSet& d) const {
        const size_t ci = stencil_center(xaxis_, x);
        const size_t cj = stencil_center(yaxis_, y);
        double lx[3], lx1[3], lx2[3], ly[3], ly1[3], ly2[3];
        quad_basis(&xaxis_.knots()[ci - 1], x, lx, lx1, lx2);
        quad_basis(&yaxis_.knots()[cj - 1], y, ly, ly1, ly2);

        d = DerivativeSet{};
        for (int j = 0; j < 3; ++j) {
            for (int i = 0; i < 3; ++i) {
                const double v =
                    w_[(cj - 1 + static_cast<size_t>(j)) * nx() + (ci - 1 + static_cast<size_t>(i))];
                d.w += v * lx[i] * ly[j];
                d.w_x += v * lx1[i] * ly[j];
                d.w_y += v * lx[i] * ly1[j];
                d.w_xx += v * lx2[i] * ly[j];
                d.w_yy += v * lx[i] * ly2[j];
                d.w_xy += v * lx1[i] * ly1[j];
            }
        }
    }

    int order_;
    SplineAxis xaxis_;
    SplineAxis yaxis_;
    std::vector<double> w_;
    std::vector<Vec2> mask_;
    std::vector<double> row_m_;
    double U_m_ = 0.0;
};

} // namespace

std::unique_ptr<ChannelField> gridded_field_from_table(GriddedFieldTable table, int order) {
    return std::make_unique<GriddedField>(std::move(table), order);
}

std::unique_ptr<ChannelField> load_gridded_field(const std::string& csv_path, int order) {
    const csv::Table t = csv::read_file(csv_path);
    const size_t cx = t.column("x");
    const size_t cy = t.column("y");
    const size_t cw = t.column("w");

    std::map<double, size_t> xs, ys;
    for (const auto& row : t.rows) {
        xs.emplace(csv::to_double(row[cx]), 0);
        ys.emplace(csv::to_double(row[cy]), 0);
    }
    GriddedFieldTable table;
    table.x.reserve(xs.size());
    table.y.reserve(ys.size());
    for (auto& [v, idx] : xs) {
        idx = table.x.size();
        table.x.push_back(v);
    }
    for (auto& [v, idx] : ys) {
        idx = table.y.size();
        table.y.push_back(v);
    }
    if (t.rows.size() != xs.size() * ys.size())
        throw format_error(csv_path + ": rows do not form a full structured grid (" +
                           std::to_string(t.rows.size()) + " rows, expected " +
                           std::to_string(xs.size() * ys.size()) + ")");

    table.w.assign(xs.size() * ys.size(), std::numeric_limits<double>::quiet_NaN());
    for (const auto& row : t.rows) {
        const size_t i = xs.at(csv::to_double(row[cx]));
        const size_t j = ys.at(csv::to_double(row[cy]));
        double& slot = table.w[j * xs.size() + i];
        if (!std::isnan(slot))
            throw format_error(csv_path + ": duplicate grid node (" + row[cx] + ", " +
                               row[cy] + ")");
        slot = csv::to_double(row[cw]);
    }

    const std::string meta_path = csv_path + ".meta.json";
    std::ifstream meta_in(meta_path);
    if (meta_in) {
        nlohmann::json meta;
        try {
            meta_in >> meta;
        } catch (const nlohmann::json::exception& e) {
            throw format_error(meta_path + ": " + e.what());
        }
        if (meta.contains("U_m")) table.U_m = meta.at("U_m").get<double>();
        if (meta.contains("mask_polygon")) {
            for (const auto& pt : meta.at("mask_polygon")) {
                if (!pt.is_array() || pt.size() != 2)
                    throw format_error(meta_path + ": mask_polygon entries must be [x, y]");
                table.mask_polygon.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
        }
        if (meta.contains("units")) {
            const auto& u = meta.at("units");
            const auto expect = [&](const char* key, const char* want) {
                if (u.contains(key) && u.at(key).get<std::string>() != want)
                    throw format_error(meta_path + ": unsupported unit for '" +
                                       std::string(key) + "', expected " + want);
            };
            expect("x", "m");
            expect("y", "m");
            expect("w", "m/s");
        }
    }

    return gridded_field_from_table(std::move(table), order);
}

} // namespace liftnet
