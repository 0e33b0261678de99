#include "liftnet/field3d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <vector>

#include <json.hpp>

#include "liftnet/csv.hpp"

namespace liftnet {

namespace {

using std::size_t;

class ExtrudedField final : public Field3D {
public:
    ExtrudedField(const ChannelField& section, double length)
        : section_(section), length_(length) {}

    FlowState3D eval(const Vec3& p) const override {
        const DerivativeSet d = section_.eval_derivatives(p.x, p.y);
        // Magnitude of (0,0,w) is |w|; derivatives pick up sign(w).
        const double s = d.w < 0.0 ? -1.0 : 1.0;
        FlowState3D st;
        st.u = {0.0, 0.0, d.w};
        st.G1 = {s * d.w_x, s * d.w_y, 0.0};
        st.G2(0, 0) = s * d.w_xx;
        st.G2(1, 1) = s * d.w_yy;
        st.G2(0, 1) = s * d.w_xy;
        st.G2(1, 0) = s * d.w_xy;
        return st;
    }

    double boundary_distance(const Vec3& p) const override {
        return section_.boundary_distance(p.x, p.y);
    }

    bool in_domain(const Vec3& p) const override {
        if (!section_.contains(p.x, p.y)) return false;
        if (length_ > 0.0 && (p.z < 0.0 || p.z > length_)) return false;
        return true;
    }

    double reference_speed() const override { return section_.max_velocity(); }

private:
    const ChannelField& section_;
    double length_;
};

class RotatedField final : public Field3D {
public:
    RotatedField(const Field3D& inner, const Mat3& Q, const Vec3& t)
        : inner_(inner), Q_(Q), Qt_(Q.transposed()), t_(t) {}

    FlowState3D eval(const Vec3& p) const override {
        const FlowState3D s = inner_.eval(local(p));
        FlowState3D r;
        r.u = Q_ * s.u;
        r.G1 = Q_ * s.G1;
        r.G2 = Q_ * s.G2 * Qt_;
        return r;
    }

    double boundary_distance(const Vec3& p) const override {
        return inner_.boundary_distance(local(p));
    }

    bool in_domain(const Vec3& p) const override { return inner_.in_domain(local(p)); }

    double reference_speed() const override { return inner_.reference_speed(); }

private:
    Vec3 local(const Vec3& p) const { return Qt_ * (p - t_); }

    const Field3D& inner_;
    Mat3 Q_, Qt_;
    Vec3 t_;
};

// Quadratic Lagrange basis over three knots, with first/second derivatives.
void quad_basis(const double* t, double q, double* l, double* l1, double* l2) {
    for (int i = 0; i < 3; ++i) {
        const double ta = t[(i + 1) % 3];
        const double tb = t[(i + 2) % 3];
        const double den = (t[i] - ta) * (t[i] - tb);
        l[i] = (q - ta) * (q - tb) / den;
        l1[i] = (2.0 * q - ta - tb) / den;
        l2[i] = 2.0 / den;
    }
}

class GriddedField3D final : public Field3D {
public:
    GriddedField3D(std::vector<double> xs, std::vector<double> ys,
                   std::vector<double> zs, std::vector<std::vector<double>> comps)
        : x_(std::move(xs)), y_(std::move(ys)), z_(std::move(zs)),
          comps_(std::move(comps)) {
        for (const auto* axis : {&x_, &y_, &z_}) {
            if (axis->size() < 3)
                throw domain_error("3D grid needs at least 3 nodes per axis");
            for (size_t i = 0; i + 1 < axis->size(); ++i)
                if (!((*axis)[i] < (*axis)[i + 1]))
                    throw domain_error("grid coordinates must be strictly increasing");
        }
        ref_speed_ = 0.0;
        for (const auto& c : comps_)
            for (double v : c) {
                if (!std::isfinite(v)) throw domain_error("non-finite node velocity");
                ref_speed_ = std::max(ref_speed_, std::abs(v));
            }
        if (ref_speed_ == 0.0) throw domain_error("3D field is identically zero");
    }

    FlowState3D eval(const Vec3& p) const override {
        if (!in_domain(p))
            throw out_of_domain_error("point outside the 3D grid");

        const size_t ci = center(x_, p.x);
        const size_t cj = center(y_, p.y);
        const size_t ck = center(z_, p.z);
        double lx[3], lx1[3], lx2[3], ly[3], ly1[3], ly2[3], lz[3], lz1[3], lz2[3];
        quad_basis(&x_[ci - 1], p.x, lx, lx1, lx2);
        quad_basis(&y_[cj - 1], p.y, ly, ly1, ly2);
        quad_basis(&z_[ck - 1], p.z, lz, lz1, lz2);

        // Per component: value, gradient, Hessian (6 unique entries).
        double val[3] = {0, 0, 0};
        double grad[3][3] = {};
        double hess[3][6] = {}; // xx, yy, zz, xy, xz, yz
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
                for (int i = 0; i < 3; ++i) {
                    const size_t node = ((ck - 1 + static_cast<size_t>(k)) * y_.size() +
                                         (cj - 1 + static_cast<size_t>(j))) *
                                            x_.size() +
                                        (ci - 1 + static_cast<size_t>(i));
                    const double bx = lx[i], by = ly[j], bz = lz[k];
                    for (int c = 0; c < 3; ++c) {
                        const double v = comps_[static_cast<size_t>(c)][node];
                        val[c] += v * bx * by * bz;
                        grad[c][0] += v * lx1[i] * by * bz;
                        grad[c][1] += v * bx * ly1[j] * bz;
                        grad[c][2] += v * bx * by * lz1[k];
                        hess[c][0] += v * lx2[i] * by * bz;
                        hess[c][1] += v * bx * ly2[j] * bz;
                        hess[c][2] += v * bx * by * lz2[k];
                        hess[c][3] += v * lx1[i] * ly1[j] * bz;
                        hess[c][4] += v * lx1[i] * by * lz1[k];
                        hess[c][5] += v * bx * ly1[j] * lz1[k];
                    }
                }

        FlowState3D st;
        st.u = {val[0], val[1], val[2]};
        const double U = st.u.norm();
        if (U < 1e-14 * ref_speed_) return st; // zero gradients at stagnation

        // U = sqrt(sum u_c^2):
        //   dU/di      = sum_c u_c du_c/di / U
        //   d2U/di dj  = (sum_c du_c/di du_c/dj + u_c d2u_c/di dj - dU/di dU/dj) / U
        double dU[3];
        for (int i = 0; i < 3; ++i) {
            double s = 0.0;
            for (int c = 0; c < 3; ++c) s += val[c] * grad[c][i];
            dU[i] = s / U;
        }
        st.G1 = {dU[0], dU[1], dU[2]};
        static constexpr int pair_idx[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int c = 0; c < 3; ++c)
                    s += grad[c][i] * grad[c][j] + val[c] * hess[c][pair_idx[i][j]];
                st.G2(i, j) = (s - dU[i] * dU[j]) / U;
            }
        return st;
    }

    double boundary_distance(const Vec3& p) const override {
        const double dx = std::min(p.x - x_.front(), x_.back() - p.x);
        const double dy = std::min(p.y - y_.front(), y_.back() - p.y);
        const double dz = std::min(p.z - z_.front(), z_.back() - p.z);
        return std::min({dx, dy, dz});
    }

    bool in_domain(const Vec3& p) const override {
        return boundary_distance(p) >= 0.0;
    }

    double reference_speed() const override { return ref_speed_; }

private:
    static size_t center(const std::vector<double>& t, double q) {
        auto it = std::upper_bound(t.begin(), t.end(), q);
        size_t i = it == t.begin() ? 0 : static_cast<size_t>(it - t.begin()) - 1;
        if (i + 1 >= t.size()) i = t.size() - 2;
        if (q - t[i] > t[i + 1] - q) ++i;
        return std::clamp<size_t>(i, 1, t.size() - 2);
    }

    std::vector<double> x_, y_, z_;
    std::vector<std::vector<double>> comps_; ///< u, v, w node values
    double ref_speed_ = 0.0;
};

} // namespace

std::unique_ptr<Field3D> extruded_field(const ChannelField& section, double length) {
    return std::make_unique<ExtrudedField>(section, length);
}

std::unique_ptr<Field3D> rotated_field(const Field3D& inner, const Mat3& Q,
                                       const Vec3& t) {
    return std::make_unique<RotatedField>(inner, Q, t);
}

namespace {

// Optional sidecar `<csv>.meta.json`: only SI base units are accepted.
void check_sidecar_units(const std::string& csv_path) {
    const std::string meta_path = csv_path + ".meta.json";
    std::ifstream in(meta_path);
    if (!in) return;
    nlohmann::json meta;
    try {
        in >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw format_error(meta_path + ": " + e.what());
    }
    if (!meta.contains("units")) return;
    const auto& u = meta.at("units");
    const auto expect = [&](const char* key, const char* want) {
        if (u.contains(key) && u.at(key).get<std::string>() != want)
            throw format_error(meta_path + ": unsupported unit for '" +
                               std::string(key) + "', expected " + want);
    };
    for (const char* k : {"x", "y", "z"}) expect(k, "m");
    for (const char* k : {"u", "v", "w"}) expect(k, "m/s");
}

} // namespace

std::unique_ptr<Field3D> load_gridded_field3d(const std::string& csv_path) {
    check_sidecar_units(csv_path);
    const csv::Table t = csv::read_file(csv_path);
    const size_t cols[6] = {t.column("x"), t.column("y"), t.column("z"),
                            t.column("u"), t.column("v"), t.column("w")};

    std::map<double, size_t> xs, ys, zs;
    for (const auto& row : t.rows) {
        xs.emplace(csv::to_double(row[cols[0]]), 0);
        ys.emplace(csv::to_double(row[cols[1]]), 0);
        zs.emplace(csv::to_double(row[cols[2]]), 0);
    }
    auto index_axis = [](std::map<double, size_t>& m, std::vector<double>& axis) {
        axis.reserve(m.size());
        for (auto& [v, idx] : m) {
            idx = axis.size();
            axis.push_back(v);
        }
    };
    std::vector<double> xv, yv, zv;
    index_axis(xs, xv);
    index_axis(ys, yv);
    index_axis(zs, zv);

    const size_t total = xv.size() * yv.size() * zv.size();
    if (t.rows.size() != total)
        throw format_error(csv_path + ": rows do not form a full structured grid");

    std::vector<std::vector<double>> comps(
        3, std::vector<double>(total, std::numeric_limits<double>::quiet_NaN()));
    for (const auto& row : t.rows) {
        const size_t i = xs.at(csv::to_double(row[cols[0]]));
        const size_t j = ys.at(csv::to_double(row[cols[1]]));
        const size_t k = zs.at(csv::to_double(row[cols[2]]));
        const size_t node = (k * yv.size() + j) * xv.size() + i;
        if (!std::isnan(comps[0][node]))
            throw format_error(csv_path + ": duplicate grid node");
        comps[0][node] = csv::to_double(row[cols[3]]);
        comps[1][node] = csv::to_double(row[cols[4]]);
        comps[2][node] = csv::to_double(row[cols[5]]);
    }

    return std::make_unique<GriddedField3D>(std::move(xv), std::move(yv),
                                            std::move(zv), std::move(comps));
}

} // namespace liftnet
