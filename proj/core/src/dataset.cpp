#include "liftnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "liftnet/csv.hpp"
#include "liftnet/rng.hpp"

namespace liftnet {

namespace {

const char* const kColumns[] = {"x0",   "y0",   "a",    "rho",  "mu",
                                "U_m",  "w",    "w_x",  "w_y",  "w_xx",
                                "w_yy", "w_xy", "C_Lx", "C_Ly", "geometry_tag"};

void check_sample(const LiftSample& s) {
    if (!(s.a > 0.0)) throw domain_error("particle diameter must be positive");
    if (!(s.rho > 0.0) || !(s.mu > 0.0))
        throw domain_error("fluid properties must be positive");
    if (!(s.U_m > 0.0)) throw domain_error("U_m must be positive");
    if (!(s.d.w > stagnation_rel_threshold * s.U_m))
        throw degenerate_point_error("sample at a stagnation point (w = " +
                                     std::to_string(s.d.w) + ")");
    const FeatureVector f = nondim_features(s.d, s.rho, s.mu, s.a);
    for (double v : f.as_array())
        if (!std::isfinite(v)) throw domain_error("non-finite feature");
    if (!std::isfinite(s.target.C_Lx) || !std::isfinite(s.target.C_Ly))
        throw domain_error("non-finite lift target");
}

} // namespace

GeometryTag parse_geometry_tag(const std::string& s) {
    if (s == "R") return GeometryTag::R;
    if (s == "T") return GeometryTag::T;
    if (s == "S") return GeometryTag::S;
    if (s == "P") return GeometryTag::P;
    return GeometryTag::other;
}

std::string to_string(GeometryTag tag) {
    switch (tag) {
    case GeometryTag::R: return "R";
    case GeometryTag::T: return "T";
    case GeometryTag::S: return "S";
    case GeometryTag::P: return "P";
    default: return "other";
    }
}

FeatureVector sample_features(const LiftSample& s) {
    if (!(s.d.w > stagnation_rel_threshold * s.U_m))
        throw degenerate_point_error("stagnation point: w = " + std::to_string(s.d.w) +
                                     " vs U_m = " + std::to_string(s.U_m));
    return nondim_features(s.d, s.rho, s.mu, s.a);
}

std::vector<LiftSample> load_liftmaps(const std::string& path, const LoadOptions& opts,
                                      std::vector<std::string>* skipped) {
    const csv::Table t = csv::read_file(path);

    auto col = [&](const std::string& name) {
        auto it = opts.column_map.find(name);
        return t.column(it != opts.column_map.end() ? it->second : name);
    };

    struct Cols {
        std::size_t x0, y0, a, rho, mu, U_m, w, w_x, w_y, w_xx, w_yy, w_xy, C_Lx,
            C_Ly, tag;
    } c{col("x0"),   col("y0"),   col("a"),    col("rho"), col("mu"),
        col("U_m"),  col("w"),    col("w_x"),  col("w_y"), col("w_xx"),
        col("w_yy"), col("w_xy"), col("C_Lx"), col("C_Ly"), col("geometry_tag")};
    const std::size_t c_H = opts.su_format ? col("H") : 0;

    std::vector<LiftSample> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        // +2: header line plus 1-based numbering.
        const std::string where = path + ":" + std::to_string(r + 2);
        try {
            LiftSample s;
            s.x0 = csv::to_double(row[c.x0]);
            s.y0 = csv::to_double(row[c.y0]);
            s.a = csv::to_double(row[c.a]);
            s.rho = csv::to_double(row[c.rho]);
            s.mu = csv::to_double(row[c.mu]);
            s.U_m = csv::to_double(row[c.U_m]);
            s.d.w = csv::to_double(row[c.w]);
            s.d.w_x = csv::to_double(row[c.w_x]);
            s.d.w_y = csv::to_double(row[c.w_y]);
            s.d.w_xx = csv::to_double(row[c.w_xx]);
            s.d.w_yy = csv::to_double(row[c.w_yy]);
            s.d.w_xy = csv::to_double(row[c.w_xy]);
            s.target.C_Lx = csv::to_double(row[c.C_Lx]);
            s.target.C_Ly = csv::to_double(row[c.C_Ly]);
            s.geometry_tag = parse_geometry_tag(row[c.tag]);
            s.provenance_id = path + ":" + std::to_string(r + 2);
            if (opts.su_format) {
                const double H = csv::to_double(row[c_H]);
                s.target = su_convert(s.target, s.a, s.U_m, s.d.w, H);
            }
            check_sample(s);
            out.push_back(std::move(s));
        } catch (const error& e) {
            if (opts.strict) throw format_error(where + ": " + e.what());
            if (skipped) skipped->push_back(where + ": " + e.what());
        }
    }
    return out;
}

void save_liftmaps(const std::string& path, const std::vector<LiftSample>& samples) {
    csv::Table t;
    t.header.assign(std::begin(kColumns), std::end(kColumns));
    t.rows.reserve(samples.size());
    for (const auto& s : samples) {
        t.rows.push_back({csv::format_double(s.x0), csv::format_double(s.y0),
                          csv::format_double(s.a), csv::format_double(s.rho),
                          csv::format_double(s.mu), csv::format_double(s.U_m),
                          csv::format_double(s.d.w), csv::format_double(s.d.w_x),
                          csv::format_double(s.d.w_y), csv::format_double(s.d.w_xx),
                          csv::format_double(s.d.w_yy), csv::format_double(s.d.w_xy),
                          csv::format_double(s.target.C_Lx),
                          csv::format_double(s.target.C_Ly), to_string(s.geometry_tag)});
    }
    csv::write_file(path, t);
}

LiftSample rotate_sample(const LiftSample& s, double theta) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);

    LiftSample r = s;
    const Vec2 p = rotate2({s.x0, s.y0}, theta);
    r.x0 = p.x;
    r.y0 = p.y;

    const Vec2 g = rotate2({s.d.w_x, s.d.w_y}, theta);
    r.d.w_x = g.x;
    r.d.w_y = g.y;

    // H' = R H R^T for the symmetric Hessian, expanded componentwise.
    const double xx = s.d.w_xx, yy = s.d.w_yy, xy = s.d.w_xy;
    r.d.w_xx = c * c * xx - 2.0 * c * sn * xy + sn * sn * yy;
    r.d.w_yy = sn * sn * xx + 2.0 * c * sn * xy + c * c * yy;
    r.d.w_xy = c * sn * (xx - yy) + (c * c - sn * sn) * xy;

    const Vec2 t = rotate2({s.target.C_Lx, s.target.C_Ly}, theta);
    r.target.C_Lx = t.x;
    r.target.C_Ly = t.y;
    return r;
}

LiftSample flip_sample(const LiftSample& s) {
    LiftSample r = s;
    r.y0 = -s.y0;
    r.d.w_y = -s.d.w_y;
    r.d.w_xy = -s.d.w_xy;
    r.target.C_Ly = -s.target.C_Ly;
    return r;
}

std::vector<LiftSample> augment(const std::vector<LiftSample>& ds, double delta_theta,
                                bool include_flip) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (!(delta_theta > 0.0))
        throw config_error("rotation increment must be positive");
    const double n_real = two_pi / delta_theta;
    const int n = static_cast<int>(std::llround(n_real));
    if (n < 1 || std::abs(n_real - n) > 1e-9 * n)
        throw config_error("rotation increment must divide a full turn evenly");

    std::vector<LiftSample> out;
    out.reserve(ds.size() * static_cast<std::size_t>(n) * (include_flip ? 2 : 1));
    for (const auto& s : ds) {
        for (int k = 0; k < n; ++k) {
            LiftSample rotated = rotate_sample(s, k * delta_theta);
            rotated.provenance_id = s.provenance_id + "#r" + std::to_string(k);
            if (include_flip) {
                LiftSample mirrored = flip_sample(rotated);
                mirrored.provenance_id += "m";
                out.push_back(std::move(rotated));
                out.push_back(std::move(mirrored));
            } else {
                out.push_back(std::move(rotated));
            }
        }
    }
    return out;
}

SplitResult split(const std::vector<LiftSample>& ds, const SplitSpec& spec,
                  bool group_augmented) {
    const double fracs[3] = {spec.train, spec.val, spec.test};
    double sum = 0.0;
    for (double f : fracs) {
        if (!(f > 0.0) || !(f < 1.0))
            throw config_error("split fractions must lie in (0, 1)");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw config_error("split fractions must sum to 1");
    if (ds.size() < 3) throw domain_error("need at least 3 samples to split");

    // Group samples by base provenance id (text before the first '#') so all
    // augmented copies of a source sample land in the same part.
    std::vector<std::vector<std::size_t>> groups;
    if (group_augmented) {
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const std::string& id = ds[i].provenance_id;
            std::string base = id.substr(0, id.find('#'));
            auto [it, inserted] = index.emplace(std::move(base), groups.size());
            if (inserted) groups.emplace_back();
            groups[it->second].push_back(i);
        }
    } else {
        groups.resize(ds.size());
        for (std::size_t i = 0; i < ds.size(); ++i) groups[i] = {i};
    }

    std::mt19937_64 rng(spec.seed);
    pinned_shuffle(groups, rng);

    // Greedy apportionment: each group goes to the part with the largest
    // remaining deficit against its target count. For singleton groups this
    // lands every part within one sample of fraction * |ds|.
    const double n = static_cast<double>(ds.size());
    double deficit[3] = {fracs[0] * n, fracs[1] * n, fracs[2] * n};
    std::vector<int> part_of(ds.size(), 0);
    for (const auto& g : groups) {
        int best = 0;
        for (int k = 1; k < 3; ++k)
            if (deficit[k] > deficit[best]) best = k;
        for (std::size_t idx : g) part_of[idx] = best;
        deficit[best] -= static_cast<double>(g.size());
    }

    // Original dataset order is preserved within each part.
    SplitResult res;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        switch (part_of[i]) {
        case 0: res.train.push_back(ds[i]); break;
        case 1: res.val.push_back(ds[i]); break;
        default: res.test.push_back(ds[i]); break;
        }
    }
    return res;
}

} // namespace liftnet
