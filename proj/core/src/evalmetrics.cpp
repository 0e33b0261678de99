#include "liftnet/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace liftnet {

double angular_error_deg(const LiftCoefficient& c, const LiftCoefficient& c_hat) {
    const double na = std::hypot(c.C_Lx, c.C_Ly);
    const double nb = std::hypot(c_hat.C_Lx, c_hat.C_Ly);
    if (na == 0.0 || nb == 0.0)
        throw undefined_metric_error("angular error undefined for a zero vector");
    const double cosv = (c.C_Lx * c_hat.C_Lx + c.C_Ly * c_hat.C_Ly) / (na * nb);
    return std::acos(std::clamp(cosv, -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

double magnitude_error_pct(const LiftCoefficient& c, const LiftCoefficient& c_hat) {
    const double na = std::hypot(c.C_Lx, c.C_Ly);
    if (na == 0.0)
        throw undefined_metric_error("magnitude error undefined for a zero true vector");
    const double nb = std::hypot(c_hat.C_Lx, c_hat.C_Ly);
    return std::abs((nb - na) / na) * 100.0;
}

double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw domain_error("percentile of empty data");
    if (!(p >= 0.0) || !(p <= 100.0))
        throw domain_error("percentile must lie in [0, 100]");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p / 100.0;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

EvalReport evaluate(const NetworkParams& net, const Batch& test) {
    if (test.n == 0) throw domain_error("cannot evaluate an empty set");
    if (test.out != 2 || net.output_width() != 2)
        throw shape_error("evaluation expects 2-component lift targets");

    EvalReport rep;
    rep.count = test.n;

    // Single forward pass over the whole set via the loss machinery would
    // discard predictions, so predict row by row (inference is cheap).
    std::vector<LiftCoefficient> pred(test.n), truth(test.n);
    double se = 0.0;
    for (std::size_t i = 0; i < test.n; ++i) {
        std::vector<double> x(test.X.begin() + static_cast<std::ptrdiff_t>(i * test.in),
                              test.X.begin() + static_cast<std::ptrdiff_t>((i + 1) * test.in));
        const std::vector<double> y = forward(net, x);
        pred[i] = {y[0], y[1]};
        truth[i] = {test.Y[i * test.out], test.Y[i * test.out + 1]};
        const double ex = pred[i].C_Lx - truth[i].C_Lx;
        const double ey = pred[i].C_Ly - truth[i].C_Ly;
        se += ex * ex + ey * ey;
    }
    rep.mse = se / static_cast<double>(test.n);

    // Per-component R^2 = 1 - SS_res / SS_tot.
    const auto r2 = [&](auto get) {
        double mean = 0.0;
        for (std::size_t i = 0; i < test.n; ++i) mean += get(truth[i]);
        mean /= static_cast<double>(test.n);
        double ss_tot = 0.0, ss_res = 0.0;
        for (std::size_t i = 0; i < test.n; ++i) {
            const double t = get(truth[i]);
            const double e = get(pred[i]) - t;
            ss_tot += (t - mean) * (t - mean);
            ss_res += e * e;
        }
        if (ss_tot == 0.0)
            return ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
        return 1.0 - ss_res / ss_tot;
    };
    rep.r2_x = r2([](const LiftCoefficient& c) { return c.C_Lx; });
    rep.r2_y = r2([](const LiftCoefficient& c) { return c.C_Ly; });

    for (std::size_t i = 0; i < test.n; ++i) {
        const double nt = std::hypot(truth[i].C_Lx, truth[i].C_Ly);
        const double np = std::hypot(pred[i].C_Lx, pred[i].C_Ly);
        if (nt == 0.0) {
            ++rep.excluded_zero_true;
            continue;
        }
        rep.magnitude_curve_pct.push_back(magnitude_error_pct(truth[i], pred[i]));
        if (np == 0.0) {
            ++rep.excluded_zero_pred;
            continue;
        }
        rep.angular_curve_deg.push_back(angular_error_deg(truth[i], pred[i]));
    }
    std::sort(rep.angular_curve_deg.begin(), rep.angular_curve_deg.end());
    std::sort(rep.magnitude_curve_pct.begin(), rep.magnitude_curve_pct.end());
    if (!rep.angular_curve_deg.empty()) {
        rep.angular_p50 = percentile(rep.angular_curve_deg, 50.0);
        rep.angular_p90 = percentile(rep.angular_curve_deg, 90.0);
    }
    if (!rep.magnitude_curve_pct.empty()) {
        rep.magnitude_p50 = percentile(rep.magnitude_curve_pct, 50.0);
        rep.magnitude_p90 = percentile(rep.magnitude_curve_pct, 90.0);
    }
    return rep;
}

} // namespace liftnet
