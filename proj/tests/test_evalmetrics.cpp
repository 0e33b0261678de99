#include <doctest.h>

#include <liftnet/errors.hpp>
#include <liftnet/evalmetrics.hpp>

#include <cmath>
#include <random>

using namespace liftnet;

namespace {

// identity-on-features net: 6 -> 2 linear selecting (x0, x1), no hidden layers
NetworkParams passthrough_net() {
    NetworkParams p = init_network({6, 2}, 1);
    std::fill(p.weights[0].begin(), p.weights[0].end(), 0.0);
    p.weights[0][0 * 6 + 0] = 1.0;
    p.weights[0][1 * 6 + 1] = 1.0;
    p.biases[0] = {0.0, 0.0};
    return p;
}

// batch whose first two features carry the prediction the passthrough makes
Batch paired_batch(const std::vector<std::pair<LiftCoefficient, LiftCoefficient>>& io) {
    Batch b;
    b.in = 6;
    b.out = 2;
    for (const auto& [pred, truth] : io) {
        const double x[6] = {pred.C_Lx, pred.C_Ly, 0, 0, 0, 0};
        const double y[2] = {truth.C_Lx, truth.C_Ly};
        b.push_row(x, y);
    }
    return b;
}

} // namespace

TEST_CASE("angular error: basics and clamping") {
    CHECK(angular_error_deg({0.3, 0.4}, {0.3, 0.4}) == 0.0);
    CHECK(angular_error_deg({1, 0}, {0, 1}) == doctest::Approx(90.0).epsilon(1e-13));
    CHECK(angular_error_deg({1, 0}, {-2, 0}) == doctest::Approx(180.0).epsilon(1e-13));
    CHECK(angular_error_deg({1, 0}, {1 + 1e-16, 0}) == 0.0); // cosine clamped
    CHECK(angular_error_deg({1, 1}, {3, 3}) < 1e-5);
    CHECK_THROWS_AS((void)angular_error_deg({0, 0}, {1, 0}), undefined_metric_error);
    CHECK_THROWS_AS((void)angular_error_deg({1, 0}, {0, 0}), undefined_metric_error);
}

TEST_CASE("angular error: invariant under joint rotation and positive scaling") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0), sc(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
        LiftCoefficient a{u(gen), u(gen)}, b{u(gen), u(gen)};
        if (std::hypot(a.C_Lx, a.C_Ly) < 1e-3 || std::hypot(b.C_Lx, b.C_Ly) < 1e-3)
            continue;
        const double base = angular_error_deg(a, b);
        const double th = 3.0 * u(gen);
        const double c = std::cos(th), s = std::sin(th);
        LiftCoefficient ar{c * a.C_Lx - s * a.C_Ly, s * a.C_Lx + c * a.C_Ly};
        LiftCoefficient br{c * b.C_Lx - s * b.C_Ly, s * b.C_Lx + c * b.C_Ly};
        CHECK(std::abs(angular_error_deg(ar, br) - base) < 1e-9);
        const double k = sc(gen);
        LiftCoefficient as{k * a.C_Lx, k * a.C_Ly};
        CHECK(std::abs(angular_error_deg(as, b) - base) < 1e-9);
    }
}

TEST_CASE("magnitude error: basics") {
    CHECK(magnitude_error_pct({0.3, -0.4}, {0.3, -0.4}) == 0.0);
    CHECK(magnitude_error_pct({0.3, -0.4}, {0.6, -0.8}) == doctest::Approx(100.0).epsilon(1e-13));
    CHECK(magnitude_error_pct({0.3, -0.4}, {0, 0}) == doctest::Approx(100.0).epsilon(1e-13));
    // rotation of both vectors leaves it unchanged
    CHECK(magnitude_error_pct({0.5, 0}, {0, 0.4}) ==
          doctest::Approx(magnitude_error_pct({0, 0.5}, {-0.4, 0})).epsilon(1e-12));
    CHECK_THROWS_AS((void)magnitude_error_pct({0, 0}, {1, 0}), undefined_metric_error);
}

TEST_CASE("percentile: frozen type-7 interpolation values") {
    // reference values from an independent statistics library
    const std::vector<double> sorted = {1, 2, 3, 4, 6, 7, 9};
    CHECK(percentile(sorted, 0) == 1.0);
    CHECK(percentile(sorted, 25) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(percentile(sorted, 37.5) == doctest::Approx(3.25).epsilon(1e-15));
    CHECK(percentile(sorted, 50) == 4.0);
    CHECK(percentile(sorted, 90) == doctest::Approx(7.8).epsilon(1e-15));
    CHECK(percentile(sorted, 100) == 9.0);
    CHECK_THROWS_AS((void)percentile({}, 50), domain_error);
    CHECK_THROWS_AS((void)percentile(sorted, -1), domain_error);
    CHECK_THROWS_AS((void)percentile(sorted, 101), domain_error);
}

TEST_CASE("evaluate: perfect predictor") {
    NetworkParams net = passthrough_net();
    Batch b = paired_batch({{{0.1, 0.2}, {0.1, 0.2}},
                            {{-0.3, 0.4}, {-0.3, 0.4}},
                            {{0.5, -0.6}, {0.5, -0.6}}});
    EvalReport r = evaluate(net, b);
    CHECK(r.mse == 0.0);
    CHECK(r.r2_x == 1.0);
    CHECK(r.r2_y == 1.0);
    CHECK(r.angular_p50 == 0.0);
    CHECK(r.angular_p90 == 0.0);
    CHECK(r.magnitude_p50 == 0.0);
    CHECK(r.magnitude_p90 == 0.0);
    CHECK(r.count == 3);
    CHECK(r.excluded_zero_true == 0);
    CHECK(r.excluded_zero_pred == 0);
}

TEST_CASE("evaluate: constant-mean predictor has zero R^2") {
    // truths with mean (0.2, -0.1); predictor always answers the mean
    std::vector<std::pair<LiftCoefficient, LiftCoefficient>> io;
    const LiftCoefficient mean{0.2, -0.1};
    io.push_back({mean, {0.1, -0.3}});
    io.push_back({mean, {0.3, 0.1}});
    io.push_back({mean, {0.2, -0.1}});
    EvalReport r = evaluate(passthrough_net(), paired_batch(io));
    CHECK(std::abs(r.r2_x) < 1e-12);
    CHECK(std::abs(r.r2_y) < 1e-12);
}

TEST_CASE("evaluate: mse equals the training loss on the same set") {
    NetworkParams net = init_network({6, 16, 2}, 7);
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Batch b;
    b.in = 6;
    b.out = 2;
    for (int i = 0; i < 40; ++i) {
        double x[6], y[2];
        for (double& v : x) v = u(gen);
        for (double& v : y) v = 0.1 * u(gen);
        b.push_row(x, y);
    }
    EvalReport r = evaluate(net, b);
    CHECK(r.mse == doctest::Approx(loss_mse(net, b)).epsilon(1e-12));
}

TEST_CASE("evaluate: zero-vector exclusion policy") {
    // one zero truth (excluded from angle+magnitude), one zero prediction
    // (excluded from angle only), two clean samples
    std::vector<std::pair<LiftCoefficient, LiftCoefficient>> io;
    io.push_back({{0.1, 0.0}, {0.0, 0.0}});   // zero truth
    io.push_back({{0.0, 0.0}, {0.2, 0.0}});   // zero prediction
    io.push_back({{0.4, 0.0}, {0.2, 0.0}});   // magnitude error 100%
    io.push_back({{0.0, 0.3}, {0.0, 0.3}});   // perfect
    EvalReport r = evaluate(passthrough_net(), paired_batch(io));
    CHECK(r.count == 4);
    CHECK(r.excluded_zero_true == 1);
    CHECK(r.excluded_zero_pred == 1);
    CHECK(r.angular_curve_deg.size() == 2);    // two clean angle samples
    CHECK(r.magnitude_curve_pct.size() == 3);  // zero-pred still has magnitude
    CHECK(r.magnitude_curve_pct.back() == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("evaluate: percentile curve endpoints are min and max") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<LiftCoefficient, LiftCoefficient>> io;
    for (int i = 0; i < 25; ++i)
        io.push_back({{u(gen), u(gen)}, {u(gen), u(gen)}});
    EvalReport r = evaluate(passthrough_net(), paired_batch(io));
    REQUIRE(!r.angular_curve_deg.empty());
    for (size_t i = 1; i < r.angular_curve_deg.size(); ++i)
        CHECK(r.angular_curve_deg[i - 1] <= r.angular_curve_deg[i]);
    CHECK(percentile(r.angular_curve_deg, 0) == r.angular_curve_deg.front());
    CHECK(percentile(r.angular_curve_deg, 100) == r.angular_curve_deg.back());
    for (double v : r.angular_curve_deg) {
        CHECK(v >= 0.0);
        CHECK(v <= 180.0);
    }
    for (double v : r.magnitude_curve_pct) CHECK(v >= 0.0);
}

TEST_CASE("evaluate: rejects empty and mis-shaped batches") {
    Batch empty;
    empty.in = 6;
    empty.out = 2;
    CHECK_THROWS_AS((void)evaluate(passthrough_net(), empty), domain_error);

    NetworkParams wrong = init_network({6, 3}, 1);
    Batch b = paired_batch({{{0.1, 0.2}, {0.1, 0.2}}});
    CHECK_THROWS_AS((void)evaluate(wrong, b), shape_error);
}
