#include <doctest.h>

#include <liftnet/errors.hpp>
#include <liftnet/flowfield.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <vector>

using namespace liftnet;

namespace {

GriddedFieldTable smooth_table() {
    // f = sin(1.3x)cos(0.8y) + 0.1xy on a non-uniform 7x6 grid
    GriddedFieldTable t;
    t.x = {0.0, 0.5, 1.1, 1.6, 2.3, 2.8, 3.0};
    t.y = {0.0, 0.6, 1.0, 1.7, 2.2, 2.5};
    t.w.resize(t.x.size() * t.y.size());
    for (size_t j = 0; j < t.y.size(); ++j)
        for (size_t i = 0; i < t.x.size(); ++i)
            t.w[j * t.x.size() + i] =
                std::sin(1.3 * t.x[i]) * std::cos(0.8 * t.y[j]) + 0.1 * t.x[i] * t.y[j];
    t.U_m = 2.0; // explicit reference velocity (field values are not a duct profile)
    return t;
}

} // namespace

TEST_CASE("gridded order 3: matches an independent tensor-product natural bicubic") {
    // Frozen reference values computed with an independent spline library
    // (per-row natural cubics in x, then natural cubics across rows in y).
    auto f = gridded_field_from_table(smooth_table(), 3);

    DerivativeSet d = f->eval_derivatives(0.9, 1.4);
    CHECK(d.w == doctest::Approx(0.52603935430083282).epsilon(1e-12));
    CHECK(d.w_x == doctest::Approx(0.36255055085692134).epsilon(1e-12));
    CHECK(d.w_y == doctest::Approx(-0.56974564093700319).epsilon(1e-12));
    CHECK(d.w_xx == doctest::Approx(-0.66212206218945391).epsilon(1e-12));
    CHECK(d.w_yy == doctest::Approx(-0.24701036499914442).epsilon(1e-12));
    CHECK(d.w_xy == doctest::Approx(-0.26703077894073346).epsilon(1e-12));

    d = f->eval_derivatives(2.05, 0.35);
    CHECK(d.w == doctest::Approx(0.50793238826379428).epsilon(1e-12));
    CHECK(d.w_x == doctest::Approx(-1.061190186855862).epsilon(1e-12));
    CHECK(d.w_y == doctest::Approx(0.11797101878694233).epsilon(1e-12));
    CHECK(d.w_xx == doctest::Approx(-0.72380711174827084).epsilon(1e-12));
    CHECK(d.w_yy == doctest::Approx(-0.20861140453201218).epsilon(1e-12));
    CHECK(d.w_xy == doctest::Approx(0.31871656844641022).epsilon(1e-12));
}

TEST_CASE("gridded order 3: y-constant grid reduces to the 1D natural cubic") {
    // Frozen 1D values: natural cubic through x=[0,.7,1.3,2.2,3.1],
    // v=[.2,1.1,.7,-.4,.5], from an independent spline implementation.
    GriddedFieldTable t;
    t.x = {0.0, 0.7, 1.3, 2.2, 3.1};
    t.y = {0.0, 1.0, 2.0};
    const std::vector<double> v = {0.2, 1.1, 0.7, -0.4, 0.5};
    for (int j = 0; j < 3; ++j) t.w.insert(t.w.end(), v.begin(), v.end());
    t.U_m = 1.5;
    auto f = gridded_field_from_table(std::move(t), 3);

    struct Ref { double q, s, s1, s2; };
    const Ref refs[] = {
        {0.3, 0.70453117789785491, 1.5035452547174963, -1.7822533827535396},
        {1.0, 1.027391372303845, -0.7330502587614186, -2.8309193845298868},
        {2.5, -0.30397577946812093, 0.79602422053187882, 2.7196770595749453},
    };
    for (const Ref& r : refs) {
        DerivativeSet d = f->eval_derivatives(r.q, 1.0);
        CHECK(d.w == doctest::Approx(r.s).epsilon(1e-13));
        CHECK(d.w_x == doctest::Approx(r.s1).epsilon(1e-13));
        CHECK(d.w_xx == doctest::Approx(r.s2).epsilon(1e-13));
        CHECK(std::abs(d.w_y) < 1e-12);
        CHECK(std::abs(d.w_yy) < 1e-12);
        CHECK(std::abs(d.w_xy) < 1e-12);
    }
}

TEST_CASE("gridded: interpolates node values exactly") {
    GriddedFieldTable t = smooth_table();
    auto f = gridded_field_from_table(t, 3);
    for (size_t j = 0; j < t.y.size(); ++j)
        for (size_t i = 0; i < t.x.size(); ++i)
            CHECK(f->eval_velocity(t.x[i], t.y[j])
                  == doctest::Approx(t.w[j * t.x.size() + i]).epsilon(1e-12));
}

TEST_CASE("gridded: constant field has zero derivatives") {
    GriddedFieldTable t;
    t.x = {0.0, 1.0, 2.0, 3.0};
    t.y = {0.0, 1.0, 2.0};
    t.w.assign(12, 3.5);
    t.U_m = 3.5;
    for (int order : {2, 3}) {
        auto f = gridded_field_from_table(t, order);
        DerivativeSet d = f->eval_derivatives(1.3, 0.9);
        CHECK(d.w == doctest::Approx(3.5).epsilon(1e-12));
        CHECK(std::abs(d.w_x) < 1e-9 * 3.5);
        CHECK(std::abs(d.w_y) < 1e-9 * 3.5);
        CHECK(std::abs(d.w_xx) < 1e-9 * 3.5);
        CHECK(std::abs(d.w_yy) < 1e-9 * 3.5);
        CHECK(std::abs(d.w_xy) < 1e-9 * 3.5);
    }
}

TEST_CASE("gridded order 2: reproduces quadratics exactly") {
    GriddedFieldTable t;
    for (int i = 0; i <= 6; ++i) t.x.push_back(0.25 * i);
    for (int j = 0; j <= 5; ++j) t.y.push_back(0.3 * j);
    auto q = [](double x, double y) {
        return 2.0 + 0.5 * x - 0.25 * y + 0.125 * x * x + 0.4 * y * y - 0.3 * x * y;
    };
    for (double yv : t.y)
        for (double xv : t.x) t.w.push_back(q(xv, yv));
    t.U_m = 10.0;
    auto f = gridded_field_from_table(std::move(t), 2);
    DerivativeSet d = f->eval_derivatives(0.77, 0.91);
    CHECK(d.w == doctest::Approx(q(0.77, 0.91)).epsilon(1e-12));
    CHECK(d.w_x == doctest::Approx(0.5 + 0.25 * 0.77 - 0.3 * 0.91).epsilon(1e-12));
    CHECK(d.w_y == doctest::Approx(-0.25 + 0.8 * 0.91 - 0.3 * 0.77).epsilon(1e-12));
    CHECK(d.w_xx == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.w_yy == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(d.w_xy == doctest::Approx(-0.3).epsilon(1e-12));
}

TEST_CASE("gridded from a sampled circular profile recovers the curvature") {
    auto truth = circular_field(100e-6, 1.0);
    GriddedFieldTable t;
    const int n = 101;
    for (int i = 0; i < n; ++i) {
        t.x.push_back(-50e-6 + 100e-6 * i / (n - 1));
        t.y.push_back(-50e-6 + 100e-6 * i / (n - 1));
    }
    for (double yv : t.y)
        for (double xv : t.x) {
            const double r2 = xv * xv + yv * yv;
            t.w.push_back(r2 <= 2.5e-9 ? truth->eval_velocity(xv, yv) : 0.0);
        }
    t.U_m = 0.0; // infer from node maximum
    auto f = gridded_field_from_table(std::move(t), 3);
    CHECK(f->max_velocity() == doctest::Approx(1.0).epsilon(1e-9));
    DerivativeSet d = f->eval_derivatives(1e-7, -1e-7);
    CHECK(d.w_xx == doctest::Approx(-8.0 * 1.0 / (100e-6 * 100e-6)).epsilon(0.01));
    CHECK(d.w_yy == doctest::Approx(-8.0 * 1.0 / (100e-6 * 100e-6)).epsilon(0.01));

    // spline derivatives stay FD-consistent at the looser gridded tolerance
    const double h = 2e-6;
    const double fd_wx = (f->eval_velocity(10e-6 + h, 4e-6) - f->eval_velocity(10e-6 - h, 4e-6)) / (2 * h);
    DerivativeSet di = f->eval_derivatives(10e-6, 4e-6);
    CHECK(di.w_x == doctest::Approx(fd_wx).epsilon(1e-2));
}

TEST_CASE("gridded: mask polygon zeroes exterior nodes and bounds the domain") {
    GriddedFieldTable t;
    for (int i = 0; i <= 10; ++i) t.x.push_back(0.1 * i);
    for (int j = 0; j <= 10; ++j) t.y.push_back(0.1 * j);
    for (double yv : t.y)
        for (double xv : t.x) t.w.push_back(1.0 + xv + yv);
    t.U_m = 3.0;
    // triangular wetted region
    t.mask_polygon = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    auto f = gridded_field_from_table(std::move(t), 3);
    CHECK(f->contains(0.2, 0.2));
    CHECK_FALSE(f->contains(0.9, 0.9));
    CHECK(f->boundary_distance(0.9, 0.9) < 0.0);
    CHECK(f->boundary_distance(0.25, 0.25) > 0.0);
    CHECK_THROWS_AS((void)f->eval_velocity(0.95, 0.95), out_of_domain_error);
}

TEST_CASE("gridded: table validation errors") {
    GriddedFieldTable good = smooth_table();
    CHECK_THROWS_AS((void)gridded_field_from_table(good, 4), config_error);

    GriddedFieldTable bad = smooth_table();
    bad.w[3] = std::nan("");
    CHECK_THROWS_AS((void)gridded_field_from_table(std::move(bad), 3), format_error);

    bad = smooth_table();
    bad.w.pop_back();
    CHECK_THROWS_AS((void)gridded_field_from_table(std::move(bad), 3), format_error);

    bad = smooth_table();
    bad.x[1] = bad.x[2]; // not strictly increasing
    CHECK_THROWS_AS((void)gridded_field_from_table(std::move(bad), 3), format_error);
}

TEST_CASE("gridded: CSV + sidecar metadata loader") {
    const std::string path = "grid_probe.csv";
    {
        std::ofstream f(path);
        f << "x,y,w\n";
        for (int j = 0; j <= 4; ++j)
            for (int i = 0; i <= 4; ++i)
                f << 0.5 * i << "," << 0.5 * j << "," << (1.0 + i + 2 * j) << "\n";
    }
    {
        std::ofstream m(path + ".meta.json");
        m << R"({"U_m": 9.0, "units": {"x": "m", "y": "m", "w": "m/s"}})";
    }
    auto f = load_gridded_field(path, 3);
    CHECK(f->max_velocity() == 9.0);
    CHECK(f->eval_velocity(1.0, 0.5) == doctest::Approx(1.0 + 2.0 + 2.0).epsilon(1e-12));

    // wrong units must be rejected
    {
        std::ofstream m(path + ".meta.json");
        m << R"({"U_m": 9.0, "units": {"x": "mm", "y": "m", "w": "m/s"}})";
    }
    CHECK_THROWS_AS((void)load_gridded_field(path, 3), format_error);

    // duplicate node rows must be rejected
    {
        std::ofstream f2(path, std::ios::app);
        f2 << "0,0,1\n";
        std::ofstream m(path + ".meta.json");
        m << R"({"U_m": 9.0})";
    }
    CHECK_THROWS_AS((void)load_gridded_field(path, 3), format_error);

    std::remove(path.c_str());
    std::remove((path + ".meta.json").c_str());
}
