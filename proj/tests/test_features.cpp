#include <doctest.h>

#include <liftnet/errors.hpp>
#include <liftnet/features.hpp>
#include <liftnet/flowfield.hpp>

#include <cmath>
#include <numbers>

using namespace liftnet;

TEST_CASE("taylor_reconstruct: zero offset returns w") {
    DerivativeSet d{0.7, 100.0, -50.0, 1e6, 2e6, -3e5};
    CHECK(taylor_reconstruct(d, 0.0, 0.0) == 0.7);
}

TEST_CASE("taylor_reconstruct: exact on degree-2 polynomials") {
    // synthetic quadratic w(x,y) = 2 + 3x - y + 4x^2 + 5y^2 + 6xy around (0.1, -0.2)
    auto w = [](double x, double y) {
        return 2.0 + 3.0 * x - y + 4.0 * x * x + 5.0 * y * y + 6.0 * x * y;
    };
    const double x0 = 0.1, y0 = -0.2;
    DerivativeSet d{w(x0, y0),
                    3.0 + 8.0 * x0 + 6.0 * y0,
                    -1.0 + 10.0 * y0 + 6.0 * x0,
                    8.0, 10.0, 6.0};
    for (int k = 0; k < 12; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / 12.0;
        const double dx = 0.05 * std::cos(ang), dy = 0.05 * std::sin(ang);
        CHECK(taylor_reconstruct(d, dx, dy)
              == doctest::Approx(w(x0 + dx, y0 + dy)).epsilon(1e-14));
    }
}

TEST_CASE("taylor_reconstruct: circular field is recovered exactly on a circumference") {
    auto f = circular_field(100e-6, 1.0);
    const double x0 = 12e-6, y0 = -7e-6, a = 10e-6;
    DerivativeSet d = f->eval_derivatives(x0, y0);
    for (int k = 0; k < 36; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / 36.0;
        const double dx = 0.5 * a * std::cos(ang), dy = 0.5 * a * std::sin(ang);
        const double exact = f->eval_velocity(x0 + dx, y0 + dy);
        CHECK(std::abs(taylor_reconstruct(d, dx, dy) - exact) < 1e-12 * exact);
    }
}

TEST_CASE("nondim_features: direct substitution") {
    DerivativeSet d{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    FeatureVector f = nondim_features(d, 1000.0, 1e-3, 10e-6);
    CHECK(f.Re_p == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(f.wbar_x == 0.0);
    CHECK(f.wbar_y == 0.0);
    CHECK(f.wbar_xx == 0.0);
    CHECK(f.wbar_yy == 0.0);
    CHECK(f.wbar_xy == 0.0);
}

TEST_CASE("nondim_features: circular-field example values") {
    auto field = circular_field(100e-6, 1.0);
    DerivativeSet d = field->eval_derivatives(10e-6, 0.0);
    CHECK(d.w == doctest::Approx(0.96).epsilon(1e-14));
    CHECK(d.w_x == doctest::Approx(-8e3).epsilon(1e-14));
    CHECK(d.w_y == 0.0);
    FeatureVector f = nondim_features(d, 1000.0, 1e-3, 10e-6);
    CHECK(f.Re_p == doctest::Approx(9.6).epsilon(1e-14));
    CHECK(f.wbar_x == doctest::Approx(-1.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("nondim_features: linear in the derivative entries, Re_p unaffected") {
    DerivativeSet d{0.5, 200.0, -100.0, 3e6, -1e6, 5e5};
    FeatureVector f1 = nondim_features(d, 1000.0, 1e-3, 5e-6);
    DerivativeSet ds = d;
    const double lam = 3.7;
    ds.w_x *= lam; ds.w_y *= lam; ds.w_xx *= lam; ds.w_yy *= lam; ds.w_xy *= lam;
    FeatureVector f2 = nondim_features(ds, 1000.0, 1e-3, 5e-6);
    CHECK(f2.Re_p == f1.Re_p);
    CHECK(f2.wbar_x == doctest::Approx(lam * f1.wbar_x).epsilon(1e-14));
    CHECK(f2.wbar_y == doctest::Approx(lam * f1.wbar_y).epsilon(1e-14));
    CHECK(f2.wbar_xx == doctest::Approx(lam * f1.wbar_xx).epsilon(1e-14));
    CHECK(f2.wbar_yy == doctest::Approx(lam * f1.wbar_yy).epsilon(1e-14));
    CHECK(f2.wbar_xy == doctest::Approx(lam * f1.wbar_xy).epsilon(1e-14));
}

TEST_CASE("nondim_features: unit-rescaling invariance") {
    // lengths x lambda with w fixed: a -> lambda a, first derivatives /lambda,
    // second derivatives /lambda^2, and mu -> lambda mu keeps Re_p fixed too.
    DerivativeSet d{0.8, 150.0, -75.0, 2e6, 1e6, -4e5};
    const double lam = 2.5;
    DerivativeSet dr{0.8, 150.0 / lam, -75.0 / lam, 2e6 / (lam * lam), 1e6 / (lam * lam),
                     -4e5 / (lam * lam)};
    FeatureVector f1 = nondim_features(d, 1000.0, 1e-3, 5e-6);
    FeatureVector f2 = nondim_features(dr, 1000.0, lam * 1e-3, lam * 5e-6);
    CHECK(f2.Re_p == doctest::Approx(f1.Re_p).epsilon(1e-14));
    CHECK(f2.wbar_x == doctest::Approx(f1.wbar_x).epsilon(1e-14));
    CHECK(f2.wbar_y == doctest::Approx(f1.wbar_y).epsilon(1e-14));
    CHECK(f2.wbar_xx == doctest::Approx(f1.wbar_xx).epsilon(1e-14));
    CHECK(f2.wbar_yy == doctest::Approx(f1.wbar_yy).epsilon(1e-14));
    CHECK(f2.wbar_xy == doctest::Approx(f1.wbar_xy).epsilon(1e-14));
}

TEST_CASE("nondim_features: stagnation and bad-parameter rejection") {
    DerivativeSet d{0.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS((void)nondim_features(d, 1000.0, 1e-3, 1e-6), degenerate_point_error);
    d.w = -0.1;
    CHECK_THROWS_AS((void)nondim_features(d, 1000.0, 1e-3, 1e-6), degenerate_point_error);
    d.w = 1.0;
    CHECK_THROWS_AS((void)nondim_features(d, -1.0, 1e-3, 1e-6), domain_error);
    CHECK_THROWS_AS((void)nondim_features(d, 1000.0, 0.0, 1e-6), domain_error);
    CHECK_THROWS_AS((void)nondim_features(d, 1000.0, 1e-3, -1e-6), domain_error);
}

TEST_CASE("nondim_target and dim_lift: examples and inverse pair") {
    LiftCoefficient c = nondim_target({0.0, 0.0}, 1000.0, 1.0, 10e-6);
    CHECK(c.C_Lx == 0.0);
    CHECK(c.C_Ly == 0.0);

    c = nondim_target({1e-9, 0.0}, 1000.0, 1.0, 10e-6);
    CHECK(c.C_Lx == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(c.C_Ly == 0.0);

    const Vec2 F{3.2e-9, -1.1e-9};
    LiftCoefficient cc = nondim_target(F, 997.0, 0.83, 7e-6);
    Vec2 back = dim_lift(cc, 997.0, 0.83, 7e-6);
    CHECK(back.x == doctest::Approx(F.x).epsilon(1e-15));
    CHECK(back.y == doctest::Approx(F.y).epsilon(1e-15));

    CHECK_THROWS_AS((void)nondim_target({1.0, 1.0}, 1000.0, 0.0, 1e-6),
                    degenerate_point_error);
    CHECK_THROWS_AS((void)dim_lift(cc, 1000.0, -1.0, 1e-6), degenerate_point_error);
}

TEST_CASE("su_convert: identity, worked example, quadratic velocity scaling") {
    LiftCoefficient one{1.0, 1.0};
    LiftCoefficient id = su_convert(one, 50e-6, 1.0, 1.0, 50e-6);
    CHECK(id.C_Lx == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(id.C_Ly == doctest::Approx(1.0).epsilon(1e-15));

    LiftCoefficient ex = su_convert(one, 5e-6, 1.0, 0.5, 50e-6);
    CHECK(ex.C_Lx == doctest::Approx(0.04).epsilon(1e-14));
    CHECK(ex.C_Ly == doctest::Approx(0.04).epsilon(1e-14));

    LiftCoefficient half = su_convert(one, 5e-6, 1.0, 1.0, 50e-6);
    LiftCoefficient dbl = su_convert(one, 5e-6, 1.0, 2.0, 50e-6);
    CHECK(dbl.C_Lx == doctest::Approx(half.C_Lx / 4.0).epsilon(1e-14));

    CHECK_THROWS_AS((void)su_convert(one, 5e-6, 1.0, 0.0, 50e-6), domain_error);
    CHECK_THROWS_AS((void)su_convert(one, 5e-6, 1.0, 1.0, -1e-6), domain_error);
}
