// Microbenchmarks for the per-sample hot paths: model inference, analytic
// and interpolated field derivative evaluation, the 3D alignment pipeline,
// and dataset augmentation throughput.

#include <benchmark/benchmark.h>

#include <liftnet/dataset.hpp>
#include <liftnet/flowfield.hpp>
#include <liftnet/neuralnet.hpp>
#include <liftnet/rotation3d.hpp>

#include <random>
#include <vector>

using namespace liftnet;

namespace {

FeatureVector probe_features() {
    FeatureVector f;
    f.Re_p = 12.0;
    f.wbar_x = 0.31;
    f.wbar_y = -0.12;
    f.wbar_xx = -0.48;
    f.wbar_yy = -0.52;
    f.wbar_xy = 0.05;
    return f;
}

Batch random_batch(std::size_t n, int in, int out, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    Batch b;
    b.in = static_cast<std::size_t>(in);
    b.out = static_cast<std::size_t>(out);
    b.reserve_rows(n);
    std::vector<double> x(b.in), y(b.out);
    for (std::size_t s = 0; s < n; ++s) {
        for (auto& v : x) v = n01(gen);
        for (auto& v : y) v = n01(gen);
        b.push_row(x.data(), y.data());
    }
    return b;
}

std::unique_ptr<ChannelField> spline_duct(int nodes) {
    auto duct = rect_duct_field(50e-6, 50e-6, 1.4);
    GriddedFieldTable t;
    for (int i = 0; i < nodes; ++i)
        t.x.push_back(-25e-6 + 50e-6 * i / (nodes - 1));
    t.y = t.x;
    t.w.resize(static_cast<std::size_t>(nodes) * nodes);
    for (int j = 0; j < nodes; ++j)
        for (int i = 0; i < nodes; ++i)
            t.w[static_cast<std::size_t>(j) * nodes + i] =
                duct->eval_velocity(t.x[static_cast<std::size_t>(i)],
                                    t.y[static_cast<std::size_t>(j)]);
    return gridded_field_from_table(std::move(t));
}

} // namespace

static void BM_forward_default_arch(benchmark::State& state) {
    const NetworkParams net = init_network({6, 256, 128, 64, 2}, 1);
    const FeatureVector f = probe_features();
    for (auto _ : state) {
        const LiftCoefficient c = forward(net, f);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_forward_default_arch);

static void BM_forward_small_arch(benchmark::State& state) {
    const NetworkParams net = init_network({6, 16, 8, 2}, 1);
    const FeatureVector f = probe_features();
    for (auto _ : state) {
        const LiftCoefficient c = forward(net, f);
        benchmark::DoNotOptimize(c);
    }
}
BENCHMARK(BM_forward_small_arch);

static void BM_train_step_256(benchmark::State& state) {
    NetworkParams net = init_network({6, 256, 128, 64, 2}, 1);
    const Batch b = random_batch(256, 6, 2, 2);
    for (auto _ : state) {
        const Gradients g = backward(net, b);
        benchmark::DoNotOptimize(g);
    }
    state.SetItemsProcessed(state.iterations() * 256);
}
BENCHMARK(BM_train_step_256);

static void BM_duct_series_derivatives(benchmark::State& state) {
    const auto field = rect_duct_field(50e-6, 50e-6, 1.4);
    for (auto _ : state) {
        const DerivativeSet d = field->eval_derivatives(10e-6, 5e-6);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_duct_series_derivatives);

static void BM_circular_derivatives(benchmark::State& state) {
    const auto field = circular_field(80e-6, 1.4);
    for (auto _ : state) {
        const DerivativeSet d = field->eval_derivatives(10e-6, 5e-6);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_circular_derivatives);

static void BM_spline_derivatives(benchmark::State& state) {
    const auto field = spline_duct(41);
    for (auto _ : state) {
        const DerivativeSet d = field->eval_derivatives(10e-6, 5e-6);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(BM_spline_derivatives);

static void BM_lift_3d(benchmark::State& state) {
    const NetworkParams net = init_network({6, 16, 8, 2}, 17);
    const Vec3 u{0.3, -1.2, 0.5};
    GradientSet3D g;
    g.G1 = {3.0e3, -4.0e3, 1.0e3};
    g.G2 = Mat3{{2e6, 5e5, -3e5, 5e5, -1e6, 2e5, -3e5, 2e5, 8e5}};
    for (auto _ : state) {
        const Vec3 F = lift_3d(net, u, g, 1000.0, 1e-3, 10e-6);
        benchmark::DoNotOptimize(F);
    }
}
BENCHMARK(BM_lift_3d);

static void BM_augment_36x(benchmark::State& state) {
    std::vector<LiftSample> base;
    std::mt19937_64 gen(7);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        LiftSample s;
        s.x0 = 1e-6 * n01(gen);
        s.y0 = 1e-6 * n01(gen);
        s.a = 10e-6;
        s.rho = 1000.0;
        s.mu = 1e-3;
        s.U_m = 1.4;
        s.d.w = 1.0;
        s.d.w_x = 3e4 * n01(gen);
        s.d.w_y = 3e4 * n01(gen);
        s.d.w_xx = 1e9 * n01(gen);
        s.d.w_yy = 1e9 * n01(gen);
        s.d.w_xy = 1e9 * n01(gen);
        s.target.C_Lx = n01(gen);
        s.target.C_Ly = n01(gen);
        s.provenance_id = "b" + std::to_string(i);
        base.push_back(s);
    }
    for (auto _ : state) {
        const auto aug = augment(base);
        benchmark::DoNotOptimize(aug);
    }
    state.SetItemsProcessed(state.iterations() * 3600);
}
BENCHMARK(BM_augment_36x);

BENCHMARK_MAIN();
