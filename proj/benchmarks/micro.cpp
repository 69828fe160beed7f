#include <benchmark/benchmark.h>

#include "sdfshadow/jfa.hpp"
#include "sdfshadow/pipeline.hpp"
#include "sdfshadow/raymarch.hpp"
#include "sdfshadow/raysample.hpp"
#include "sdfshadow/scene.hpp"
#include "sdfshadow/voxelize.hpp"

using namespace sdfshadow;

namespace {

// Sphere scene at size S after a few frames, shared by the benchmarks.
const Pipeline& warm_pipeline() {
    static const Pipeline p = [] {
        PipelineConfig pc;
        const SizePreset s = size_preset("S");
        pc.coarse = s.coarse;
        pc.fine = s.fine;
        Pipeline out(make_scene("sphere"), pc);
        for (std::uint64_t f = 0; f < 4; ++f) out.step(f);
        return out;
    }();
    return p;
}

void BM_BvhOcclusion(benchmark::State& state) {
    const BvhIndex& bvh = warm_pipeline().geometry().bvh;
    Rng rng(1);
    for (auto _ : state) {
        const Vec3 o{rng.uniform() * 4 - 2, 0.01, rng.uniform() * 4 - 2};
        const Vec3 d = uniform_sphere(rng.uniform(), rng.uniform());
        benchmark::DoNotOptimize(bvh.occluded(o, {d.x, std::abs(d.y), d.z}, kInfinity));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BvhOcclusion);

void BM_Voxelize(benchmark::State& state) {
    const Pipeline& p = warm_pipeline();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(voxelize(p.geometry().mesh, {n, n, n}, p.scene().bounds));
}
BENCHMARK(BM_Voxelize)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_JumpFlood(benchmark::State& state) {
    const Pipeline& p = warm_pipeline();
    const int n = static_cast<int>(state.range(0));
    const VoxelGrid vox = voxelize(p.geometry().mesh, {n, n, n}, p.scene().bounds);
    for (auto _ : state) benchmark::DoNotOptimize(jfa_run(vox));
}
BENCHMARK(BM_JumpFlood)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_UpdateFine(benchmark::State& state) {
    const Pipeline& p = warm_pipeline();
    SamplingParams sp;
    sp.rays_per_texel = static_cast<int>(state.range(0));
    FineFieldBuilder builder(p.fine_grid(), sp);
    std::uint64_t frame = 0;
    for (auto _ : state) benchmark::DoNotOptimize(builder.update(p.coarse(), p.geometry().bvh, frame++));
}
BENCHMARK(BM_UpdateFine)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Resample(benchmark::State& state) {
    const Pipeline& p = warm_pipeline();
    for (auto _ : state) benchmark::DoNotOptimize(resample(p.coarse(), p.fine_grid()));
}
BENCHMARK(BM_Resample)->Unit(benchmark::kMillisecond);

void BM_SoftShadow(benchmark::State& state) {
    const Pipeline& p = warm_pipeline();
    const DistanceField fine = p.fine();
    const Light& light = p.scene().lights.front();
    MarchParams mp = MarchParams::for_field(fine.grid);
    mp.light_angle = light.angular_radius;
    Rng rng(2);
    for (auto _ : state) {
        const Vec3 q{rng.uniform() * 2 - 1.5, 0.0, rng.uniform() * 2 - 1.5};
        benchmark::DoNotOptimize(soft_shadow(fine, q, {0, 1, 0}, light.direction, mp));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SoftShadow);

}  // namespace

BENCHMARK_MAIN();
