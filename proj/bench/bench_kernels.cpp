// Serial reference vs OpenMP for the all-pairs kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "foldnet/foldsim.hpp"
#include "foldnet/kernels.hpp"
#include "foldnet/mesh.hpp"
#include "foldnet/unfold.hpp"

using namespace foldnet;

namespace {

std::vector<kernels::Loop2> quads(int n) {
  std::mt19937_64 rng(42);
  const double span = 6.0 * std::sqrt(static_cast<double>(n));
  std::uniform_real_distribution<double> pos(0.0, span), size(1.0, 6.0);
  std::vector<kernels::Loop2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    double x = pos(rng), y = pos(rng), w = size(rng), h = size(rng);
    out.push_back({{x, y}, {x, y + h}, {x + w, y + h}, {x + w, y}});
  }
  return out;
}

struct FoldedBlob {
  std::vector<kernels::Loop3> loops;
  std::vector<Aabb3> boxes;
  std::vector<int> all;
};

const FoldedBlob& blob() {
  static const FoldedBlob b = [] {
    TriMesh m = load_obj(FOLDNET_BENCH_MESH);
    Net net = layout(m, blooming_tree(m, choose_root(m)));
    Configuration c = Configuration::flat(net);
    for (double& q : c.q) q = 0.6;
    FoldedState s = fold_state(net, c);
    FoldedBlob out{s.polygons, s.boxes, {}};
    for (int f = 0; f < net.face_count(); ++f) out.all.push_back(f);
    return out;
  }();
  return b;
}

template <auto Kernel>
void overlap(benchmark::State& state) {
  auto loops = quads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(loops, {}, 1e-9));
  state.SetComplexityN(state.range(0));
}

template <auto Kernel>
void penetration(benchmark::State& state) {
  const auto& b = blob();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(b.loops, b.boxes, b.all, {}, {}, 1e-6));
}

}  // namespace

BENCHMARK(overlap<kernels::overlap_pairs_serial>)->Name("overlap/serial")->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(overlap<kernels::overlap_pairs_omp>)->Name("overlap/omp")->RangeMultiplier(4)->Range(64, 4096)->UseRealTime();
BENCHMARK(penetration<kernels::penetrating_pairs_serial>)->Name("penetration_blob/serial");
BENCHMARK(penetration<kernels::penetrating_pairs_omp>)->Name("penetration_blob/omp")->UseRealTime();

BENCHMARK_MAIN();
