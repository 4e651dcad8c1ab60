#include <benchmark/benchmark.h>

#include <random>

#include "stkin/scenario.hpp"

using namespace stkin;

namespace {

VectorField random_vector_field(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return VectorField::space_from_polys(
      {Poly4::random_cubic(rng), Poly4::random_cubic(rng), Poly4::random_cubic(rng)});
}

void BM_FlowUnitTime(benchmark::State& state) {
  const VelocityField u = catalog_field("planar_vortex");
  const WorldPoint x{0.0, Vec3(0.5, 0.2, -0.3)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(flow(u, x, 1.0));
  }
}
BENCHMARK(BM_FlowUnitTime);

void BM_LieClosedForm(benchmark::State& state) {
  const VelocityField u = catalog_field("planar_vortex");
  const VectorField c = random_vector_field(17);
  const WorldPoint x{0.3, Vec3(0.4, -0.6, 0.2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lie_derivative(c, u, x));
  }
}
BENCHMARK(BM_LieClosedForm);

void BM_LieOracle(benchmark::State& state) {
  const VelocityField u = catalog_field("planar_vortex");
  const VectorField c = random_vector_field(17);
  const WorldPoint x{0.3, Vec3(0.4, -0.6, 0.2)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lie_oracle(c, u, x));
  }
}
BENCHMARK(BM_LieOracle);

void BM_ObserverSplit(benchmark::State& state) {
  const RigidObserver obs =
      RigidObserver::rotating_uniform(WorldPoint{}, Vec3(0.3, -0.4, 1.0));
  const WorldPoint x{7.2, Vec3(1.0, -0.5, 0.3)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(obs.split(x));
  }
}
BENCHMARK(BM_ObserverSplit);

void BM_CorotatingConstruction(benchmark::State& state) {
  const VelocityField u = catalog_field("planar_vortex");
  ObserverOptions opts;
  opts.horizon = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(RigidObserver::corotating(u, WorldPoint{0.0, Vec3(0.5, 0, 0)}, opts));
  }
}
BENCHMARK(BM_CorotatingConstruction);

void BM_ScenarioRun(benchmark::State& state) {
  const harness::Scenario sc = harness::parse_scenario_json(R"({
    "field": "planar_vortex",
    "test_field": {"kind": "space_vector", "random_cubic": true},
    "points": {"count": 2, "t_range": [0, 1], "box": 1.0}
  })");
  for (auto _ : state) {
    benchmark::DoNotOptimize(harness::run_scenario(sc));
  }
}
BENCHMARK(BM_ScenarioRun);

}  // namespace

BENCHMARK_MAIN();
