#include <benchmark/benchmark.h>

#include "xfd/efp/efp.hpp"
#include "xfd/scxml/scxml.hpp"
#include "xfd/sim/engine.hpp"
#include "xfd/xml/devs_xml.hpp"

using namespace xfd;

static void BM_SimulateEfp(benchmark::State& state) {
  const double horizon = static_cast<double>(state.range(0));
  efp::EfpParams p;
  p.obs_time = TimeValue(horizon);  // keep the generator busy to the horizon
  const auto reg = efp::build_efp(p);
  for (auto _ : state) {
    sim::SimTree tree = sim::SimTree::initialize(reg, "EFP", TimeValue(0.0));
    benchmark::DoNotOptimize(tree.run_until(TimeValue(horizon)).events.size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SimulateEfp)->RangeMultiplier(4)->Range(100, 102400)->Complexity();

static void BM_ParseAtomic(benchmark::State& state) {
  const auto reg = efp::build_efp({});
  const std::string doc = devs_xml::emit_atomic_string(*reg.find_atomic("Generator"));
  for (auto _ : state) {
    auto spec = devs_xml::parse_atomic_xml(xml::parse(doc));
    benchmark::DoNotOptimize(spec.states.size());
  }
}
BENCHMARK(BM_ParseAtomic);

static void BM_EmitAtomic(benchmark::State& state) {
  const auto reg = efp::build_efp({});
  const AtomicSpec& spec = *reg.find_atomic("Generator");
  for (auto _ : state) {
    auto doc = devs_xml::emit_atomic_string(spec);
    benchmark::DoNotOptimize(doc.size());
  }
}
BENCHMARK(BM_EmitAtomic);

static void BM_FlattenEfp(benchmark::State& state) {
  const auto reg = efp::build_efp({});
  for (auto _ : state) {
    auto flat = sim::flatten(reg, "EFP");
    benchmark::DoNotOptimize(flat.root.couplings.size());
  }
}
BENCHMARK(BM_FlattenEfp);

static void BM_Route(benchmark::State& state) {
  const auto reg = efp::build_efp({});
  const CoupledSpec& ef = *reg.find_coupled("EF");
  std::map<std::string, Bag> produced = {{"Generator", Bag{{"out", "Job"}}}};
  const Bag external_in{{"in", "Job"}};
  for (auto _ : state) {
    auto r = sim::route(ef, produced, external_in);
    benchmark::DoNotOptimize(r.external_out.size());
  }
}
BENCHMARK(BM_Route);

static void BM_TransformScxml(benchmark::State& state) {
  const std::string doc =
      "<scxml initial=\"active\"><state id=\"active\"><onentry>"
      "<send event=\"tick\" delay=\"5\"/></onentry>"
      "<transition event=\"tick\" target=\"active\"/>"
      "<transition event=\"halt\" target=\"off\"/></state>"
      "<state id=\"off\"/></scxml>";
  for (auto _ : state) {
    auto sm = scxml::transform_scxml(xml::parse(doc));
    benchmark::DoNotOptimize(sm.internal.size());
  }
}
BENCHMARK(BM_TransformScxml);

BENCHMARK_MAIN();
