#include <doctest.h>

#include <cmath>

#include "../support/helpers.hpp"
#include "xfd/efp/efp.hpp"
#include "xfd/semantics.hpp"
#include "xfd/sim/engine.hpp"
#include "xfd/xml/devs_xml.hpp"

using namespace xfd;
using namespace xfd::efp;
using testsupport::fixture;
using testsupport::slurp;

TEST_CASE("build_efp produces a valid five-model registry") {
  const ModelRegistry reg = build_efp({});
  CHECK(reg.size() == 5);
  CHECK(reg.validate().empty());
  CHECK(reg.find_coupled("EFP"));
  CHECK(reg.find_coupled("EF"));
  CHECK(reg.find_atomic("Generator"));
  CHECK(reg.find_atomic("Processor"));
  CHECK(reg.find_atomic("Transducer"));

  CHECK_THROWS_WITH_AS(build_efp({TimeValue(0.0), TimeValue(5.0), TimeValue(100.0)}),
                       doctest::Contains("invalid-params"), Error);
}

TEST_CASE("build_efp matches the shipped fixtures model for model") {
  const ModelRegistry reg = build_efp({});
  CHECK(*reg.find_coupled("EF") ==
        devs_xml::parse_coupled_file(fixture("efp/EF.xml")));
  CHECK(*reg.find_atomic("Generator") ==
        devs_xml::parse_atomic_file(fixture("efp/Generator.xml")));
}

TEST_CASE("the built generator matches the published snippet up to the stop label") {
  const ModelRegistry reg = build_efp({});
  const AtomicSpec& built = *reg.find_atomic("Generator");
  const AtomicSpec published =
      devs_xml::parse_atomic_xml(xml::parse(slurp(fixture("variant/Generator.xml"))));

  // Same states, ports and timing; the published snippet keys its stop
  // transition on "Job" and lists passive first, both documented deviations.
  CHECK(time_advance(built, "active") == time_advance(published, "active"));
  CHECK(built.delt_int == std::vector<InternalTransition>{{"active", "active", 1}});
  CHECK(published.delt_int[0].from == "active");
  CHECK(published.delt_int[0].to == "active");
  CHECK(built.delt_ext[0].from == published.delt_ext[0].from);
  CHECK(built.delt_ext[0].to == published.delt_ext[0].to);
  CHECK(built.delt_ext[0].message == "Stop");
  CHECK(published.delt_ext[0].message == "Job");
  CHECK(built.inports == published.inports);
  CHECK(built.outports == published.outports);
}

TEST_CASE("oracle_trace: the default closed form") {
  const auto events = oracle_trace({}, TimeValue(30.0));
  std::vector<double> gen, proc;
  for (const auto& e : events) {
    if (e.model == "EF/Generator") gen.push_back(e.t.seconds());
    if (e.model == "Processor") proc.push_back(e.t.seconds());
  }
  CHECK(gen == std::vector<double>{10, 20, 30});
  CHECK(proc == std::vector<double>{15, 25});
}

TEST_CASE("oracle_trace: discards while busy") {
  EfpParams p;
  p.gen_period = TimeValue(4.0);
  p.proc_time = TimeValue(10.0);
  const auto events = oracle_trace(p, TimeValue(20.0));
  std::vector<double> gen, proc;
  for (const auto& e : events) {
    if (e.model == "EF/Generator") gen.push_back(e.t.seconds());
    if (e.model == "Processor") proc.push_back(e.t.seconds());
  }
  CHECK(gen == std::vector<double>{4, 8, 12, 16, 20});
  // Accepted at 4 -> out at 14; 8 and 12 discarded; accepted at 16 -> 26 > 20.
  CHECK(proc == std::vector<double>{14});
}

TEST_CASE("oracle_trace: nothing happens before the first period") {
  CHECK(oracle_trace({}, TimeValue(5.0)).empty());
}

TEST_CASE("a job arriving exactly at completion time is accepted") {
  EfpParams p;
  p.gen_period = TimeValue(5.0);
  p.proc_time = TimeValue(5.0);
  p.obs_time = TimeValue(50.0);
  const auto events = oracle_trace(p, TimeValue(30.0));
  std::vector<double> proc;
  for (const auto& e : events)
    if (e.model == "Processor") proc.push_back(e.t.seconds());
  CHECK(proc == std::vector<double>{10, 15, 20, 25, 30});

  // And the engine agrees.
  sim::SimTree tree = sim::SimTree::initialize(build_efp(p), "EFP", TimeValue(0.0));
  const auto outputs = tree.run_until(TimeValue(30.0)).outputs();
  std::vector<double> engine_proc;
  for (const auto& e : outputs)
    if (e.model == "Processor") engine_proc.push_back(e.t.seconds());
  CHECK(engine_proc == proc);
}

TEST_CASE("turnaround_report pairs accepted jobs with completions") {
  sim::SimTree tree = sim::SimTree::initialize(build_efp({}), "EFP", TimeValue(0.0));
  const sim::Trace& trace = tree.run_until(TimeValue(30.0));
  const TurnaroundReport rep = turnaround_report(trace);
  CHECK(rep.jobs_sent == 3);
  CHECK(rep.jobs_completed == 2);
  REQUIRE(rep.avg_turnaround);
  CHECK(rep.avg_turnaround->seconds() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("turnaround_report on an empty trace reports nothing") {
  const TurnaroundReport rep = turnaround_report(sim::Trace{});
  CHECK(rep.jobs_sent == 0);
  CHECK(rep.jobs_completed == 0);
  CHECK_FALSE(rep.avg_turnaround);
}

TEST_CASE("turnaround_report rejects a completion with no accepted job") {
  sim::Trace trace;
  sim::TraceEvent orphan;
  orphan.t = TimeValue(5.0);
  orphan.model = "Processor";
  orphan.kind = sim::EventKind::Output;
  orphan.port = "out";
  orphan.label = "Job";
  trace.events.push_back(orphan);
  CHECK_THROWS_WITH_AS(turnaround_report(trace), doctest::Contains("malformed-trace"),
                       Error);
}

TEST_CASE("turnaround_report under discards") {
  EfpParams p;
  p.gen_period = TimeValue(4.0);
  p.proc_time = TimeValue(10.0);
  sim::SimTree tree = sim::SimTree::initialize(build_efp(p), "EFP", TimeValue(0.0));
  const TurnaroundReport rep = turnaround_report(tree.run_until(TimeValue(20.0)));
  CHECK(rep.jobs_sent == 5);
  CHECK(rep.jobs_completed == 1);
  REQUIRE(rep.avg_turnaround);
  CHECK(rep.avg_turnaround->seconds() == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("discard and stop laws over a small parameter sweep") {
  for (int gp : {2, 5, 7}) {
    for (int pt : {3, 5, 11}) {
      EfpParams p;
      p.gen_period = TimeValue(double(gp));
      p.proc_time = TimeValue(double(pt));
      p.obs_time = TimeValue(40.0);
      sim::SimTree tree = sim::SimTree::initialize(build_efp(p), "EFP", TimeValue(0.0));
      const auto outputs = tree.run_until(TimeValue(60.0)).outputs();

      double last_proc = -1e18;
      for (const auto& e : outputs) {
        if (e.model == "Processor") {
          CHECK(e.t.seconds() - last_proc >= double(pt) - 1e-9);
          last_proc = e.t.seconds();
        }
        if (e.model == "EF/Generator") CHECK(e.t.seconds() <= 40.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("avg turnaround equals the service time when nothing queues") {
  for (int gp : {6, 10, 15}) {
    EfpParams p;
    p.gen_period = TimeValue(double(gp));
    p.proc_time = TimeValue(5.0);
    sim::SimTree tree = sim::SimTree::initialize(build_efp(p), "EFP", TimeValue(0.0));
    const TurnaroundReport rep = turnaround_report(tree.run_until(TimeValue(80.0)));
    REQUIRE(rep.avg_turnaround);
    CHECK(rep.avg_turnaround->seconds() == doctest::Approx(5.0).epsilon(1e-12));
  }
}
