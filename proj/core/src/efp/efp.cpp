#include "xfd/efp/efp.hpp"

#include <algorithm>

#include "xfd/error.hpp"

namespace xfd::efp {

namespace {

void require_positive(TimeValue v, const char* what) {
  if (v.is_infinite() || v.seconds() <= 0.0)
    throw Error("invalid-params", std::string(what) + " must be finite and positive");
}

std::string last_segment(const std::string& path) {
  const auto pos = path.rfind('/');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

}  // namespace

ModelRegistry build_efp(const EfpParams& p) {
  require_positive(p.gen_period, "gen_period");
  require_positive(p.proc_time, "proc_time");
  require_positive(p.obs_time, "obs_time");

  ModelRegistry reg;

  AtomicSpec gen;
  gen.name = "Generator";
  gen.inports = {"stop"};
  gen.outports = {"out"};
  gen.states = {"active", "passive"};
  gen.initial = "active";
  gen.ta = {{"active", p.gen_period}};
  gen.lambda = {{"active", "out", "Job"}};
  gen.delt_int = {{"active", "active", 1}};
  // Any event on "stop" halts it; the transducer sends label Stop, so the
  // table is registered under the routed label.
  gen.delt_ext = {{"active", "Stop", "passive", true, 1}};
  reg.add(std::move(gen));

  AtomicSpec proc;
  proc.name = "Processor";
  proc.inports = {"in"};
  proc.outports = {"out"};
  proc.states = {"idle", "busy"};
  proc.initial = "idle";
  proc.ta = {{"busy", p.proc_time}};
  proc.lambda = {{"busy", "out", "Job"}};
  proc.delt_int = {{"busy", "idle", 1}};
  // A job hitting a busy processor is discarded: absorbed without touching
  // the running service interval.
  proc.delt_ext = {{"idle", "Job", "busy", true, 1}, {"busy", "Job", "busy", false, 2}};
  reg.add(std::move(proc));

  AtomicSpec transd;
  transd.name = "Transducer";
  transd.inports = {"arrived", "solved"};
  transd.outports = {"out"};
  transd.states = {"observing", "done"};
  transd.initial = "observing";
  transd.ta = {{"observing", p.obs_time}};
  transd.lambda = {{"observing", "out", "Stop"}};
  transd.delt_int = {{"observing", "done", 1}};
  transd.delt_ext = {{"observing", "Job", "observing", false, 1}};
  reg.add(std::move(transd));

  CoupledSpec ef;
  ef.name = "EF";
  ef.inports = {"in"};
  ef.outports = {"out"};
  ef.models = {{"Generator", {}, {}}, {"Transducer", {}, {}}};
  ef.couplings = {
      {"EF", "Transducer", "in", "solved"},
      {"Generator", "Transducer", "out", "arrived"},
      {"Transducer", "Generator", "out", "stop"},
      {"Generator", "EF", "out", "out"},
  };
  reg.add(std::move(ef));

  CoupledSpec efp;
  efp.name = "EFP";
  efp.models = {{"EF", {}, {}}, {"Processor", {}, {}}};
  efp.couplings = {
      {"EF", "Processor", "out", "in"},
      {"Processor", "EF", "out", "in"},
  };
  reg.add(std::move(efp));

  return reg;
}

std::vector<OracleEvent> oracle_trace(const EfpParams& p, TimeValue t_end) {
  require_positive(p.gen_period, "gen_period");
  require_positive(p.proc_time, "proc_time");
  require_positive(p.obs_time, "obs_time");

  std::vector<OracleEvent> events;

  if (p.obs_time <= t_end)
    events.push_back({p.obs_time, "EF/Transducer", "out", "Stop"});

  const TimeValue stop_at = std::min(t_end, p.obs_time);
  double busy_until = 0.0;
  bool serving = false;
  for (long k = 1;; ++k) {
    const TimeValue t = TimeValue(static_cast<double>(k) * p.gen_period.seconds());
    if (t > stop_at) break;
    events.push_back({t, "EF/Generator", "out", "Job"});
    // Idle (or completing exactly now) accepts; busy discards.
    if (!serving || t.seconds() >= busy_until) {
      serving = true;
      busy_until = t.seconds() + p.proc_time.seconds();
      if (TimeValue(busy_until) <= t_end)
        events.push_back({TimeValue(busy_until), "Processor", "out", "Job"});
    }
  }

  std::sort(events.begin(), events.end());
  return events;
}

TurnaroundReport turnaround_report(const sim::Trace& trace) {
  struct Out {
    TimeValue t;
    bool completion;  // processor output
  };
  std::vector<Out> outs;
  for (const auto& e : trace.events) {
    if (e.kind != sim::EventKind::Output) continue;
    const std::string who = last_segment(e.model);
    if (who == "Generator")
      outs.push_back({e.t, false});
    else if (who == "Processor")
      outs.push_back({e.t, true});
  }
  // At one instant a completion precedes a new arrival (the processor frees
  // up and then accepts).
  std::stable_sort(outs.begin(), outs.end(), [](const Out& a, const Out& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.completion && !b.completion;
  });

  TurnaroundReport rep;
  std::optional<TimeValue> in_flight;
  double total = 0.0;
  for (const Out& o : outs) {
    if (o.completion) {
      if (!in_flight)
        throw Error("malformed-trace", "a completion appears with no accepted job");
      total += (o.t - *in_flight).seconds();
      ++rep.jobs_completed;
      in_flight.reset();
    } else {
      ++rep.jobs_sent;
      if (!in_flight) in_flight = o.t;  // accepted; otherwise discarded
    }
  }
  if (rep.jobs_completed > 0)
    rep.avg_turnaround = TimeValue(total / static_cast<double>(rep.jobs_completed));
  return rep;
}

}  // namespace xfd::efp
