#ifndef XFD_EFP_EFP_HPP
#define XFD_EFP_EFP_HPP

#include <optional>
#include <vector>

#include "xfd/model.hpp"
#include "xfd/registry.hpp"
#include "xfd/sim/trace.hpp"

namespace xfd::efp {

/// Parameters of the generator/transducer/processor benchmark. The
/// generator period is fixed by the published model; service and
/// observation times are open parameters with these defaults.
struct EfpParams {
  TimeValue gen_period{10.0};
  TimeValue proc_time{5.0};
  TimeValue obs_time{100.0};
};

/// Builds the five-model registry: EFP { EF { Generator, Transducer },
/// Processor }. The generator emits Job on "out" every gen_period until the
/// transducer's Stop arrives on "stop"; the processor serves one job at a
/// time for proc_time and discards arrivals while busy; the transducer
/// times the observation window and emits Stop at obs_time.
ModelRegistry build_efp(const EfpParams& p);

/// One expected output event: (time, model path, port, label).
struct OracleEvent {
  TimeValue t;
  std::string model;
  PortName port;
  MessageLabel label;

  auto operator<=>(const OracleEvent&) const = default;
};

/// Closed-form expected OUTPUT events for an ef-p run, independent of the
/// engine: generator fires at multiples of gen_period up to
/// min(t_end, obs_time); the processor accepts a job iff idle (a job
/// arriving exactly at completion time is accepted) and completes
/// proc_time later; the transducer emits Stop at obs_time.
std::vector<OracleEvent> oracle_trace(const EfpParams& p, TimeValue t_end);

struct TurnaroundReport {
  std::size_t jobs_sent = 0;
  std::size_t jobs_completed = 0;
  std::optional<TimeValue> avg_turnaround;
};

/// Post-hoc analysis of an ef-p trace: pairs each accepted job with its
/// completion, FIFO, and averages the time differences. Completions at the
/// same instant as a new arrival are processed first (the confluent order).
TurnaroundReport turnaround_report(const sim::Trace& trace);

}  // namespace xfd::efp

#endif
