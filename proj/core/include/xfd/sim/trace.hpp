#ifndef XFD_SIM_TRACE_HPP
#define XFD_SIM_TRACE_HPP

#include <optional>
#include <string>
#include <vector>

#include "xfd/model.hpp"
#include "xfd/time_value.hpp"

namespace xfd::sim {

enum class EventKind { Init, Output, Internal, External, Confluent };

std::string to_string(EventKind k);

/// One dated record. OUTPUT events carry port+label; transition events carry
/// the states around them; INIT carries the entered state.
struct TraceEvent {
  TimeValue t;
  std::string model;  // slash-joined path from the root
  EventKind kind = EventKind::Init;
  std::optional<PortName> port;
  std::optional<MessageLabel> label;
  std::optional<StateName> before;
  std::optional<StateName> after;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  std::vector<TraceEvent> events;
  TimeValue termination{0.0};

  std::vector<TraceEvent> outputs() const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

/// JSON-lines, one event per line, key order {t, model, kind, port, label,
/// before, after}, absent fields omitted, infinite times as "inf", finite
/// times as numbers with up to 12 significant digits.
std::string to_jsonl(const Trace& trace);

/// CSV with the same columns; absent fields empty.
std::string to_csv(const Trace& trace);

}  // namespace xfd::sim

#endif
