#include "xfd/sim/trace.hpp"

#include <sstream>

namespace xfd::sim {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Init: return "INIT";
    case EventKind::Output: return "OUTPUT";
    case EventKind::Internal: return "INTERNAL";
    case EventKind::External: return "EXTERNAL";
    case EventKind::Confluent: return "CONFLUENT";
  }
  return "?";
}

std::vector<TraceEvent> Trace::outputs() const {
  std::vector<TraceEvent> out;
  for (const auto& e : events)
    if (e.kind == EventKind::Output) out.push_back(e);
  return out;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_jsonl(const Trace& trace) {
  std::ostringstream out;
  for (const auto& e : trace.events) {
    out << "{\"t\":";
    if (e.t.is_infinite())
      out << "\"inf\"";
    else
      out << format_time(e.t);
    out << ",\"model\":\"" << json_escape(e.model) << "\"";
    out << ",\"kind\":\"" << to_string(e.kind) << "\"";
    if (e.port) out << ",\"port\":\"" << json_escape(*e.port) << "\"";
    if (e.label) out << ",\"label\":\"" << json_escape(*e.label) << "\"";
    if (e.before) out << ",\"before\":\"" << json_escape(*e.before) << "\"";
    if (e.after) out << ",\"after\":\"" << json_escape(*e.after) << "\"";
    out << "}\n";
  }
  return out.str();
}

std::string to_csv(const Trace& trace) {
  std::ostringstream out;
  out << "t,model,kind,port,label,before,after\n";
  for (const auto& e : trace.events) {
    out << format_time(e.t) << ',' << csv_field(e.model) << ',' << to_string(e.kind)
        << ',' << csv_field(e.port.value_or("")) << ',' << csv_field(e.label.value_or(""))
        << ',' << csv_field(e.before.value_or("")) << ','
        << csv_field(e.after.value_or("")) << '\n';
  }
  return out.str();
}

}  // namespace xfd::sim
