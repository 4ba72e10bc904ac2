#include "xfd/semantics.hpp"

#include <algorithm>
#include <set>

#include "xfd/error.hpp"

namespace xfd {

namespace {

void require_state(const AtomicSpec& spec, const StateName& s) {
  if (!spec.has_state(s))
    throw Error("unknown-state", "'" + s + "' is not a state of model '" + spec.name + "'");
}

bool is_token(const std::string& s) {
  if (s.empty()) return false;
  return !std::isspace(static_cast<unsigned char>(s.front())) &&
         !std::isspace(static_cast<unsigned char>(s.back()));
}

void check_tokens(const std::vector<std::string>& names, const char* what,
                  const std::string& owner, const char* dup_code,
                  std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!is_token(n))
      out.push_back({codes::EmptyName, owner,
                     std::string(what) + " name must be a non-empty trimmed token"});
    else if (!seen.insert(n).second)
      out.push_back({dup_code, owner, std::string("duplicate ") + what + " '" + n + "'"});
  }
}

}  // namespace

TimeValue time_advance(const AtomicSpec& spec, const StateName& s) {
  require_state(spec, s);
  const TaEntry* e = spec.find_ta(s);
  return e ? e->timeout : TimeValue::infinity();
}

Bag output(const AtomicSpec& spec, const StateName& s) {
  require_state(spec, s);
  Bag bag;
  for (const LambdaEntry* e : spec.find_lambda(s)) bag.add(e->outport, e->label());
  return bag;
}

StateName delta_int(const AtomicSpec& spec, const StateName& s) {
  require_state(spec, s);
  const InternalTransition* e = spec.find_int(s);
  if (!e)
    throw Error("no-internal-transition",
                "state '" + s + "' of model '" + spec.name + "' has no internal transition");
  return e->to;
}

std::pair<StateName, bool> delta_ext(const AtomicSpec& spec, const StateName& s,
                                     const MessageLabel& m) {
  require_state(spec, s);
  const ExternalTransition* e = spec.find_ext(s, m);
  if (!e) return {s, false};  // absorb
  return {e->to, e->schedule};
}

std::pair<StateName, bool> apply_bag(const AtomicSpec& spec, const StateName& s,
                                     const Bag& b) {
  require_state(spec, s);
  StateName cur = s;
  bool reschedule = false;
  for (const Message& m : b.canonical()) {
    auto [next, sched] = delta_ext(spec, cur, m.label);
    cur = std::move(next);
    reschedule = reschedule || sched;
  }
  return {cur, reschedule};
}

StateName delta_con(const AtomicSpec& spec, const StateName& s, const Bag& b) {
  StateName after_int = delta_int(spec, s);
  return apply_bag(spec, after_int, b).first;
}

std::vector<Violation> validate_atomic(const AtomicSpec& spec) {
  std::vector<Violation> out;
  const std::string where = spec.name.empty() ? "<atomic>" : spec.name;

  if (spec.states.empty()) {
    out.push_back({codes::NoStates, where, "an atomic model needs at least one state"});
    return out;
  }
  check_tokens(spec.states, "state", where, codes::DuplicateState, out);
  check_tokens(spec.inports, "inport", where, codes::DuplicatePort, out);
  check_tokens(spec.outports, "outport", where, codes::DuplicatePort, out);

  if (!spec.has_state(spec.initial))
    out.push_back({codes::UnknownInitialState, where,
                   "initial state '" + spec.initial + "' is not in the state set"});

  auto check_ref = [&](const StateName& s, const std::string& ctx) {
    if (!spec.has_state(s))
      out.push_back({codes::UnknownState, where, ctx + " references unknown state '" + s + "'"});
  };

  std::set<StateName> ta_seen;
  for (const auto& e : spec.ta) {
    check_ref(e.state, "timeAdvance");
    if (!ta_seen.insert(e.state).second)
      out.push_back({codes::DuplicateTimeAdvance, where,
                     "more than one ta entry for state '" + e.state + "'"});
  }

  for (const auto& e : spec.lambda) {
    check_ref(e.state, "lambda");
    if (std::find(spec.outports.begin(), spec.outports.end(), e.outport) ==
        spec.outports.end())
      out.push_back({codes::UnknownPort, where,
                     "lambda for '" + e.state + "' uses unknown outport '" + e.outport + "'"});
  }

  std::set<StateName> int_seen;
  for (const auto& e : spec.delt_int) {
    check_ref(e.from, "deltint");
    check_ref(e.to, "deltint");
    if (!int_seen.insert(e.from).second)
      out.push_back({codes::DuplicateInternalTransition, where,
                     "more than one internal transition from '" + e.from + "'"});
  }

  std::set<std::pair<StateName, MessageLabel>> ext_seen;
  for (const auto& e : spec.delt_ext) {
    check_ref(e.from, "deltext");
    check_ref(e.to, "deltext");
    if (!ext_seen.insert({e.from, e.message}).second)
      out.push_back({codes::DuplicateExternalTransition, where,
                     "more than one external transition for ('" + e.from + "', '" +
                         e.message + "')"});
  }

  // Every state that will ever depart must know where to go.
  for (const auto& s : spec.states) {
    const TaEntry* e = spec.find_ta(s);
    if (e && !e->timeout.is_infinite() && !spec.find_int(s))
      out.push_back({codes::MissingInternalTransition, where,
                     "state '" + s + "' has finite ta but no internal transition"});
  }

  return out;
}

std::vector<Violation> validate_coupled(const CoupledSpec& spec) {
  std::vector<Violation> out;
  const std::string where = spec.name.empty() ? "<coupled>" : spec.name;

  std::vector<std::string> child_names;
  for (const auto& m : spec.models) child_names.push_back(m.child);
  check_tokens(child_names, "child model", where, codes::DuplicateChild, out);
  check_tokens(spec.inports, "inport", where, codes::DuplicatePort, out);
  check_tokens(spec.outports, "outport", where, codes::DuplicatePort, out);

  if (spec.has_child(spec.name))
    out.push_back({codes::ChildShadowsParent, where,
                   "a child is named like the coupled model itself"});

  for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
    const Coupling& c = spec.couplings[i];
    const std::string at = where + "/coupling[" + std::to_string(i + 1) + "]";
    if (c.src == c.dest) {
      out.push_back({codes::SelfCoupling, at,
                     "coupling connects '" + c.src + "' to itself"});
      continue;
    }
    for (const std::string* end : {&c.src, &c.dest}) {
      if (*end != spec.name && !spec.has_child(*end))
        out.push_back({codes::UnknownModel, at,
                       "coupling references '" + *end + "', not a child of '" + where + "'"});
    }
    if (spec.classify(c) == CouplingKind::Invalid &&
        (c.src == spec.name || spec.has_child(c.src)) &&
        (c.dest == spec.name || spec.has_child(c.dest)))
      out.push_back({codes::InvalidCoupling, at, "coupling cannot be classified"});
  }
  return out;
}

namespace {

const std::vector<PortName>* model_ports(const ModelSpec& m, bool inputs) {
  if (const auto* a = std::get_if<AtomicSpec>(&m))
    return inputs ? &a->inports : &a->outports;
  const auto& c = std::get<CoupledSpec>(m);
  return inputs ? &c.inports : &c.outports;
}

bool model_has_port(const ModelSpec& m, const PortName& p, bool input) {
  const auto* ports = model_ports(m, input);
  return std::find(ports->begin(), ports->end(), p) != ports->end();
}

}  // namespace

std::vector<Violation> validate_coupled(const CoupledSpec& spec, const ModelRegistry& reg) {
  std::vector<Violation> out = validate_coupled(spec);
  const std::string where = spec.name.empty() ? "<coupled>" : spec.name;

  for (const auto& m : spec.models)
    if (!reg.contains(m.child))
      out.push_back({codes::UnknownModel, where,
                     "child '" + m.child + "' does not resolve in the registry"});

  auto port_check = [&](const std::string& model, const PortName& port, bool input,
                        const std::string& at) {
    if (model == spec.name) {
      const bool ok = input ? spec.has_inport(port) : spec.has_outport(port);
      if (!ok)
        out.push_back({codes::UnknownPort, at,
                       "'" + spec.name + "' has no " + (input ? "inport '" : "outport '") +
                           port + "'"});
      return;
    }
    const ModelSpec* resolved = reg.find(model);
    if (!resolved) return;  // already reported above
    if (!model_has_port(*resolved, port, input))
      out.push_back({codes::UnknownPort, at,
                     "model '" + model + "' has no " + (input ? "inport '" : "outport '") +
                         port + "'"});
  };

  for (std::size_t i = 0; i < spec.couplings.size(); ++i) {
    const Coupling& c = spec.couplings[i];
    const std::string at = where + "/coupling[" + std::to_string(i + 1) + "]";
    switch (spec.classify(c)) {
      case CouplingKind::EIC:
        port_check(c.src, c.outport, true, at);   // coupled's own inport
        port_check(c.dest, c.inport, true, at);   // child inport
        break;
      case CouplingKind::EOC:
        port_check(c.src, c.outport, false, at);  // child outport
        port_check(c.dest, c.inport, false, at);  // coupled's own outport
        break;
      case CouplingKind::IC:
        port_check(c.src, c.outport, false, at);
        port_check(c.dest, c.inport, true, at);
        break;
      case CouplingKind::Invalid:
        break;  // reported by the spec-internal pass
    }
  }
  return out;
}

}  // namespace xfd
