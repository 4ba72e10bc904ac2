#include "xfd/uml/uml.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "xfd/error.hpp"
#include "xfd/semantics.hpp"

namespace xfd::uml {

namespace {

using xml::Node;

constexpr const char* kXmiNs = "http://schema.omg.org/spec/XMI/2.1";
constexpr const char* kUmlNs = "http://www.omg.org/spec/UML/20090901";
constexpr const char* kDeltintKeyword = "deltint";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") + 1 - b);
}

std::string xmi_type(const Node& n) {
  for (const auto& [k, v] : n.attrs) {
    const auto pos = k.find(':');
    const std::string local = pos == std::string::npos ? k : k.substr(pos + 1);
    if (local == "type") return v;
  }
  return "";
}

UmlPort parse_port(const Node& n) {
  UmlPort port;
  if (const std::string* v = n.attr("name")) port.name = *v;
  const std::string* provided = n.attr("provided");
  const std::string* required = n.attr("required");
  if (provided && required)
    throw Error("bidirectional-port",
                "port '" + port.name + "' both provides and requires an interface");
  if (!provided && !required)
    throw Error("missing-direction",
                "port '" + port.name + "' declares neither a provided nor a required "
                "interface");
  port.direction = provided ? UmlPort::Direction::Provided : UmlPort::Direction::Required;
  const std::string& iface = provided ? *provided : *required;
  if (!iface.empty()) port.interface_name = iface;
  return port;
}

UmlComponent parse_component(const Node& n) {
  UmlComponent c;
  if (const std::string* v = n.attr("name")) c.name = *v;
  if (c.name.empty()) throw Error("missing-name", "component without a name");
  for (const Node& child : n.children) {
    const std::string local = child.local_name();
    if (local == "ownedAttribute" && xmi_type(child) == "uml:Port") {
      c.ports.push_back(parse_port(child));
    } else if (local == "packagedElement" && xmi_type(child) == "uml:Component") {
      c.subcomponents.push_back(parse_component(child));
    } else if (local == "connector") {
      UmlConnector conn;
      const std::string* kind = child.attr("kind");
      if (!kind || (*kind != "assembly" && *kind != "delegation"))
        throw Error("bad-connector", "connector needs kind=assembly|delegation");
      conn.kind = *kind == "assembly" ? UmlConnector::Kind::Assembly
                                      : UmlConnector::Kind::Delegation;
      auto ends = child.children_named("end");
      if (ends.size() != 2)
        throw Error("bad-connector", "connector needs exactly two ends");
      auto read_end = [](const Node* e, std::string& comp, std::string& port) {
        if (const std::string* v = e->attr("component")) comp = *v;
        if (const std::string* v = e->attr("port")) port = *v;
      };
      read_end(ends[0], conn.from_component, conn.from_port);
      read_end(ends[1], conn.to_component, conn.to_port);
      c.connectors.push_back(std::move(conn));
    }
  }
  return c;
}

UmlStateMachine parse_machine(const Node& n) {
  UmlStateMachine sm;
  if (const std::string* v = n.attr("name")) sm.name = *v;
  if (sm.name.empty()) throw Error("missing-name", "state machine without a name");
  const Node* region = n.child("region");
  if (!region) return sm;
  for (const Node& child : region->children) {
    const std::string local = child.local_name();
    if (local == "state") {
      const std::string* label = child.attr("name");
      if (!label) throw Error("unparseable-state-label", "state without a name label");
      sm.states.push_back(parse_state_label(*label));
    } else if (local == "transition") {
      UmlTransition t;
      if (const std::string* v = child.attr("from")) t.from = *v;
      if (const std::string* v = child.attr("to")) t.to = *v;
      if (const std::string* v = child.attr("trigger")) t.trigger = *v;
      if (const std::string* v = child.attr("guard")) t.guard = *v;
      if (const std::string* v = child.attr("effect")) t.effect = *v;
      if (const std::string* v = child.attr("kind")) t.internal_kind = (*v == "internal");
      sm.transitions.push_back(std::move(t));
    }
  }
  return sm;
}

}  // namespace

const UmlPort* UmlComponent::find_port(const std::string& port_name) const {
  for (const auto& p : ports)
    if (p.name == port_name) return &p;
  return nullptr;
}

const UmlComponent* UmlComponent::find_subcomponent(const std::string& sub_name) const {
  for (const auto& s : subcomponents)
    if (s.name == sub_name) return &s;
  return nullptr;
}

UmlState parse_state_label(const std::string& label) {
  const std::string t = trim(label);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw Error("unparseable-state-label", "'" + label + "' is not \"(phase, sigma)\"");
  const std::string inner = t.substr(1, t.size() - 2);
  const auto comma = inner.find(',');
  if (comma == std::string::npos)
    throw Error("unparseable-state-label", "'" + label + "' lacks a sigma");
  UmlState s;
  s.phase = trim(inner.substr(0, comma));
  std::string sigma = trim(inner.substr(comma + 1));
  if (s.phase.empty() || sigma.empty())
    throw Error("unparseable-state-label", "'" + label + "' has empty parts");
  if (sigma == "inf" || sigma == "infinity" || sigma == "Infinity" || sigma == "INF") {
    s.sigma = TimeValue::infinity();
    return s;
  }
  if (sigma.size() > 1 && sigma.back() == 's' &&
      (std::isdigit(static_cast<unsigned char>(sigma[sigma.size() - 2])) ||
       sigma[sigma.size() - 2] == '.'))
    sigma.pop_back();
  try {
    s.sigma = parse_time(sigma);
  } catch (const Error&) {
    throw Error("unparseable-state-label", "'" + label + "' has a bad sigma");
  }
  return s;
}

std::string format_state_label(const UmlState& s) {
  const std::string sigma =
      s.sigma.is_infinite() ? "inf" : format_decimal(s.sigma.seconds());
  return "(" + s.phase + ", " + sigma + ")";
}

XmiDocument parse_xmi(const Node& doc) {
  XmiDocument out;
  const Node* model = &doc;
  if (doc.local_name() == "XMI") {
    model = doc.child("Model");
    if (!model) throw Error("malformed-xmi", "XMI root without a uml:Model");
  } else if (doc.local_name() != "Model") {
    throw Error("malformed-xmi",
                "expected an <xmi:XMI> or <uml:Model> document, got <" + doc.name + ">");
  }

  for (const Node& child : model->children) {
    if (child.local_name() != "packagedElement") {
      out.warnings.push_back("ignored element <" + child.name + ">");
      continue;
    }
    const std::string type = xmi_type(child);
    if (type == "uml:Component")
      out.models.emplace_back(parse_component(child));
    else if (type == "uml:StateMachine")
      out.models.emplace_back(parse_machine(child));
    else
      out.warnings.push_back("ignored packagedElement of type '" + type + "'");
  }
  return out;
}

namespace {

void emit_component(const UmlComponent& c, Node& parent) {
  Node& n = parent.add_child("packagedElement");
  n.set_attr("xmi:type", "uml:Component");
  n.set_attr("name", c.name);
  for (const auto& p : c.ports) {
    Node& pn = n.add_child("ownedAttribute");
    pn.set_attr("xmi:type", "uml:Port");
    pn.set_attr("name", p.name);
    const char* key = p.direction == UmlPort::Direction::Provided ? "provided" : "required";
    pn.set_attr(key, p.interface_name.value_or(""));
  }
  for (const auto& s : c.subcomponents) emit_component(s, n);
  for (const auto& conn : c.connectors) {
    Node& cn = n.add_child("connector");
    cn.set_attr("kind", conn.kind == UmlConnector::Kind::Assembly ? "assembly"
                                                                  : "delegation");
    cn.add_child("end").set_attr("component", conn.from_component)
        .set_attr("port", conn.from_port);
    cn.add_child("end").set_attr("component", conn.to_component)
        .set_attr("port", conn.to_port);
  }
}

void emit_machine(const UmlStateMachine& sm, Node& parent) {
  Node& n = parent.add_child("packagedElement");
  n.set_attr("xmi:type", "uml:StateMachine");
  n.set_attr("name", sm.name);
  Node& region = n.add_child("region");
  for (const auto& s : sm.states)
    region.add_child("state").set_attr("name", format_state_label(s));
  for (const auto& t : sm.transitions) {
    Node& tn = region.add_child("transition");
    tn.set_attr("from", t.from);
    tn.set_attr("to", t.to);
    if (t.trigger) tn.set_attr("trigger", *t.trigger);
    if (t.guard) tn.set_attr("guard", *t.guard);
    if (t.effect) tn.set_attr("effect", *t.effect);
    if (t.internal_kind) tn.set_attr("kind", "internal");
  }
}

}  // namespace

xml::Node emit_xmi(const std::vector<UmlModel>& models) {
  Node root;
  root.name = "xmi:XMI";
  root.set_attr("xmi:version", "2.1");
  root.set_attr("xmlns:xmi", kXmiNs);
  root.set_attr("xmlns:uml", kUmlNs);
  Node& model = root.add_child("uml:Model");
  model.set_attr("name", "model");
  for (const auto& m : models) {
    if (const auto* c = std::get_if<UmlComponent>(&m))
      emit_component(*c, model);
    else
      emit_machine(std::get<UmlStateMachine>(m), model);
  }
  return root;
}

// ------------------------------------------------- component diagram map --

namespace {

void check_interfaces(const UmlPort& a, const UmlPort& b, const std::string& where) {
  if (a.interface_name && b.interface_name && *a.interface_name != *b.interface_name)
    throw Error("incompatible-interfaces",
                where + ": '" + *a.interface_name + "' vs '" + *b.interface_name + "'");
}

}  // namespace

ComponentMapping component_to_coupled(const UmlComponent& c) {
  if (c.subcomponents.empty())
    throw Error("leaf-component",
                "'" + c.name + "' has no subcomponents; a leaf maps to an atomic model");

  ComponentMapping out;
  CoupledSpec& spec = out.coupled;
  spec.name = c.name;
  for (const auto& p : c.ports) {
    if (p.direction == UmlPort::Direction::Provided)
      spec.inports.push_back(p.name);
    else
      spec.outports.push_back(p.name);
  }
  for (const auto& s : c.subcomponents) spec.models.push_back({s.name, {}, {}});

  std::set<std::pair<std::string, std::string>> used;  // (component, port)

  auto resolve_port = [&](const std::string& comp, const std::string& port,
                          const std::string& where) -> const UmlPort* {
    const UmlComponent* owner = comp == c.name ? &c : c.find_subcomponent(comp);
    if (!owner)
      throw Error("unknown-component", where + ": no component '" + comp + "'");
    const UmlPort* p = owner->find_port(port);
    if (!p)
      throw Error("unknown-port", where + ": '" + comp + "' has no port '" + port + "'");
    return p;
  };

  for (std::size_t i = 0; i < c.connectors.size(); ++i) {
    const UmlConnector& conn = c.connectors[i];
    const std::string where = c.name + "/connector[" + std::to_string(i + 1) + "]";
    const UmlPort* from = resolve_port(conn.from_component, conn.from_port, where);
    const UmlPort* to = resolve_port(conn.to_component, conn.to_port, where);
    used.insert({conn.from_component, conn.from_port});
    used.insert({conn.to_component, conn.to_port});
    check_interfaces(*from, *to, where);

    if (conn.kind == UmlConnector::Kind::Assembly) {
      if (conn.from_component == c.name || conn.to_component == c.name)
        throw Error("direction-mismatch",
                    where + ": assembly connectors join sibling subcomponents");
      // Normalize: required end feeds the provided end.
      auto src = std::pair{conn.from_component, conn.from_port};
      auto dst = std::pair{conn.to_component, conn.to_port};
      const UmlPort* sp = from;
      const UmlPort* dp = to;
      if (sp->direction == UmlPort::Direction::Provided) {
        std::swap(src, dst);
        std::swap(sp, dp);
      }
      if (sp->direction != UmlPort::Direction::Required ||
          dp->direction != UmlPort::Direction::Provided)
        throw Error("direction-mismatch",
                    where + ": assembly needs one required and one provided port");
      spec.couplings.push_back({src.first, dst.first, src.second, dst.second});
      out.child_ports[src.first].outports.push_back(src.second);
      out.child_ports[dst.first].inports.push_back(dst.second);
    } else {
      const bool from_is_parent = conn.from_component == c.name;
      const bool to_is_parent = conn.to_component == c.name;
      if (from_is_parent == to_is_parent)
        throw Error("direction-mismatch",
                    where + ": delegation joins the component and one subcomponent");
      const std::string parent_port = from_is_parent ? conn.from_port : conn.to_port;
      const std::string child = from_is_parent ? conn.to_component : conn.from_component;
      const std::string child_port = from_is_parent ? conn.to_port : conn.from_port;
      const UmlPort* pp = from_is_parent ? from : to;
      const UmlPort* cp = from_is_parent ? to : from;
      if (pp->direction != cp->direction)
        throw Error("direction-mismatch",
                    where + ": delegation joins two ports of the same direction");
      if (pp->direction == UmlPort::Direction::Provided) {
        spec.couplings.push_back({c.name, child, parent_port, child_port});
        out.child_ports[child].inports.push_back(child_port);
      } else {
        spec.couplings.push_back({child, c.name, child_port, parent_port});
        out.child_ports[child].outports.push_back(child_port);
      }
    }
  }

  for (const auto& p : c.ports)
    if (!used.count({c.name, p.name}))
      out.warnings.push_back({"DanglingPort", c.name + "/" + p.name,
                              "port is not referenced by any connector",
                              Violation::Severity::Warning});
  for (const auto& s : c.subcomponents)
    for (const auto& p : s.ports)
      if (!used.count({s.name, p.name}))
        out.warnings.push_back({"DanglingPort", c.name + "/" + s.name + "/" + p.name,
                                "port is not referenced by any connector",
                                Violation::Severity::Warning});
  return out;
}

// ---------------------------------------------------- state machine map --

namespace {

struct EffectPayload {
  bool is_deltint = false;
  std::vector<std::pair<std::optional<PortName>, MessageLabel>> outputs;
};

// "deltint", "deltint / Msg", "deltint / port:label; port:label".
EffectPayload parse_effect(const std::string& effect) {
  EffectPayload out;
  std::string t = trim(effect);
  if (t.compare(0, std::string(kDeltintKeyword).size(), kDeltintKeyword) != 0) return out;
  t = trim(t.substr(std::string(kDeltintKeyword).size()));
  if (!t.empty() && t[0] != '/') return out;  // "deltintX" is not the keyword
  out.is_deltint = true;
  if (t.empty()) return out;
  t = trim(t.substr(1));
  std::size_t pos = 0;
  while (pos <= t.size()) {
    auto semi = t.find(';', pos);
    std::string item = trim(t.substr(pos, semi == std::string::npos ? std::string::npos
                                                                    : semi - pos));
    if (!item.empty()) {
      auto colon = item.find(':');
      if (colon == std::string::npos)
        out.outputs.push_back({std::nullopt, item});
      else
        out.outputs.push_back({trim(item.substr(0, colon)), trim(item.substr(colon + 1))});
    }
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  return out;
}

}  // namespace

AtomicSpec statemachine_to_atomic(const UmlStateMachine& sm) {
  if (sm.states.empty())
    throw Error("empty-machine", "state machine '" + sm.name + "' has no states");

  AtomicSpec spec;
  spec.name = sm.name;
  for (const auto& s : sm.states) {
    if (spec.has_state(s.phase))
      throw Error("duplicate-phase", "phase '" + s.phase + "' declared twice");
    spec.states.push_back(s.phase);
    if (!s.sigma.is_infinite()) spec.ta.push_back({s.phase, s.sigma});
  }
  spec.initial = spec.states.front();

  auto add_distinct = [](std::vector<PortName>& ports, const PortName& p) {
    if (std::find(ports.begin(), ports.end(), p) == ports.end()) ports.push_back(p);
  };

  int int_id = 0, ext_id = 0;
  for (const auto& t : sm.transitions) {
    if (!spec.has_state(t.from) || !spec.has_state(t.to))
      throw Error("unknown-phase",
                  "transition " + t.from + " -> " + t.to + " uses an undeclared phase");
    const EffectPayload effect = t.effect ? parse_effect(*t.effect) : EffectPayload{};
    if (t.trigger && effect.is_deltint)
      throw Error("invalid-transition",
                  "a transition is either triggered or a deltint effect, not both");
    if (!t.trigger && !effect.is_deltint)
      throw Error("invalid-transition",
                  "transition " + t.from + " -> " + t.to +
                      " has neither a trigger nor a deltint effect");

    if (effect.is_deltint) {
      if (spec.find_int(t.from))
        throw Error("duplicate-internal",
                    "two internal transitions leave phase '" + t.from + "'");
      spec.delt_int.push_back({t.from, t.to, ++int_id});
      for (const auto& [port, label] : effect.outputs) {
        PortName p = port ? *port : (t.guard ? *t.guard : label);
        add_distinct(spec.outports, p);
        spec.lambda.push_back({t.from, p, label});
      }
    } else {
      const MessageLabel msg = *t.trigger;
      if (spec.find_ext(t.from, msg))
        throw Error("duplicate-external", "two external transitions for ('" + t.from +
                                              "', '" + msg + "')");
      add_distinct(spec.inports, t.guard ? *t.guard : msg);
      // UML's internal TransitionKind keeps the state un-re-entered: sigma
      // keeps draining, i.e. no reschedule.
      spec.delt_ext.push_back({t.from, msg, t.to, !t.internal_kind, ++ext_id});
    }
  }

  auto vs = validate_atomic(spec);
  if (has_errors(vs)) {
    std::string msg = "machine '" + sm.name + "' does not lift to a valid atomic model:";
    for (const auto& v : vs)
      if (v.is_error()) msg += " [" + v.code + ": " + v.message + "]";
    throw Error("invalid-spec", msg);
  }
  return spec;
}

UmlComponent coupled_to_component(const CoupledSpec& spec, const ModelRegistry& reg) {
  UmlComponent c;
  c.name = spec.name;
  for (const auto& p : spec.inports)
    c.ports.push_back({p, UmlPort::Direction::Provided, std::nullopt});
  for (const auto& p : spec.outports)
    c.ports.push_back({p, UmlPort::Direction::Required, std::nullopt});

  for (const auto& ref : spec.models) {
    const ModelSpec* child = reg.find(ref.child);
    if (!child)
      throw Error("unresolved-child", "'" + ref.child + "' does not resolve");
    if (const auto* atomic = std::get_if<AtomicSpec>(child)) {
      UmlComponent leaf;
      leaf.name = ref.child;
      for (const auto& p : atomic->inports)
        leaf.ports.push_back({p, UmlPort::Direction::Provided, std::nullopt});
      for (const auto& p : atomic->outports)
        leaf.ports.push_back({p, UmlPort::Direction::Required, std::nullopt});
      c.subcomponents.push_back(std::move(leaf));
    } else {
      c.subcomponents.push_back(coupled_to_component(std::get<CoupledSpec>(*child), reg));
    }
  }

  for (const auto& cp : spec.couplings) {
    switch (spec.classify(cp)) {
      case CouplingKind::EIC:
        c.connectors.push_back({UmlConnector::Kind::Delegation, spec.name, cp.outport,
                                cp.dest, cp.inport});
        break;
      case CouplingKind::EOC:
        c.connectors.push_back({UmlConnector::Kind::Delegation, cp.src, cp.outport,
                                spec.name, cp.inport});
        break;
      case CouplingKind::IC:
        c.connectors.push_back({UmlConnector::Kind::Assembly, cp.src, cp.outport,
                                cp.dest, cp.inport});
        break;
      case CouplingKind::Invalid:
        throw Error("invalid-spec", "unclassifiable coupling in '" + spec.name + "'");
    }
  }
  return c;
}

UmlStateMachine atomic_to_statemachine(const AtomicSpec& spec) {
  auto vs = validate_atomic(spec);
  if (has_errors(vs))
    throw Error("invalid-spec", "'" + spec.name + "' does not validate");

  UmlStateMachine sm;
  sm.name = spec.name;
  for (const auto& s : spec.states) {
    const TaEntry* ta = spec.find_ta(s);
    sm.states.push_back({s, ta ? ta->timeout : TimeValue::infinity()});
  }

  for (const auto& it : spec.delt_int) {
    UmlTransition t;
    t.from = it.from;
    t.to = it.to;
    auto entries = spec.find_lambda(it.from);
    if (entries.empty()) {
      t.effect = kDeltintKeyword;
    } else if (entries.size() == 1) {
      const LambdaEntry* e = entries.front();
      t.effect = std::string(kDeltintKeyword) + " / " + e->label();
      if (e->outport != e->label()) t.guard = e->outport;
    } else {
      std::string items;
      for (const LambdaEntry* e : entries) {
        if (!items.empty()) items += "; ";
        items += e->outport + ":" + e->label();
      }
      t.effect = std::string(kDeltintKeyword) + " / " + items;
    }
    sm.transitions.push_back(std::move(t));
  }

  for (const auto& et : spec.delt_ext) {
    UmlTransition t;
    t.from = et.from;
    t.to = et.to;
    t.trigger = et.message;
    t.internal_kind = !et.schedule;
    // The tables key on message labels, not ports; recover a port name only
    // when it is unambiguous.
    const bool msg_is_port =
        std::find(spec.inports.begin(), spec.inports.end(), et.message) !=
        spec.inports.end();
    if (!msg_is_port && spec.inports.size() == 1) t.guard = spec.inports.front();
    sm.transitions.push_back(std::move(t));
  }
  return sm;
}

ModelRegistry uml_to_registry(const std::vector<UmlModel>& models) {
  std::map<std::string, const UmlStateMachine*> machines;
  for (const auto& m : models)
    if (const auto* sm = std::get_if<UmlStateMachine>(&m)) {
      if (!machines.emplace(sm->name, sm).second)
        throw Error("duplicate-model", "two state machines named '" + sm->name + "'");
    }

  ModelRegistry reg;
  std::set<std::string> bound;

  auto bind_leaf = [&](const UmlComponent& c) {
    auto it = machines.find(c.name);
    if (it == machines.end())
      throw Error("missing-machine",
                  "leaf component '" + c.name + "' has no state machine of that name");
    AtomicSpec spec = statemachine_to_atomic(*it->second);
    // The component diagram owns the atomic's interface.
    spec.inports.clear();
    spec.outports.clear();
    for (const auto& p : c.ports) {
      if (p.direction == UmlPort::Direction::Provided)
        spec.inports.push_back(p.name);
      else
        spec.outports.push_back(p.name);
    }
    auto vs = validate_atomic(spec);
    if (has_errors(vs)) {
      std::string msg = "component '" + c.name + "' ports conflict with its machine:";
      for (const auto& v : vs)
        if (v.is_error()) msg += " [" + v.code + ": " + v.message + "]";
      throw Error("invalid-spec", msg);
    }
    bound.insert(c.name);
    reg.add(std::move(spec));
  };

  std::function<void(const UmlComponent&)> walk = [&](const UmlComponent& c) {
    if (c.subcomponents.empty()) {
      bind_leaf(c);
      return;
    }
    reg.add(component_to_coupled(c).coupled);
    for (const auto& s : c.subcomponents) walk(s);
  };

  for (const auto& m : models)
    if (const auto* c = std::get_if<UmlComponent>(&m)) walk(*c);
  for (const auto& m : models)
    if (const auto* sm = std::get_if<UmlStateMachine>(&m))
      if (!bound.count(sm->name)) reg.add(statemachine_to_atomic(*sm));

  return reg;
}

}  // namespace xfd::uml
