#ifndef XFD_UML_UML_HPP
#define XFD_UML_UML_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "xfd/model.hpp"
#include "xfd/registry.hpp"
#include "xfd/violation.hpp"
#include "xfd/xml/dom.hpp"

namespace xfd::uml {

/// A component port. Provided interfaces ("lollipops") are inputs, required
/// interfaces ("antennas") are outputs; a port is never both.
struct UmlPort {
  enum class Direction { Provided, Required };

  std::string name;
  Direction direction = Direction::Provided;
  std::optional<std::string> interface_name;

  friend bool operator==(const UmlPort&, const UmlPort&) = default;
};

/// Assembly connectors join a required port to a provided port of sibling
/// subcomponents; delegation connectors join same-direction ports of the
/// parent and one child.
struct UmlConnector {
  enum class Kind { Assembly, Delegation };

  Kind kind = Kind::Assembly;
  std::string from_component;
  std::string from_port;
  std::string to_component;
  std::string to_port;

  friend bool operator==(const UmlConnector&, const UmlConnector&) = default;
};

struct UmlComponent {
  std::string name;
  std::vector<UmlPort> ports;
  std::vector<UmlComponent> subcomponents;
  std::vector<UmlConnector> connectors;

  const UmlPort* find_port(const std::string& port_name) const;
  const UmlComponent* find_subcomponent(const std::string& sub_name) const;

  friend bool operator==(const UmlComponent&, const UmlComponent&) = default;
};

/// A state labelled "(phase, sigma)".
struct UmlState {
  std::string phase;
  TimeValue sigma = TimeValue::infinity();

  friend bool operator==(const UmlState&, const UmlState&) = default;
};

/// Either an external transition (trigger = incoming event) or an internal
/// one (effect text starting with the deltint keyword). UML's
/// TransitionKind "internal" marks triggered transitions that do not
/// re-enter their state, i.e. do not restart sigma.
struct UmlTransition {
  std::string from;
  std::string to;
  std::optional<std::string> trigger;
  std::optional<std::string> guard;
  std::optional<std::string> effect;
  bool internal_kind = false;

  friend bool operator==(const UmlTransition&, const UmlTransition&) = default;
};

struct UmlStateMachine {
  std::string name;
  std::vector<UmlState> states;
  std::vector<UmlTransition> transitions;

  friend bool operator==(const UmlStateMachine&, const UmlStateMachine&) = default;
};

using UmlModel = std::variant<UmlComponent, UmlStateMachine>;

struct XmiDocument {
  std::vector<UmlModel> models;
  std::vector<std::string> warnings;  // skipped packagedElement kinds etc.
};

/// Reads the documented XMI subset (see docs/formats.md). Throws on
/// malformed input, unparseable "(phase, sigma)" labels and ports that
/// declare both a provided and a required interface.
XmiDocument parse_xmi(const xml::Node& doc);

/// Emits the subset so that parse_xmi(emit_xmi(x)) == x.
xml::Node emit_xmi(const std::vector<UmlModel>& models);

/// "(phase, sigma)" with sigma a decimal (optional "s" suffix) or "inf".
UmlState parse_state_label(const std::string& label);
std::string format_state_label(const UmlState& s);

struct PortUse {
  std::vector<PortName> inports;
  std::vector<PortName> outports;
};

struct ComponentMapping {
  CoupledSpec coupled;
  // Ports each child must offer for the couplings to make sense.
  std::map<std::string, PortUse> child_ports;
  std::vector<Violation> warnings;  // dangling ports
};

/// Component diagram -> coupled model: provided ports become inports,
/// required ports outports, subcomponents the child list, assembly
/// connectors ICs and delegation connectors EIC/EOC by port direction.
/// Connected ports that both declare an interface must agree on it.
ComponentMapping component_to_coupled(const UmlComponent& c);

/// State machine -> atomic model: phases are states (first declared is
/// initial), sigma is ta, deltint-effect transitions map to internal
/// transitions plus output entries, triggered transitions to external
/// transitions (schedule=false for kind=internal). A guard names the port
/// carrying the interface; otherwise the event/activity name is used.
AtomicSpec statemachine_to_atomic(const UmlStateMachine& sm);

/// Inverse of component_to_coupled; child port lists come from the
/// resolved specs in `reg`.
UmlComponent coupled_to_component(const CoupledSpec& spec, const ModelRegistry& reg);

/// Inverse of statemachine_to_atomic.
UmlStateMachine atomic_to_statemachine(const AtomicSpec& spec);

/// Builds a registry from one parsed XMI document: nested components become
/// coupled models, leaf components bind the state machine of the same name
/// (the component's ports override the machine-derived ones), and machines
/// without a component stand alone as atomics.
ModelRegistry uml_to_registry(const std::vector<UmlModel>& models);

}  // namespace xfd::uml

#endif
