#ifndef XFD_SCXML_SCXML_HPP
#define XFD_SCXML_SCXML_HPP

#include <optional>
#include <string>
#include <vector>

#include "xfd/model.hpp"
#include "xfd/xml/dom.hpp"

namespace xfd::scxml {

/// One internal-behavior record: after `timeout` in `start_state`, emit
/// `out_msg` and move to `next_state`.
struct IntRec {
  std::string start_state;
  std::string next_state;
  TimeValue timeout{0.0};
  std::string timeout_text;  // original lexical form, kept for emission
  MessageLabel out_msg;

  friend bool operator==(const IntRec&, const IntRec&) = default;
};

/// One external-behavior record. The statemachine dialect carries a timeout
/// and an outMsg here too; they are preserved for emission and dropped when
/// lifting.
struct ExtRec {
  MessageLabel incoming_msg;
  std::string start_state;
  std::string next_state;
  TimeValue timeout{0.0};
  std::string timeout_text = "0";
  MessageLabel out_msg;

  friend bool operator==(const ExtRec&, const ExtRec&) = default;
};

/// The intermediate "statemachine" document produced from SCXML.
struct StateMachineDoc {
  std::string name = "default";
  std::string host = "localhost";
  std::vector<IntRec> internal;
  std::vector<ExtRec> external;

  friend bool operator==(const StateMachineDoc&, const StateMachineDoc&) = default;
};

/// Native reimplementation of the SCXML -> statemachine transform:
///  - one IntRec per <send>, taking the enclosing state via the grandparent
///    rule, the matching transition's @target as next state, @delay as
///    timeout and @event as output message;
///  - one ExtRec per event-bearing <transition> whose event is not claimed
///    by any <send>;
///  - @delay accepts bare decimals plus "s"/"ms" suffixes.
/// Throws Error on sends without delay/event, events matching no or several
/// transitions, and sends outside any identified state.
StateMachineDoc transform_scxml(const xml::Node& scxml_doc);

/// The statemachine dialect exactly as the transform templates shape it.
xml::Node emit_statemachine_xml(const StateMachineDoc& sm);
StateMachineDoc parse_statemachine_xml(const xml::Node& doc);

/// Reconciles a statemachine document into an atomic spec: states are the
/// record endpoints (first start state is initial), IntRecs define ta,
/// deltint and lambda (one outport per distinct outMsg), ExtRecs define
/// deltext (schedule=true) with one inport per distinct incoming message.
/// The result passes validate_atomic; conflicts throw.
AtomicSpec lift_statemachine(const StateMachineDoc& sm);

}  // namespace xfd::scxml

#endif
