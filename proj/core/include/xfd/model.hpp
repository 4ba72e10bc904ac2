#ifndef XFD_MODEL_HPP
#define XFD_MODEL_HPP

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "xfd/time_value.hpp"

namespace xfd {

// Port, state and message identities are non-empty text tokens, unique
// within their owning set. Uniqueness is enforced by validation, not the
// type system.
using PortName = std::string;
using StateName = std::string;
using MessageLabel = std::string;

/// One (port, label) pair exchanged at a simulation instant.
struct Message {
  PortName port;
  MessageLabel label;

  auto operator<=>(const Message&) const = default;
};

/// Multiset of messages present at one instant. Duplicates are meaningful;
/// equality and the canonical view are order-insensitive.
class Bag {
public:
  Bag() = default;
  Bag(std::initializer_list<Message> items) : items_(items) {}

  void add(Message m) { items_.push_back(std::move(m)); }
  void add(PortName port, MessageLabel label) {
    items_.push_back({std::move(port), std::move(label)});
  }
  void merge(const Bag& other) {
    items_.insert(items_.end(), other.items_.begin(), other.items_.end());
  }

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const std::vector<Message>& items() const { return items_; }

  /// Items sorted by (port, label), duplicates preserved.
  std::vector<Message> canonical() const;

  friend bool operator==(const Bag& a, const Bag& b) {
    return a.canonical() == b.canonical();
  }

private:
  std::vector<Message> items_;
};

/// One output-function entry: emit `label()` on `outport` when the owning
/// state departs. Without an explicit label the port name is the label.
struct LambdaEntry {
  StateName state;
  PortName outport;
  std::optional<MessageLabel> out_label;

  MessageLabel label() const { return out_label ? *out_label : outport; }

  auto operator<=>(const LambdaEntry&) const = default;
};

struct TaEntry {
  StateName state;
  TimeValue timeout;

  auto operator<=>(const TaEntry&) const = default;
};

struct InternalTransition {
  StateName from;
  StateName to;
  int id = 0;

  auto operator<=>(const InternalTransition&) const = default;
};

struct ExternalTransition {
  StateName from;
  MessageLabel message;
  StateName to;
  bool schedule = true;
  int id = 0;

  auto operator<=>(const ExternalTransition&) const = default;
};

/// A finite-deterministic atomic model: finite state/message sets and
/// deterministic transition tables. Entries keep declaration order (the
/// serialized form is declaration-ordered); determinism is a validation
/// rule, not a container property.
struct AtomicSpec {
  std::string name;
  std::string host = "localhost";
  std::vector<PortName> inports;
  std::vector<PortName> outports;
  std::vector<StateName> states;  // emitters write the initial state first
  StateName initial;
  std::vector<TaEntry> ta;
  std::vector<LambdaEntry> lambda;
  std::vector<InternalTransition> delt_int;
  std::vector<ExternalTransition> delt_ext;

  const TaEntry* find_ta(const StateName& s) const;
  const InternalTransition* find_int(const StateName& s) const;
  const ExternalTransition* find_ext(const StateName& s, const MessageLabel& m) const;
  std::vector<const LambdaEntry*> find_lambda(const StateName& s) const;
  bool has_state(const StateName& s) const;

  friend bool operator==(const AtomicSpec&, const AtomicSpec&) = default;
};

/// Reference to a child model by name, with optional serialization hints.
struct ModelRef {
  std::string child;
  std::optional<std::string> type_hint;
  std::optional<std::string> platform_hint;

  friend bool operator==(const ModelRef&, const ModelRef&) = default;
};

/// Directed coupling. `outport` is the source-side port and `inport` the
/// destination-side port; for an EIC the source-side port is one of the
/// coupled model's own inports (the schema keeps the field names anyway).
struct Coupling {
  std::string src;
  std::string dest;
  PortName outport;
  PortName inport;

  auto operator<=>(const Coupling&) const = default;
};

enum class CouplingKind { EIC, EOC, IC, Invalid };

struct CoupledSpec {
  std::string name;
  std::string host = "localhost";
  std::vector<PortName> inports;
  std::vector<PortName> outports;
  std::vector<ModelRef> models;
  std::vector<Coupling> couplings;

  /// Partition rule: src = self -> EIC, dest = self -> EOC, two distinct
  /// children -> IC. Self-to-self and unknown endpoints are Invalid.
  CouplingKind classify(const Coupling& c) const;
  bool has_child(const std::string& name) const;
  bool has_inport(const PortName& p) const;
  bool has_outport(const PortName& p) const;

  friend bool operator==(const CoupledSpec&, const CoupledSpec&) = default;
};

}  // namespace xfd

#endif
