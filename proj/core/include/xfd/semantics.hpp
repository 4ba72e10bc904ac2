#ifndef XFD_SEMANTICS_HPP
#define XFD_SEMANTICS_HPP

#include <utility>
#include <vector>

#include "xfd/model.hpp"
#include "xfd/registry.hpp"
#include "xfd/violation.hpp"

namespace xfd {

// The characteristic functions of an atomic model, as pure functions of the
// spec. All throw Error("unknown-state") when `s` is not a declared state.

/// ta(s); a state without an entry is passive (infinity).
TimeValue time_advance(const AtomicSpec& spec, const StateName& s);

/// All (outport, label) pairs emitted when `s` departs; empty bag when the
/// state has no output entry.
Bag output(const AtomicSpec& spec, const StateName& s);

/// Next state of the unique internal transition from `s`. Throws
/// Error("no-internal-transition") when none exists.
StateName delta_int(const AtomicSpec& spec, const StateName& s);

/// External transition for one message. An unmatched (s, m) is absorbed:
/// state unchanged, schedule=false.
std::pair<StateName, bool> delta_ext(const AtomicSpec& spec, const StateName& s,
                                     const MessageLabel& m);

/// Folds delta_ext over the bag in canonical order (sort by port then label,
/// duplicates preserved). The returned flag is true iff any applied entry
/// requested rescheduling.
std::pair<StateName, bool> apply_bag(const AtomicSpec& spec, const StateName& s,
                                     const Bag& b);

/// Confluent transition, internal-first: delta_int, then the bag. Satisfies
/// delta_con(s, {}) = delta_int(s) by construction.
StateName delta_con(const AtomicSpec& spec, const StateName& s, const Bag& b);

/// Structural validation of an atomic spec: token well-formedness,
/// uniqueness, reference resolution, table determinism, and the rule that
/// every state with finite ta has an internal transition.
std::vector<Violation> validate_atomic(const AtomicSpec& spec);

/// Spec-internal coupled checks: child uniqueness, coupling classification,
/// self-couplings, couplings naming models outside the child list.
std::vector<Violation> validate_coupled(const CoupledSpec& spec);

/// Full coupled checks: the above plus child resolution in `reg` and
/// existence of every referenced port on the resolved model.
std::vector<Violation> validate_coupled(const CoupledSpec& spec, const ModelRegistry& reg);

}  // namespace xfd

#endif
