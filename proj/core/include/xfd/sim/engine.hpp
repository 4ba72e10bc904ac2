#ifndef XFD_SIM_ENGINE_HPP
#define XFD_SIM_ENGINE_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "xfd/model.hpp"
#include "xfd/registry.hpp"
#include "xfd/sim/trace.hpp"

namespace xfd::sim {

/// Runtime state of one atomic component. The elapsed time at instant `now`
/// is now - tl; tn is the scheduled internal event.
struct SimNode {
  std::string path;  // child names joined by '/'; the root atomic keeps its own name
  const AtomicSpec* spec = nullptr;
  StateName state;
  TimeValue tl{0.0};
  TimeValue tn = TimeValue::infinity();
};

/// Where one instant's root output went.
struct RouteResult {
  std::map<std::string, Bag> per_child;
  Bag external_out;
};

/// Copies every produced (port, label) along each matching coupling:
/// child outputs travel over IC (relabelled to the destination inport) and
/// EOC, external input over EIC. Unmatched items drop silently.
RouteResult route(const CoupledSpec& spec, const std::map<std::string, Bag>& produced,
                  const Bag& external_in);

/// Deterministic Parallel-DEVS execution over one model tree. Single-owner
/// mutable object; it keeps its own copy of the registry, so the source
/// registry may go away. Movable, not copyable.
class SimTree {
public:
  SimTree(SimTree&&) = default;
  SimTree& operator=(SimTree&&) = default;
  SimTree(const SimTree&) = delete;
  SimTree& operator=(const SimTree&) = delete;

  /// Builds the runtime tree: every atomic starts at (initial, tl=t0,
  /// tn=t0+ta(initial)) and logs an INIT event. Throws on validation
  /// failures and unresolved models.
  static SimTree initialize(const ModelRegistry& reg, const std::string& root_name,
                            TimeValue t0, int instant_step_cap = 10000);

  /// Minimum tn over all atomics; infinity when everything is passive.
  TimeValue next_event_time() const;

  /// Executes one simulation instant at time t: outputs of all imminent
  /// atomics, routing, then the internal/external/confluent transitions.
  /// Returns the bag leaving through the root model's output ports.
  /// `external_in` is injected on the root model's inports.
  Bag step(const Bag& external_in, TimeValue t);

  /// Advances instant by instant until the next event would fall after
  /// t_end. With a finite t_end the trace terminates exactly there; with an
  /// infinite one it terminates at the last event (run to quiescence).
  const Trace& run_until(TimeValue t_end);

  const Trace& trace() const { return trace_; }
  TimeValue now() const { return now_; }

  const SimNode* node(const std::string& path) const;
  std::vector<const SimNode*> nodes() const;

private:
  struct Component {
    std::string name;
    std::string path;
    const CoupledSpec* coupled = nullptr;  // null for atomics
    int node_index = -1;                   // set for atomics
    std::vector<Component> children;
  };

  SimTree() = default;

  void build(const ModelRegistry& reg, const std::string& model_name,
             const std::string& child_name, const std::string& parent_path,
             Component& out);
  void relink(Component& c);
  Bag collect_up(const Component& c, const std::map<int, Bag>& outputs,
                 std::map<const Component*, std::map<std::string, Bag>>& produced) const;
  void distribute_down(const Component& c, const Bag& external_in,
                       const std::map<const Component*, std::map<std::string, Bag>>& produced,
                       std::map<int, Bag>& inputs) const;

  // Spec pointers in nodes_/root_ aim into registry_'s map nodes, which stay
  // put when the tree is moved.
  ModelRegistry registry_;
  Component root_;
  std::vector<SimNode> nodes_;  // sorted by path
  Trace trace_;
  TimeValue now_{0.0};
  TimeValue instant_time_{0.0};
  int instant_steps_ = 0;
  int instant_step_cap_ = 10000;
};

/// Free-function spellings of the engine operations.
SimTree initialize(const ModelRegistry& reg, const std::string& root_name, TimeValue t0);
TimeValue next_event_time(const SimTree& tree);
Trace run_until(SimTree& tree, TimeValue t_end);

struct FlattenResult {
  CoupledSpec root;
  ModelRegistry registry;
};

/// Closure under coupling: one single-level coupled model whose children are
/// the transitively contained atomics (path names) and whose couplings are
/// the chain compositions of the original EIC/EOC/IC relations. Simulating
/// the result reproduces the hierarchical trace.
FlattenResult flatten(const ModelRegistry& reg, const std::string& root_name);

}  // namespace xfd::sim

#endif
