#include "xfd/sim/engine.hpp"

#include <algorithm>

#include "xfd/error.hpp"
#include "xfd/semantics.hpp"

namespace xfd::sim {

RouteResult route(const CoupledSpec& spec, const std::map<std::string, Bag>& produced,
                  const Bag& external_in) {
  RouteResult r;
  for (const auto& c : spec.couplings) {
    switch (spec.classify(c)) {
      case CouplingKind::EIC:
        for (const Message& m : external_in.items())
          if (m.port == c.outport) r.per_child[c.dest].add(c.inport, m.label);
        break;
      case CouplingKind::EOC:
        if (auto it = produced.find(c.src); it != produced.end())
          for (const Message& m : it->second.items())
            if (m.port == c.outport) r.external_out.add(c.inport, m.label);
        break;
      case CouplingKind::IC:
        if (auto it = produced.find(c.src); it != produced.end())
          for (const Message& m : it->second.items())
            if (m.port == c.outport) r.per_child[c.dest].add(c.inport, m.label);
        break;
      case CouplingKind::Invalid:
        break;  // validation rejects these; routing never sees them
    }
  }
  return r;
}

void SimTree::build(const ModelRegistry& reg, const std::string& model_name,
                    const std::string& child_name, const std::string& parent_path,
                    Component& out) {
  const ModelSpec* spec = reg.find(model_name);
  if (!spec)
    throw Error("unresolved-model", "model '" + model_name + "' is not in the registry");

  out.name = child_name;
  out.path = parent_path.empty() ? child_name : parent_path + "/" + child_name;

  if (const auto* atomic = std::get_if<AtomicSpec>(spec)) {
    SimNode node;
    node.path = out.path;
    node.spec = atomic;
    nodes_.push_back(std::move(node));
    out.node_index = static_cast<int>(nodes_.size()) - 1;
    return;
  }

  const auto& coupled = std::get<CoupledSpec>(*spec);
  out.coupled = &coupled;
  out.children.reserve(coupled.models.size());
  for (const auto& ref : coupled.models) {
    out.children.emplace_back();
    build(reg, ref.child, ref.child, out.path, out.children.back());
  }
}

void SimTree::relink(Component& c) {
  if (c.node_index >= 0) {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].path == c.path) {
        c.node_index = static_cast<int>(i);
        return;
      }
  }
  for (Component& child : c.children) relink(child);
}

SimTree SimTree::initialize(const ModelRegistry& reg, const std::string& root_name,
                            TimeValue t0, int instant_step_cap) {
  auto vs = reg.validate();
  if (has_errors(vs)) {
    std::string msg = "registry does not validate:";
    for (const auto& v : vs)
      if (v.is_error()) msg += " [" + v.code + " at " + v.path + "]";
    throw Error("validation-failed", msg);
  }
  if (!reg.contains(root_name))
    throw Error("unresolved-model", "root model '" + root_name + "' is not in the registry");

  SimTree tree;
  tree.registry_ = reg;
  tree.instant_step_cap_ = instant_step_cap;

  // Build the component tree against the tree's own registry copy. Children
  // of the root use bare child names as paths; only a root atomic is
  // identified by its own name.
  const ModelSpec* root_spec = tree.registry_.find(root_name);
  if (std::holds_alternative<AtomicSpec>(*root_spec)) {
    tree.build(tree.registry_, root_name, root_name, "", tree.root_);
  } else {
    const auto& coupled = std::get<CoupledSpec>(*root_spec);
    tree.root_.name = root_name;
    tree.root_.path = "";
    tree.root_.coupled = &coupled;
    for (const auto& ref : coupled.models) {
      tree.root_.children.emplace_back();
      tree.build(tree.registry_, ref.child, ref.child, "", tree.root_.children.back());
    }
  }

  // Canonical (path-lexicographic) node order fixes the intra-instant trace
  // order; re-link the component tree afterwards.
  std::sort(tree.nodes_.begin(), tree.nodes_.end(),
            [](const SimNode& a, const SimNode& b) { return a.path < b.path; });
  tree.relink(tree.root_);

  tree.now_ = t0;
  tree.instant_time_ = t0;
  tree.instant_steps_ = 0;
  for (SimNode& n : tree.nodes_) {
    n.state = n.spec->initial;
    n.tl = t0;
    n.tn = t0 + time_advance(*n.spec, n.state);
    TraceEvent ev;
    ev.t = t0;
    ev.model = n.path;
    ev.kind = EventKind::Init;
    ev.after = n.state;
    tree.trace_.events.push_back(std::move(ev));
  }
  tree.trace_.termination = t0;
  return tree;
}

TimeValue SimTree::next_event_time() const {
  TimeValue min = TimeValue::infinity();
  for (const SimNode& n : nodes_)
    if (n.tn < min) min = n.tn;
  return min;
}

Bag SimTree::collect_up(const Component& c, const std::map<int, Bag>& outputs,
                        std::map<const Component*, std::map<std::string, Bag>>& produced) const {
  if (c.node_index >= 0) {
    auto it = outputs.find(c.node_index);
    return it == outputs.end() ? Bag{} : it->second;
  }
  std::map<std::string, Bag> child_out;
  for (const Component& child : c.children)
    child_out[child.name] = collect_up(child, outputs, produced);
  Bag up = route(*c.coupled, child_out, Bag{}).external_out;
  produced[&c] = std::move(child_out);
  return up;
}

void SimTree::distribute_down(
    const Component& c, const Bag& external_in,
    const std::map<const Component*, std::map<std::string, Bag>>& produced,
    std::map<int, Bag>& inputs) const {
  if (c.node_index >= 0) {
    if (!external_in.empty()) inputs[c.node_index].merge(external_in);
    return;
  }
  RouteResult r = route(*c.coupled, produced.at(&c), external_in);
  for (const Component& child : c.children) {
    auto it = r.per_child.find(child.name);
    distribute_down(child, it == r.per_child.end() ? Bag{} : it->second, produced, inputs);
  }
}

Bag SimTree::step(const Bag& external_in, TimeValue t) {
  for (const SimNode& n : nodes_) {
    if (t < n.tl)
      throw Error("time-regression",
                  "step at t=" + format_time(t) + " precedes tl of '" + n.path + "'");
    if (n.tn < t)
      throw Error("time-regression",
                  "step at t=" + format_time(t) + " would skip the event of '" + n.path +
                      "' scheduled at " + format_time(n.tn));
  }

  if (t == instant_time_ && !trace_.events.empty()) {
    if (++instant_steps_ > instant_step_cap_)
      throw Error("zero-time-loop",
                  "more than " + std::to_string(instant_step_cap_) +
                      " consecutive steps at t=" + format_time(t));
  } else {
    instant_time_ = t;
    instant_steps_ = 1;
  }
  now_ = t;

  // Phase 1: outputs of all imminent atomics, in canonical path order.
  std::map<int, Bag> outputs;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    SimNode& n = nodes_[i];
    if (n.tn != t) continue;
    Bag bag = output(*n.spec, n.state);
    for (const Message& m : bag.items()) {
      TraceEvent ev;
      ev.t = t;
      ev.model = n.path;
      ev.kind = EventKind::Output;
      ev.port = m.port;
      ev.label = m.label;
      trace_.events.push_back(std::move(ev));
    }
    outputs[static_cast<int>(i)] = std::move(bag);
  }

  // Phase 2: route through the coupling hierarchy.
  std::map<const Component*, std::map<std::string, Bag>> produced;
  Bag external_out = collect_up(root_, outputs, produced);
  std::map<int, Bag> inputs;
  distribute_down(root_, external_in, produced, inputs);

  // Phase 3: transitions, canonical path order.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    SimNode& n = nodes_[i];
    const bool imminent = n.tn == t;
    auto in_it = inputs.find(static_cast<int>(i));
    const bool has_input = in_it != inputs.end() && !in_it->second.empty();
    if (!imminent && !has_input) continue;

    TraceEvent ev;
    ev.t = t;
    ev.model = n.path;
    ev.before = n.state;

    if (imminent && !has_input) {
      ev.kind = EventKind::Internal;
      n.state = delta_int(*n.spec, n.state);
      n.tl = t;
      n.tn = t + time_advance(*n.spec, n.state);
    } else if (imminent && has_input) {
      ev.kind = EventKind::Confluent;
      n.state = delta_con(*n.spec, n.state, in_it->second);
      n.tl = t;
      n.tn = t + time_advance(*n.spec, n.state);
    } else {
      ev.kind = EventKind::External;
      auto [next, reschedule] = apply_bag(*n.spec, n.state, in_it->second);
      n.state = std::move(next);
      n.tl = t;
      if (reschedule) n.tn = t + time_advance(*n.spec, n.state);
      // otherwise tn is kept: the remaining time shrinks by the elapsed time
    }
    ev.after = n.state;
    trace_.events.push_back(std::move(ev));
  }

  if (trace_.termination < t) trace_.termination = t;
  return external_out;
}

const Trace& SimTree::run_until(TimeValue t_end) {
  if (t_end < now_)
    throw Error("time-regression", "t_end precedes the current simulation time");
  for (;;) {
    TimeValue tn = next_event_time();
    if (tn.is_infinite() || tn > t_end) break;
    step(Bag{}, tn);
  }
  if (!t_end.is_infinite()) trace_.termination = t_end;
  return trace_;
}

const SimNode* SimTree::node(const std::string& path) const {
  for (const SimNode& n : nodes_)
    if (n.path == path) return &n;
  return nullptr;
}

std::vector<const SimNode*> SimTree::nodes() const {
  std::vector<const SimNode*> out;
  out.reserve(nodes_.size());
  for (const SimNode& n : nodes_) out.push_back(&n);
  return out;
}

SimTree initialize(const ModelRegistry& reg, const std::string& root_name, TimeValue t0) {
  return SimTree::initialize(reg, root_name, t0);
}

TimeValue next_event_time(const SimTree& tree) { return tree.next_event_time(); }

Trace run_until(SimTree& tree, TimeValue t_end) { return tree.run_until(t_end); }

}  // namespace xfd::sim
