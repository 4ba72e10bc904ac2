#include <algorithm>
#include <map>

#include "xfd/error.hpp"
#include "xfd/semantics.hpp"
#include "xfd/sim/engine.hpp"

namespace xfd::sim {

namespace {

// Endpoint of a coupling chain: a component instance (by path; "" is the
// root) and a port on it.
struct Endpoint {
  std::string path;
  PortName port;

  bool operator<(const Endpoint& o) const {
    return path != o.path ? path < o.path : port < o.port;
  }
};

struct Instance {
  std::string path;  // "" for the root
  const CoupledSpec* coupled = nullptr;
  const AtomicSpec* atomic = nullptr;
  std::vector<std::pair<std::string, std::string>> children;  // name -> path
};

class Flattener {
public:
  Flattener(const ModelRegistry& reg) : reg_(reg) {}

  FlattenResult run(const std::string& root_name) {
    auto vs = reg_.validate();
    if (has_errors(vs))
      throw Error("validation-failed", "registry does not validate");
    const CoupledSpec* root = reg_.find_coupled(root_name);
    if (!root)
      throw Error("unresolved-model",
                  "flatten needs a coupled root; '" + root_name + "' is not one");

    root_name_ = root_name;
    expand(root_name, "");

    CoupledSpec flat;
    flat.name = root_name;
    flat.host = root->host;
    flat.inports = root->inports;
    flat.outports = root->outports;
    for (const auto& [path, inst] : instances_)
      if (inst.atomic && !path.empty()) flat.models.push_back({path, {}, {}});
    // Structure (discovery) order, not map order:
    std::sort(flat.models.begin(), flat.models.end(),
              [&](const ModelRef& a, const ModelRef& b) {
                return discovery_.at(a.child) < discovery_.at(b.child);
              });

    // EICs: chains from every root inport down to atomic inports.
    for (const PortName& p : root->inports) {
      std::vector<Coupling> found;
      follow_input({"", p}, {"", p}, found);
      append(flat.couplings, found);
    }
    // ICs and EOCs: chains from every atomic outport.
    std::vector<Coupling> ics, eocs;
    for (const auto& [path, inst] : instances_) {
      if (!inst.atomic) continue;
      for (const PortName& p : inst.atomic->outports)
        follow_output({path, p}, {path, p}, ics, eocs);
    }
    append(flat.couplings, ics);
    append(flat.couplings, eocs);

    ModelRegistry out;
    for (const auto& [path, inst] : instances_) {
      if (!inst.atomic || path.empty()) continue;
      AtomicSpec copy = *inst.atomic;
      copy.name = path;
      out.add(std::move(copy));
    }
    out.add(flat);
    return {std::move(flat), std::move(out)};
  }

private:
  void expand(const std::string& model_name, const std::string& path) {
    const ModelSpec* spec = reg_.find(model_name);
    if (!spec)
      throw Error("unresolved-model", "model '" + model_name + "' is not in the registry");
    Instance inst;
    inst.path = path;
    discovery_.emplace(path, discovery_.size());
    if (const auto* a = std::get_if<AtomicSpec>(spec)) {
      inst.atomic = a;
    } else {
      const auto& c = std::get<CoupledSpec>(*spec);
      inst.coupled = &c;
      for (const auto& ref : c.models) {
        const std::string child_path = path.empty() ? ref.child : path + "/" + ref.child;
        inst.children.emplace_back(ref.child, child_path);
        expand(ref.child, child_path);
      }
    }
    instances_.emplace(path, std::move(inst));
  }

  const Instance& at(const std::string& path) const { return instances_.at(path); }

  std::string child_path(const Instance& parent, const std::string& child_name) const {
    for (const auto& [name, path] : parent.children)
      if (name == child_name) return path;
    throw Error("unresolved-model", "no child '" + child_name + "'");
  }

  static std::string parent_of(const std::string& path) {
    auto pos = path.rfind('/');
    return pos == std::string::npos ? std::string{} : path.substr(0, pos);
  }

  // Follows an input-side endpoint (an inport of a coupled instance or the
  // root) down EIC edges until atomics are reached.
  void follow_input(const Endpoint& origin, const Endpoint& at_point,
                    std::vector<Coupling>& out) {
    const Instance& inst = at(at_point.path);
    if (inst.atomic) {
      out.push_back({origin.path.empty() ? root_src() : origin.path,
                     at_point.path, origin.port, at_point.port});
      return;
    }
    for (const auto& c : inst.coupled->couplings) {
      if (inst.coupled->classify(c) != CouplingKind::EIC) continue;
      if (c.outport != at_point.port) continue;
      follow_input(origin, {child_path(inst, c.dest), c.inport}, out);
    }
  }

  // Follows an output-side endpoint (an atomic or coupled instance outport)
  // through EOC chains upward and IC crossings, then input-side downward.
  void follow_output(const Endpoint& origin, const Endpoint& at_point,
                     std::vector<Coupling>& ics, std::vector<Coupling>& eocs) {
    if (at_point.path.empty()) {
      // Reached a root outport: one flattened EOC.
      eocs.push_back({origin.path, root_src(), origin.port, at_point.port});
      return;
    }
    const std::string parent = parent_of(at_point.path);
    const Instance& penc = at(parent);
    const std::string child_name = at_point.path.substr(parent.empty() ? 0 : parent.size() + 1);
    for (const auto& c : penc.coupled->couplings) {
      switch (penc.coupled->classify(c)) {
        case CouplingKind::IC:
          if (c.src == child_name && c.outport == at_point.port) {
            // Crossed over; now descend the input side.
            std::vector<Coupling> found;
            follow_input_from_output(origin, {child_path(penc, c.dest), c.inport}, found);
            ics.insert(ics.end(), found.begin(), found.end());
          }
          break;
        case CouplingKind::EOC:
          if (c.src == child_name && c.outport == at_point.port)
            follow_output(origin, {parent, c.inport}, ics, eocs);
          break;
        default:
          break;
      }
    }
  }

  void follow_input_from_output(const Endpoint& origin, const Endpoint& at_point,
                                std::vector<Coupling>& out) {
    const Instance& inst = at(at_point.path);
    if (inst.atomic) {
      out.push_back({origin.path, at_point.path, origin.port, at_point.port});
      return;
    }
    for (const auto& c : inst.coupled->couplings) {
      if (inst.coupled->classify(c) != CouplingKind::EIC) continue;
      if (c.outport != at_point.port) continue;
      follow_input_from_output(origin, {child_path(inst, c.dest), c.inport}, out);
    }
  }

  std::string root_src() const { return root_name_; }

  static void append(std::vector<Coupling>& dst, const std::vector<Coupling>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  }

  const ModelRegistry& reg_;
  std::map<std::string, Instance> instances_;
  std::map<std::string, std::size_t> discovery_;
  std::string root_name_;
};

}  // namespace

FlattenResult flatten(const ModelRegistry& reg, const std::string& root_name) {
  Flattener f(reg);
  return f.run(root_name);
}

}  // namespace xfd::sim
