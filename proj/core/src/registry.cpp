#include "xfd/registry.hpp"

#include <set>

#include "xfd/error.hpp"
#include "xfd/semantics.hpp"

namespace xfd {

void ModelRegistry::add(AtomicSpec spec) {
  const std::string key = spec.name;
  if (!models_.emplace(key, ModelSpec(std::move(spec))).second)
    throw Error("duplicate-model", "registry already holds a model named '" + key + "'");
}

void ModelRegistry::add(CoupledSpec spec) {
  const std::string key = spec.name;
  if (!models_.emplace(key, ModelSpec(std::move(spec))).second)
    throw Error("duplicate-model", "registry already holds a model named '" + key + "'");
}

const ModelSpec* ModelRegistry::find(const std::string& name) const {
  auto it = models_.find(name);
  return it == models_.end() ? nullptr : &it->second;
}

const AtomicSpec* ModelRegistry::find_atomic(const std::string& name) const {
  const ModelSpec* m = find(name);
  return m ? std::get_if<AtomicSpec>(m) : nullptr;
}

const CoupledSpec* ModelRegistry::find_coupled(const std::string& name) const {
  const ModelSpec* m = find(name);
  return m ? std::get_if<CoupledSpec>(m) : nullptr;
}

std::vector<std::string> ModelRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : models_) out.push_back(k);
  return out;
}

namespace {

// DFS over containment; reports a cycle the first time a name re-enters the
// active path.
void check_containment(const ModelRegistry& reg, const std::string& name,
                       std::set<std::string>& path, std::set<std::string>& done,
                       std::vector<Violation>& out) {
  if (done.count(name)) return;
  if (!path.insert(name).second) {
    out.push_back({codes::CyclicContainment, name,
                   "coupled model '" + name + "' transitively contains itself"});
    return;
  }
  if (const CoupledSpec* c = reg.find_coupled(name)) {
    for (const auto& m : c->models)
      if (reg.contains(m.child)) check_containment(reg, m.child, path, done, out);
  }
  path.erase(name);
  done.insert(name);
}

}  // namespace

std::vector<Violation> ModelRegistry::validate() const {
  std::vector<Violation> out;
  for (const auto& [name, spec] : models_) {
    if (const auto* a = std::get_if<AtomicSpec>(&spec)) {
      auto vs = validate_atomic(*a);
      out.insert(out.end(), vs.begin(), vs.end());
    } else {
      auto vs = validate_coupled(std::get<CoupledSpec>(spec), *this);
      out.insert(out.end(), vs.begin(), vs.end());
    }
  }
  std::set<std::string> done;
  for (const auto& [name, spec] : models_) {
    std::set<std::string> path;
    check_containment(*this, name, path, done, out);
  }
  return out;
}

}  // namespace xfd
