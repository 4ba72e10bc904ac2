#ifndef XFD_REGISTRY_HPP
#define XFD_REGISTRY_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "xfd/model.hpp"
#include "xfd/violation.hpp"

namespace xfd {

using ModelSpec = std::variant<AtomicSpec, CoupledSpec>;

inline const std::string& spec_name(const ModelSpec& m) {
  return std::visit([](const auto& s) -> const std::string& { return s.name; }, m);
}

/// Name -> spec map for one model tree. Lookups are by the registration
/// key, which load_model_tree keeps equal to the spec name.
class ModelRegistry {
public:
  void add(AtomicSpec spec);
  void add(CoupledSpec spec);

  bool contains(const std::string& name) const { return models_.count(name) > 0; }
  const ModelSpec* find(const std::string& name) const;
  const AtomicSpec* find_atomic(const std::string& name) const;
  const CoupledSpec* find_coupled(const std::string& name) const;

  std::vector<std::string> names() const;
  std::size_t size() const { return models_.size(); }

  /// Registry-wide validation: every spec valid, every child reference
  /// resolved, containment acyclic.
  std::vector<Violation> validate() const;

  friend bool operator==(const ModelRegistry&, const ModelRegistry&) = default;

private:
  std::map<std::string, ModelSpec> models_;
};

}  // namespace xfd

#endif
