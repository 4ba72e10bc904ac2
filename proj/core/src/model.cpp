#include "xfd/model.hpp"

#include <algorithm>

namespace xfd {

std::vector<Message> Bag::canonical() const {
  std::vector<Message> v = items_;
  std::sort(v.begin(), v.end());
  return v;
}

const TaEntry* AtomicSpec::find_ta(const StateName& s) const {
  for (const auto& e : ta)
    if (e.state == s) return &e;
  return nullptr;
}

const InternalTransition* AtomicSpec::find_int(const StateName& s) const {
  for (const auto& e : delt_int)
    if (e.from == s) return &e;
  return nullptr;
}

const ExternalTransition* AtomicSpec::find_ext(const StateName& s,
                                               const MessageLabel& m) const {
  for (const auto& e : delt_ext)
    if (e.from == s && e.message == m) return &e;
  return nullptr;
}

std::vector<const LambdaEntry*> AtomicSpec::find_lambda(const StateName& s) const {
  std::vector<const LambdaEntry*> out;
  for (const auto& e : lambda)
    if (e.state == s) out.push_back(&e);
  return out;
}

bool AtomicSpec::has_state(const StateName& s) const {
  return std::find(states.begin(), states.end(), s) != states.end();
}

CouplingKind CoupledSpec::classify(const Coupling& c) const {
  const bool src_self = c.src == name;
  const bool dest_self = c.dest == name;
  if (src_self && dest_self) return CouplingKind::Invalid;
  if (src_self) return has_child(c.dest) ? CouplingKind::EIC : CouplingKind::Invalid;
  if (dest_self) return has_child(c.src) ? CouplingKind::EOC : CouplingKind::Invalid;
  if (c.src == c.dest) return CouplingKind::Invalid;  // self-coupling
  if (has_child(c.src) && has_child(c.dest)) return CouplingKind::IC;
  return CouplingKind::Invalid;
}

bool CoupledSpec::has_child(const std::string& child) const {
  for (const auto& m : models)
    if (m.child == child) return true;
  return false;
}

bool CoupledSpec::has_inport(const PortName& p) const {
  return std::find(inports.begin(), inports.end(), p) != inports.end();
}

bool CoupledSpec::has_outport(const PortName& p) const {
  return std::find(outports.begin(), outports.end(), p) != outports.end();
}

}  // namespace xfd
