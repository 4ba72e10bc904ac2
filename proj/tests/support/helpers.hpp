#ifndef XFD_TESTS_HELPERS_HPP
#define XFD_TESTS_HELPERS_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "xfd/model.hpp"
#include "xfd/registry.hpp"

namespace xfd::testsupport {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(XFD_FIXTURES_DIR) / rel;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The M1 model of the sequence/timing-diagram walkthrough: active for five
/// seconds, emits M1OutputMessage, goes passive; an incoming M1InputMessage
/// leaves it passive without rescheduling.
inline xfd::AtomicSpec make_m1() {
  xfd::AtomicSpec m1;
  m1.name = "M1";
  m1.host = "localhost";
  m1.inports = {"in"};
  m1.outports = {"out"};
  m1.states = {"active", "passive"};
  m1.initial = "active";
  m1.ta = {{"active", xfd::TimeValue(5.0)}};
  m1.lambda = {{"active", "out", "M1OutputMessage"}};
  m1.delt_int = {{"active", "passive", 1}};
  m1.delt_ext = {{"passive", "M1InputMessage", "passive", false, 1}};
  return m1;
}

/// Its peer M2: active for nine seconds, receives M1's message at t=5
/// without rescheduling (sigma drains to 4), then answers at t=9.
inline xfd::AtomicSpec make_m2() {
  xfd::AtomicSpec m2;
  m2.name = "M2";
  m2.host = "localhost";
  m2.inports = {"in"};
  m2.outports = {"out"};
  m2.states = {"active", "passive"};
  m2.initial = "active";
  m2.ta = {{"active", xfd::TimeValue(9.0)}};
  m2.lambda = {{"active", "out", "M1InputMessage"}};
  m2.delt_int = {{"active", "passive", 1}};
  m2.delt_ext = {{"active", "M1OutputMessage", "active", false, 1}};
  return m2;
}

/// M1 and M2 coupled back-to-back.
inline xfd::ModelRegistry make_m1m2_registry() {
  xfd::ModelRegistry reg;
  reg.add(make_m1());
  reg.add(make_m2());
  xfd::CoupledSpec m;
  m.name = "M";
  m.models = {{"M1", {}, {}}, {"M2", {}, {}}};
  m.couplings = {{"M1", "M2", "out", "in"}, {"M2", "M1", "out", "in"}};
  reg.add(std::move(m));
  return reg;
}

}  // namespace xfd::testsupport

#endif
