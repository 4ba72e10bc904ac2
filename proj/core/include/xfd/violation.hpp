#ifndef XFD_VIOLATION_HPP
#define XFD_VIOLATION_HPP

#include <string>
#include <vector>

namespace xfd {

/// One finding from document or model validation. `code` is drawn from the
/// fixed enumeration below (documented in docs/formats.md); `path` locates
/// the offender (an XPath-like document path or a model path).
struct Violation {
  enum class Severity { Error, Warning };

  std::string code;
  std::string path;
  std::string message;
  Severity severity = Severity::Error;

  bool is_error() const { return severity == Severity::Error; }
};

/// The closed set of violation codes.
namespace codes {
// model-level, atomic
inline constexpr const char* EmptyName = "EmptyName";
inline constexpr const char* DuplicateState = "DuplicateState";
inline constexpr const char* DuplicatePort = "DuplicatePort";
inline constexpr const char* NoStates = "NoStates";
inline constexpr const char* UnknownInitialState = "UnknownInitialState";
inline constexpr const char* UnknownState = "UnknownState";
inline constexpr const char* UnknownPort = "UnknownPort";
inline constexpr const char* DuplicateInternalTransition = "DuplicateInternalTransition";
inline constexpr const char* DuplicateExternalTransition = "DuplicateExternalTransition";
inline constexpr const char* MissingInternalTransition = "MissingInternalTransition";
inline constexpr const char* DuplicateTimeAdvance = "DuplicateTimeAdvance";
// model-level, coupled
inline constexpr const char* DuplicateChild = "DuplicateChild";
inline constexpr const char* ChildShadowsParent = "ChildShadowsParent";
inline constexpr const char* UnknownModel = "UnknownModel";
inline constexpr const char* SelfCoupling = "SelfCoupling";
inline constexpr const char* InvalidCoupling = "InvalidCoupling";
inline constexpr const char* NameMismatch = "NameMismatch";
inline constexpr const char* CyclicContainment = "CyclicContainment";
// document-level
inline constexpr const char* MalformedXml = "MalformedXml";
inline constexpr const char* KindMismatch = "KindMismatch";
inline constexpr const char* DialectMismatch = "DialectMismatch";
inline constexpr const char* MissingAttribute = "MissingAttribute";
inline constexpr const char* MissingElement = "MissingElement";
inline constexpr const char* UnexpectedElement = "UnexpectedElement";
inline constexpr const char* ElementOrder = "ElementOrder";
inline constexpr const char* BadNumber = "BadNumber";
inline constexpr const char* BadBoolean = "BadBoolean";
inline constexpr const char* EmptyTimeAdvance = "EmptyTimeAdvance";  // warning
inline constexpr const char* EmptyCouplings = "EmptyCouplings";      // warning
}  // namespace codes

inline bool has_errors(const std::vector<Violation>& vs) {
  for (const auto& v : vs)
    if (v.is_error()) return true;
  return false;
}

inline bool has_code(const std::vector<Violation>& vs, const std::string& code) {
  for (const auto& v : vs)
    if (v.code == code) return true;
  return false;
}

}  // namespace xfd

#endif
