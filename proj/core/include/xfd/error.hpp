#ifndef XFD_ERROR_HPP
#define XFD_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace xfd {

/// Domain error with a stable machine-readable code ("unknown-state",
/// "cycle-detected", ...) next to the human message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

private:
  std::string code_;
};

}  // namespace xfd

#endif
