#ifndef XFD_TIME_VALUE_HPP
#define XFD_TIME_VALUE_HPP

#include <compare>
#include <limits>
#include <string>

namespace xfd {

/// A point or span on the simulation time axis: a non-negative real or
/// infinity (the passive time advance). Negative and NaN values are rejected
/// at construction. Addition saturates at infinity; comparisons are total.
class TimeValue {
public:
  TimeValue() = default;
  TimeValue(double v);  // NOLINT: implicit by design, throws on negative/NaN

  static TimeValue infinity() {
    TimeValue t;
    t.v_ = std::numeric_limits<double>::infinity();
    return t;
  }

  bool is_infinite() const { return v_ == std::numeric_limits<double>::infinity(); }
  bool is_zero() const { return v_ == 0.0; }

  /// Raw value; +inf for the infinite case.
  double seconds() const { return v_; }

  friend TimeValue operator+(TimeValue a, TimeValue b);
  /// a - b for finite b <= a (used for remaining-time arithmetic).
  friend TimeValue operator-(TimeValue a, TimeValue b);

  auto operator<=>(const TimeValue&) const = default;

private:
  double v_ = 0.0;
};

/// Up to 12 significant digits, no trailing-zero padding ("10", "12.5").
/// Infinity renders as "inf". Used by trace serialization.
std::string format_time(TimeValue t);

/// Shortest decimal that round-trips the value, forced to carry a decimal
/// point ("10.0", "12.5"). Used for XML timeout/sigma payloads.
std::string format_decimal(double v);

/// Parses a non-negative decimal, accepting "inf"/"INF"/"Infinity" spellings
/// of infinity. Throws Error("bad-number") on anything else.
TimeValue parse_time(const std::string& text);

}  // namespace xfd

#endif
