#include "xfd/time_value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "xfd/error.hpp"

namespace xfd {

TimeValue::TimeValue(double v) : v_(v) {
  if (std::isnan(v) || v < 0.0)
    throw Error("bad-time", "time values must be non-negative reals or infinity");
}

TimeValue operator+(TimeValue a, TimeValue b) {
  TimeValue r;
  r.v_ = a.v_ + b.v_;
  return r;
}

TimeValue operator-(TimeValue a, TimeValue b) {
  if (b.is_infinite())
    throw Error("bad-time", "cannot subtract an infinite time");
  if (a.is_infinite()) return TimeValue::infinity();
  return TimeValue(a.v_ - b.v_);
}

std::string format_time(TimeValue t) {
  if (t.is_infinite()) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", t.seconds());
  return buf;
}

std::string format_decimal(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

TimeValue parse_time(const std::string& text) {
  std::size_t b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) throw Error("bad-number", "empty number");
  std::size_t e = text.find_last_not_of(" \t\r\n") + 1;
  std::string t = text.substr(b, e - b);
  if (t == "inf" || t == "INF" || t == "Inf" || t == "Infinity" || t == "infinity")
    return TimeValue::infinity();
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size())
    throw Error("bad-number", "not a decimal number: '" + t + "'");
  if (std::isnan(v) || v < 0.0)
    throw Error("bad-number", "negative or NaN time: '" + t + "'");
  return TimeValue(v);
}

}  // namespace xfd
