#include "oti/format.h"

#include <charconv>
#include <cmath>
#include <string>

#include "oti/errors.h"

namespace oti {
namespace {

[[noreturn]] void bad(std::string_view s, std::string_view what,
                      std::string_view expected) {
  throw ConfigError(std::string(what) + ": expected " + std::string(expected) +
                    ", got '" + std::string(s) + "'");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, std::string_view what) {
  if (s == "inf") return INFINITY;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad(s, what, "a number");
  }
  return v;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    // Accept integral values written in scientific notation, e.g. 1e5.
    double d = 0.0;
    auto [p2, e2] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (e2 == std::errc() && p2 == s.data() + s.size() && !s.empty() &&
        d == std::floor(d) && std::fabs(d) < 9.0e18) {
      return static_cast<std::int64_t>(d);
    }
    bad(s, what, "an integer");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    bad(s, what, "an unsigned integer");
  }
  return v;
}

bool parse_bool(std::string_view s, std::string_view what) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad(s, what, "a boolean");
}

}  // namespace oti
