#ifndef OTI_FORMAT_H_
#define OTI_FORMAT_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace oti {

// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

// Strict parsers: the whole string must be consumed. Throw ConfigError
// naming `what` on failure.
double parse_double(std::string_view s, std::string_view what);
std::int64_t parse_int(std::string_view s, std::string_view what);
std::uint64_t parse_uint(std::string_view s, std::string_view what);
bool parse_bool(std::string_view s, std::string_view what);

}  // namespace oti

#endif  // OTI_FORMAT_H_
