#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the loaders.
namespace atr::text {

std::string ascii_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
bool has_whitespace(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

}  // namespace atr::text
