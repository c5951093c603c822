#pragma once

#include <string_view>

namespace lexplain {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace lexplain
