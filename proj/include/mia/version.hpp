#pragma once

#include <string_view>

namespace mia {

inline constexpr std::string_view kToolkitVersion = "0.1.0";
inline constexpr int kTrialSchemaVersion = 1;

}  // namespace mia
