#pragma once

namespace markovcopula {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace markovcopula
