#pragma once

namespace allocsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace allocsim
