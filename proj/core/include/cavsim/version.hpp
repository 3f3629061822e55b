#pragma once

namespace cavsim {

inline constexpr const char* version = "0.1.0";

}  // namespace cavsim
