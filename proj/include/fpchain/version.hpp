#pragma once

namespace fpchain {

inline constexpr const char* version = "0.1.0";

}  // namespace fpchain
