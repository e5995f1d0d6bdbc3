#pragma once

namespace gphl {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr unsigned kSchemaVersion = 1;

}  // namespace gphl
