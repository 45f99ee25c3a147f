#pragma once

namespace htlab {
inline constexpr const char* kVersion = "1.0.0";
}
