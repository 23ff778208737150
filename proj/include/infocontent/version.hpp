#pragma once

namespace infocontent {
inline constexpr const char* kVersion = "0.1.0";
}
