#pragma once

namespace coconsume {

inline constexpr const char *kVersion = "0.3.0";

} // namespace coconsume
