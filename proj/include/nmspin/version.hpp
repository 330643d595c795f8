// version.hpp - Library version string

#pragma once

namespace nmspin {

inline constexpr const char* version = "0.3.0";

} // namespace nmspin
