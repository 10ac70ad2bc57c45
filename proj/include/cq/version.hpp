#pragma once

namespace cq {

inline constexpr const char* kVersion = "0.1.0";

}
