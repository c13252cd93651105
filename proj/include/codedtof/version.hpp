#pragma once

namespace codedtof {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace codedtof
