#pragma once

namespace fxt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fxt
