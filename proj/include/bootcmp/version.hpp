#pragma once

namespace bootcmp {

inline constexpr const char* kVersion = "0.1.0";

/// Bumped when the JSON report layout changes incompatibly.
inline constexpr const char* kReportSchema = "bootcmp-report/1";

}  // namespace bootcmp
