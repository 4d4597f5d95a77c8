#pragma once

#include <stdexcept>
#include <string>

namespace cyclesync {

// Stable error codes; the CLI prints them as "code=<name>" on one line.
enum class errc {
  missing_value,
  non_consecutive_quarters,
  duplicate_indicator,
  too_short_sample,
  unknown_indicator,
  too_short,
  bad_level,
  empty_window,
  group_too_small,
  all_degenerate,
  bad_k,
  everything_removed,
  bad_design,
  bad_config,
  io_error,
  internal,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::missing_value: return "missing_value";
    case errc::non_consecutive_quarters: return "non_consecutive_quarters";
    case errc::duplicate_indicator: return "duplicate_indicator";
    case errc::too_short_sample: return "too_short_sample";
    case errc::unknown_indicator: return "unknown_indicator";
    case errc::too_short: return "too_short";
    case errc::bad_level: return "bad_level";
    case errc::empty_window: return "empty_window";
    case errc::group_too_small: return "group_too_small";
    case errc::all_degenerate: return "all_degenerate";
    case errc::bad_k: return "bad_k";
    case errc::everything_removed: return "everything_removed";
    case errc::bad_design: return "bad_design";
    case errc::bad_config: return "bad_config";
    case errc::io_error: return "io_error";
    case errc::internal: return "internal";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string("code=") + errc_name(code) + " " + detail),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& detail) {
  throw error(code, detail);
}

inline void require(bool ok, errc code, const std::string& detail) {
  if (!ok) fail(code, detail);
}

}  // namespace cyclesync
