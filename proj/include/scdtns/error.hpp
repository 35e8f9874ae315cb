#pragma once

#include <stdexcept>
#include <string>

namespace scdtns {

enum class ErrorCode {
  invalid_argument,
  negative_sample,
  empty_part,
  non_monotone,
  degenerate,
  dimension_mismatch,
  non_increasing_warp,
  too_many_rejections,
  parse,
  corrupt_file,
  version_mismatch,
  io,
};

/// Every failure raised by the library carries a code so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace scdtns
