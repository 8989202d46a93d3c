#ifndef DRIFTLAB_ERROR_HPP
#define DRIFTLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace driftlab {

/// Error identities surfaced by the library. CLI maps these onto exit codes.
enum class ErrorCode {
  NonPositiveIr,
  NonFinite,
  MissingSignal,
  OutOfRange,
  MissingColumn,
  EmptyFile,
  MalformedHeader,
  NoOverlap,
  EmptySeries,
  EmptyInput,
  DegenerateWindow,
  NonPhysicalTemperature,
  ZeroWeightSum,
  OriginalZeroAtPoint,
  InvalidSpec,
  InvalidConfig,
  EmptyAfterFiltering,
  IoFailure,
};

const char* error_code_name(ErrorCode code);

class DriftError : public std::runtime_error {
 public:
  DriftError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace driftlab

#endif  // DRIFTLAB_ERROR_HPP
