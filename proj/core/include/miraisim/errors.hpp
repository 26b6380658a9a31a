#ifndef MIRAISIM_ERRORS_HPP
#define MIRAISIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace miraisim {

struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// sim-core
struct EmptyAddressPoolError : SimError {
  EmptyAddressPoolError() : SimError("exclusions cover the whole address space") {}
};
struct HorizonExceededError : SimError {
  using SimError::SimError;
};

// lifecycle
struct NoReportServerError : SimError {
  NoReportServerError() : SimError("scenario defines no report server") {}
};

// flood
struct InvalidSpecError : SimError {
  using SimError::SimError;
};

// telemetry
struct SeriesLengthMismatchError : SimError {
  using SimError::SimError;
};
struct UnorderedRecordsError : SimError {
  UnorderedRecordsError() : SimError("trace records are not timestamp-ordered") {}
};

// analysis
struct ZeroBaselineError : SimError {
  using SimError::SimError;
  ZeroBaselineError() : SimError("baseline mean is zero; percentage delta undefined") {}
};
struct EmptySeriesError : SimError {
  using SimError::SimError;
  EmptySeriesError() : SimError("cannot aggregate an empty series") {}
};
struct InsufficientScenariosError : SimError {
  using SimError::SimError;
};
struct SingularSystemError : SimError {
  using SimError::SimError;
};
struct IncompleteTableError : SimError {
  using SimError::SimError;
};

// config
struct ConfigError : SimError {
  using SimError::SimError;
};
struct UnknownKeyError : ConfigError {
  explicit UnknownKeyError(const std::string& key) : ConfigError("unknown key: " + key) {}
};
struct MissingRequiredError : ConfigError {
  explicit MissingRequiredError(const std::string& key) : ConfigError("missing required key: " + key) {}
};
struct RangeViolationError : ConfigError {
  using ConfigError::ConfigError;
};

}  // namespace miraisim

#endif
