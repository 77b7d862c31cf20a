#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace isoflat {

struct GridPoint {
  int i = 0;
  int j = 0;
};

/// Base class of all library errors. Carries the offending grid point when
/// the failure is localized.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::optional<GridPoint> where = std::nullopt);

  const std::optional<GridPoint>& where() const { return where_; }

 private:
  std::optional<GridPoint> where_;
};

/// Malformed input data or configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver its post-condition
/// (non-convergence, step-size failure, invariant breach).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace isoflat
