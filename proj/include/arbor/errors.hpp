#pragma once

#include <stdexcept>
#include <string>

namespace arbor {

/// Requested operation is not defined for the given variant (e.g. asking an
/// external-table denoiser for a closed-form posterior mean).
class UnsupportedOperation : public std::logic_error {
  public:
    explicit UnsupportedOperation(const std::string& what) : std::logic_error(what) {}
};

/// A trait that is undefined for the given geometry (e.g. DBH of a tree
/// shorter than breast height).
class UndefinedTrait : public std::runtime_error {
  public:
    explicit UndefinedTrait(const std::string& what) : std::runtime_error(what) {}
};

/// Optimization produced a non-finite value; carries the diagnostic string
/// (iteration index and per-term values).
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace arbor
