// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_ERRORS_HPP
#define OFDMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ofdma {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, file format, or argument (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Problem cannot be solved as posed, e.g. fewer subcarriers than users
/// (CLI exit code 3).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Numerical routine failed to converge or produced a non-finite value
/// (CLI exit code 4).
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  explicit NumericalError(const std::string& what) : Error(what) {}

  double residual() const { return residual_; }

 private:
  double residual_ = 0.0;
};

/// No intent rule matched the operator query (CLI exit code 5).
class IntentError : public Error {
 public:
  using Error::Error;
};

}  // namespace ofdma

#endif  // OFDMA_ERRORS_HPP
