#pragma once

#include <stdexcept>
#include <string>

namespace textcat {

/// Base of all errors raised by the library. `exit_code()` maps the error
/// category onto the CLI exit status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept = 0;
};

/// Bad or missing input data (files, corpora, dimensions).
class InputError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

/// Invalid configuration or parameter value.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// Decomposition or solve failed its accuracy checks.
class NumericalError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// A bundle file failed validation. `section()` names the offending section.
class LoadError : public InputError {
 public:
  LoadError(std::string section, const std::string& what)
      : InputError("load error in [" + section + "]: " + what),
        section_(std::move(section)) {}
  const std::string& section() const noexcept { return section_; }

 private:
  std::string section_;
};

}  // namespace textcat
