#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace npct {

/// Base class for every error raised by the library.
///
/// A pipeline stage may tag an in-flight error with its name before
/// rethrowing; the tag is prepended to what().
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message)
      : std::runtime_error(message), message_(message), full_(message) {}

  const char* what() const noexcept override { return full_.c_str(); }

  const std::string& message() const noexcept { return message_; }
  const std::string& stage() const noexcept { return stage_; }

  void set_stage(std::string stage) {
    stage_ = std::move(stage);
    full_ = "[" + stage_ + "] " + message_;
  }

 private:
  std::string message_;
  std::string stage_;
  std::string full_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidGeometry : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class InvalidSpec : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ShapeMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnsupportedSplitting : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class UnsupportedEnergy : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a non-finite value or could not be completed to
/// working precision.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& message,
                            std::optional<double> condition_estimate = std::nullopt,
                            std::vector<double> trace = {})
      : Error(message),
        condition_estimate_(condition_estimate),
        trace_(std::move(trace)) {}

  std::optional<double> condition_estimate() const noexcept { return condition_estimate_; }
  const std::vector<double>& trace() const noexcept { return trace_; }
  std::optional<std::size_t> view() const noexcept { return view_; }
  void set_view(std::size_t view) { view_ = view; }

 private:
  std::optional<double> condition_estimate_;
  std::vector<double> trace_;
  std::optional<std::size_t> view_;
};

}  // namespace npct
