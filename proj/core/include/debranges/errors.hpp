#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace debranges {

using Complex = std::complex<double>;

/// Base of every error raised by the library. A pipeline stage that lets an
/// error escape records its name in `stage()`.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}

  const std::string& stage() const noexcept { return stage_; }
  void set_stage(std::string stage) { stage_ = std::move(stage); }

 private:
  std::string stage_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A model lies outside the family an exact rule can handle.
class UnsupportedRepresentation : public Error {
 public:
  using Error::Error;
};

class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, Complex best_estimate)
      : Error(what), best_estimate_(best_estimate) {}
  Complex best_estimate() const noexcept { return best_estimate_; }

 private:
  Complex best_estimate_;
};

class EmptySubspaceError : public Error {
 public:
  using Error::Error;
};

/// The subspace kernel vanishes on the diagonal at the listed points.
class CommonZeroError : public PreconditionError {
 public:
  CommonZeroError(const std::string& what, std::vector<Complex> points)
      : PreconditionError(what), points_(std::move(points)) {}
  const std::vector<Complex>& points() const noexcept { return points_; }

 private:
  std::vector<Complex> points_;
};

class NotAZeroError : public PreconditionError {
 public:
  NotAZeroError(const std::string& what, double magnitude)
      : PreconditionError(what), magnitude_(magnitude) {}
  double magnitude() const noexcept { return magnitude_; }

 private:
  double magnitude_;
};

class PoleIndicatorError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotUnimodularError : public Error {
 public:
  using Error::Error;
};

class AliasingError : public Error {
 public:
  using Error::Error;
};

class ExtractionInconsistentError : public Error {
 public:
  using Error::Error;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace debranges
