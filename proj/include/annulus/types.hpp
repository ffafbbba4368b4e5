#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace annulus {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

using Point = Vector2<double>;
using Matrix = Matrix2<double>;

/// Axis-aligned working domain. Unbounded by default.
struct Box {
  double xmin = -std::numeric_limits<double>::infinity();
  double xmax = std::numeric_limits<double>::infinity();
  double ymin = -std::numeric_limits<double>::infinity();
  double ymax = std::numeric_limits<double>::infinity();

  bool contains(const Point& z) const {
    return z.x() >= xmin && z.x() <= xmax && z.y() >= ymin && z.y() <= ymax;
  }
  bool bounded() const {
    return xmin > -std::numeric_limits<double>::infinity() ||
           xmax < std::numeric_limits<double>::infinity() ||
           ymin > -std::numeric_limits<double>::infinity() ||
           ymax < std::numeric_limits<double>::infinity();
  }
};

enum class ErrorKind {
  Lexical,
  Syntax,
  UnknownFunction,
  UnknownVariable,
  Domain,
  StepLimit,
  LeftDomain,
  Horizon,
  NoEvent,
  CriticalPoint,
  NotACycle,
  Transversality,
  DegenerateTangent,
  NotASection,
  OnConjugateSection,
  WellPosedness,
  Config,
};

const char* to_string(ErrorKind kind);

/// Single error type for the library; `kind` distinguishes causes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Error(ErrorKind kind, const std::string& message, std::size_t offset)
      : std::runtime_error(message), kind_(kind), offset_(offset) {}
  Error(ErrorKind kind, const std::string& message, double parameter)
      : std::runtime_error(message), kind_(kind), parameter_(parameter) {}

  ErrorKind kind() const { return kind_; }
  /// Byte offset into the source text for lexical/syntax errors.
  std::optional<std::size_t> offset() const { return offset_; }
  /// Curve parameter (or time) associated with the failure, when meaningful.
  std::optional<double> parameter() const { return parameter_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> offset_;
  std::optional<double> parameter_;
};

inline double scale_of(const Point& z) { return 1.0 + z.norm(); }

}  // namespace annulus
