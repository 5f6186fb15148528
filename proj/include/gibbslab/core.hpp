#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gibbslab {

using Point = std::vector<double>;

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: wrong dimension, empty support, out-of-range parameter.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// NaN produced (typically +inf - inf) or a -inf potential value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or lattice scan larger than the configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& field, const std::string& msg)
      : Error(field + ": " + msg), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

std::string format_point(std::span<const double> x);

double norm(std::span<const double> x);
double distance(std::span<const double> x, std::span<const double> y);

/// Rejects NaN and -inf; +inf passes through. `what` names the quantity.
double checked_value(double v, const char* what);
double checked_value(double v, const char* what, std::span<const double> x);
double checked_value(double v, const char* what, std::span<const double> x,
                     std::span<const double> y);

/// Neumaier compensated summation over (-inf, +inf]. Once a +inf term is
/// added the sum stays +inf; NaN or -inf terms throw.
class CompensatedSum {
 public:
  void add(double x);
  double value() const;
  bool infinite() const { return infinite_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  bool infinite_ = false;
};

/// c * v with the convention 0 * inf = 0. Throws if the product is -inf.
double scaled(double c, double v, const char* what);

/// Numerically stable log(sum(exp(x_i))) over a stream; -inf terms ignored.
class LogSumExp {
 public:
  void add(double x);
  double value() const;  // -inf when empty

 private:
  double max_ = -kInf;
  double acc_ = 0.0;
};

}  // namespace gibbslab
