#include "gibbslab/core.hpp"

#include <sstream>

namespace gibbslab {

std::string format_point(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double checked_value(double v, const char* what) {
  if (std::isnan(v)) throw NumericalError(std::string(what) + " is NaN");
  if (v == -kInf) throw NumericalError(std::string(what) + " is -inf");
  return v;
}

double checked_value(double v, const char* what, std::span<const double> x) {
  if (std::isnan(v) || v == -kInf) {
    throw NumericalError(std::string(what) + (std::isnan(v) ? " is NaN" : " is -inf") +
                         " at x=" + format_point(x));
  }
  return v;
}

double checked_value(double v, const char* what, std::span<const double> x,
                     std::span<const double> y) {
  if (std::isnan(v) || v == -kInf) {
    throw NumericalError(std::string(what) + (std::isnan(v) ? " is NaN" : " is -inf") +
                         " at x=" + format_point(x) + ", y=" + format_point(y));
  }
  return v;
}

void CompensatedSum::add(double x) {
  if (std::isnan(x)) throw NumericalError("NaN term in sum");
  if (x == -kInf) {
    if (infinite_) throw NumericalError("inf - inf in sum");
    throw NumericalError("-inf term in sum");
  }
  if (x == kInf) {
    infinite_ = true;
    return;
  }
  if (infinite_) return;
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double CompensatedSum::value() const { return infinite_ ? kInf : sum_ + comp_; }

double scaled(double c, double v, const char* what) {
  if (c == 0.0) return 0.0;
  const double r = c * v;
  return checked_value(r, what);
}

void LogSumExp::add(double x) {
  if (std::isnan(x)) throw NumericalError("NaN in log-sum-exp");
  if (x == -kInf) return;
  if (x == kInf) throw NumericalError("+inf in log-sum-exp");
  if (x <= max_) {
    acc_ += std::exp(x - max_);
  } else {
    acc_ = acc_ * std::exp(max_ - x) + 1.0;
    max_ = x;
  }
}

double LogSumExp::value() const {
  if (max_ == -kInf) return -kInf;
  return max_ + std::log(acc_);
}

}  // namespace gibbslab
