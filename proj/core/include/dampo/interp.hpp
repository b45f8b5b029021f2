#pragma once

#include <memory>
#include <vector>

namespace dampo {

// Shape-preserving piecewise cubic (Fritsch-Carlson PCHIP) on an ascending
// grid. Values at nodes are returned exactly. Outside the grid the caller
// decides; operator() clamps to the end values.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  bool empty() const { return x_.empty(); }

 private:
  struct Impl;
  std::vector<double> x_, y_;
  std::shared_ptr<const Impl> impl_;
};

// Natural cubic spline (second derivative zero at both ends).
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  const std::vector<double>& x() const { return x_; }

 private:
  std::vector<double> x_, y_, m_;  // m = second derivatives
};

}  // namespace dampo
