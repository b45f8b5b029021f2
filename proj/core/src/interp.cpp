#include "dampo/interp.hpp"

#include <algorithm>
#include <cmath>

// Boost 1.74 pchip.hpp calls isnan unqualified
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "dampo/errors.hpp"

namespace dampo {

struct MonotoneCubic::Impl {
  explicit Impl(std::vector<double> x, std::vector<double> y) : p(std::move(x), std::move(y)) {}
  boost::math::interpolators::pchip<std::vector<double>> p;
};

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size() || x_.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "interpolation needs matching grids with >= 2 points");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw Error(ErrorCode::InvalidArgument, "interpolation grid must be strictly ascending");
  if (x_.size() >= 4) impl_ = std::make_shared<const Impl>(x_, y_);
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  auto it = std::lower_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(it - x_.begin());
  if (*it == x) return y_[i];
  if (impl_) return impl_->p(x);
  const double t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
  return y_[i - 1] + t * (y_[i] - y_[i - 1]);
}

double MonotoneCubic::derivative(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  if (impl_) return impl_->p.prime(x);
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - x_.begin()), 1, x_.size() - 1);
  return (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n != y_.size() || n < 2) throw Error(ErrorCode::InvalidArgument, "spline needs matching grids with >= 2 points");
  m_.assign(n, 0.0);
  if (n == 2) return;
  // Thomas algorithm on the interior second derivatives
  std::vector<double> c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
    const double r = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    const double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (r - a * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = d[i] - c[i] * m_[i + 1];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  const std::size_t n = x_.size();
  std::size_t i;
  if (x <= x_.front()) {
    i = 1;
  } else if (x >= x_.back()) {
    i = n - 1;
  } else {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    i = static_cast<std::size_t>(it - x_.begin());
  }
  const double h = x_[i] - x_[i - 1];
  const double a = (x_[i] - x) / h;
  const double b = (x - x_[i - 1]) / h;
  return a * y_[i - 1] + b * y_[i] + ((a * a * a - a) * m_[i - 1] + (b * b * b - b) * m_[i]) * h * h / 6.0;
}

}  // namespace dampo
