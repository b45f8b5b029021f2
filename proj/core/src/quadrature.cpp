#include "dampo/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include "dampo/errors.hpp"

namespace dampo::quad {

std::vector<double> oscillatory_breaks(double t, double W, std::span<const double> extra) {
  std::vector<double> br{0.0, W};
  if (t > 0.0) {
    const double width = M_PI / (4.0 * t);
    const auto n = static_cast<std::size_t>(std::ceil(W / width));
    for (std::size_t i = 1; i < n; ++i) br.push_back(W * static_cast<double>(i) / static_cast<double>(n));
  }
  for (double x : extra)
    if (x > 0.0 && x < W) br.push_back(x);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre needs n >= 1");
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  std::vector<double> x, w;
  x.reserve(n);
  w.reserve(n);
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(n, z);
    const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
    x.push_back(z);
    w.push_back(wt);
    if (z != 0.0) {
      x.push_back(-z);
      w.push_back(wt);
    }
  }
  std::vector<std::size_t> order(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  nodes.resize(x.size());
  weights.resize(x.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    nodes[k] = c + h * x[order[k]];
    weights[k] = h * w[order[k]];
  }
}

}  // namespace dampo::quad
