#pragma once

// Global adaptive Gauss-Kronrod (G7/K15) integration with breakpoints,
// semi-infinite mapping, principal values and oscillatory tails.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace dampo::quad {

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
};

template <class V>
struct BasicResult {
  V value{};
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
  bool converged = true;
};
using Result = BasicResult<double>;

namespace detail {

inline double norm(double v) { return std::abs(v); }
template <std::size_t N>
double norm(const std::array<double, N>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline void axpy(double& y, double w, double x) { y += w * x; }
template <std::size_t N>
void axpy(std::array<double, N>& y, double w, const std::array<double, N>& x) {
  for (std::size_t i = 0; i < N; ++i) y[i] += w * x[i];
}

inline double diff_norm(double a, double b) { return std::abs(a - b); }
template <std::size_t N>
double diff_norm(const std::array<double, N>& a, const std::array<double, N>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

template <class V>
struct Panel {
  double a, b;
  V value;
  double error;
};

template <class V, class F>
Panel<V> gk15(F& f, double a, double b) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  static const auto& xk = gauss_kronrod<double, 15>::abscissa();
  static const auto& wk = gauss_kronrod<double, 15>::weights();
  static const auto& wg = gauss<double, 7>::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  V k{}, g{};
  const V f0 = f(c);
  axpy(k, wk[0], f0);
  axpy(g, wg[0], f0);
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const V fp = f(c + h * xk[i]);
    const V fm = f(c - h * xk[i]);
    axpy(k, wk[i], fp);
    axpy(k, wk[i], fm);
    if ((i & 1) == 0) {
      axpy(g, wg[i / 2], fp);
      axpy(g, wg[i / 2], fm);
    }
  }
  V kv{}, gv{};
  axpy(kv, h, k);
  axpy(gv, h, g);
  return {a, b, kv, diff_norm(kv, gv)};
}

}  // namespace detail

// Integrates f over [breaks.front(), breaks.back()], starting from one panel
// per breakpoint interval and bisecting the worst panel until the summed
// error meets max(abs_tol, rel_tol*|I|) or the subdivision limit is hit.
// f must be callable as V f(double) with V = double or std::array<double,N>.
// Endpoints are never evaluated.
template <class F>
auto integrate(F&& f, std::span<const double> breaks, const Options& opt = {})
    -> BasicResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using V = std::decay_t<std::invoke_result_t<F&, double>>;
  using P = detail::Panel<V>;
  BasicResult<V> res;
  if (breaks.size() < 2) return res;

  std::vector<P> panels;
  panels.reserve(breaks.size() + 64);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    panels.push_back(detail::gk15<V>(f, breaks[i], breaks[i + 1]));
    res.evaluations += 15;
  }
  auto worse = [&](std::size_t i, std::size_t j) { return panels[i].error < panels[j].error; };
  std::vector<std::size_t> heap(panels.size());
  for (std::size_t i = 0; i < heap.size(); ++i) heap[i] = i;
  std::make_heap(heap.begin(), heap.end(), worse);

  auto totals = [&](V& value, double& error) {
    value = V{};
    error = 0.0;
    std::vector<std::size_t> order(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return panels[i].a < panels[j].a; });
    for (std::size_t i : order) {
      detail::axpy(value, 1.0, panels[i].value);
      error += panels[i].error;
    }
  };

  V value;
  double error;
  totals(value, error);
  while (!heap.empty()) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::norm(value));
    if (error <= tol) break;
    if (res.subdivisions >= opt.max_subdivisions) break;
    std::pop_heap(heap.begin(), heap.end(), worse);
    const std::size_t idx = heap.back();
    heap.pop_back();
    const P worst = panels[idx];
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * std::max(1.0, std::abs(mid))) {
      continue;  // too narrow to split; its error stays in the total
    }
    P left = detail::gk15<V>(f, worst.a, mid);
    P right = detail::gk15<V>(f, mid, worst.b);
    res.evaluations += 30;
    ++res.subdivisions;
    detail::axpy(value, -1.0, worst.value);
    detail::axpy(value, 1.0, left.value);
    detail::axpy(value, 1.0, right.value);
    error += left.error + right.error - worst.error;
    panels[idx] = left;
    heap.push_back(idx);
    std::push_heap(heap.begin(), heap.end(), worse);
    panels.push_back(right);
    heap.push_back(panels.size() - 1);
    std::push_heap(heap.begin(), heap.end(), worse);
    if ((res.subdivisions & 255) == 0) totals(value, error);
  }
  totals(value, error);
  res.value = value;
  res.error = error;
  res.converged = error <= std::max(opt.abs_tol, opt.rel_tol * detail::norm(value));
  return res;
}

template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {}) {
  const std::array<double, 2> br{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(br), opt);
}

// [a, inf) through w = a + s*u/(1-u). Interior breakpoints are given in w.
template <class F>
auto integrate_to_infinity(F&& f, double a, double scale, const Options& opt = {},
                           std::span<const double> interior = {}) {
  using V = std::decay_t<std::invoke_result_t<F&, double>>;
  auto g = [&](double u) -> V {
    const double one_m = 1.0 - u;
    const double w = a + scale * u / one_m;
    const double jac = scale / (one_m * one_m);
    V v = f(w);
    V out{};
    detail::axpy(out, jac, v);
    return out;
  };
  std::vector<double> br{0.0};
  for (double w : interior) {
    if (w > a) br.push_back((w - a) / (w - a + scale));
  }
  br.push_back(1.0);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return integrate(g, std::span<const double>(br), opt);
}

// PV of integral over [lo, hi] of f(x)/(x0 - x). A bracket [x0-h, x0+h] inside
// [lo, hi] is handled by singularity subtraction:
//   int [f(x) - f(x0)]/(x0 - x) dx + f(x0) ln((x0 - a)/(b - x0)),
// the remainder is a regular integral. x0 itself is a panel boundary, so the
// 0/0 point is never sampled.
template <class F>
Result principal_value(F&& f, double x0, double lo, double hi, std::span<const double> interior = {},
                       const Options& opt = {}) {
  std::vector<double> br{lo, hi};
  for (double x : interior)
    if (x > lo && x < hi) br.push_back(x);
  if (!(x0 > lo && x0 < hi)) {
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return integrate([&](double x) { return f(x) / (x0 - x); }, std::span<const double>(br), opt);
  }
  const double h = std::min(x0 - lo, hi - x0);
  const double a = x0 - h;
  const double b = x0 + h;
  const double f0 = f(x0);
  br.push_back(x0);
  br.push_back(a);
  br.push_back(b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  auto g = [&](double x) {
    if (x > a && x < b) return (f(x) - f0) / (x0 - x);
    return f(x) / (x0 - x);
  };
  Result r = integrate(g, std::span<const double>(br), opt);
  r.value += f0 * std::log((x0 - a) / (b - x0));
  return r;
}

// int_W^inf C w^-q e^{iwt} dw by repeated integration by parts,
//   -e^{iWt} C sum_k (q)_k W^{-q-k} / (it)^{k+1},
// truncated at the smallest term. Real part is the cosine transform.
inline std::complex<double> algebraic_fourier_tail(double C, double q, double W, double t, int max_terms = 40) {
  if (C == 0.0 || t <= 0.0) return {0.0, 0.0};
  const std::complex<double> it(0.0, t);
  std::complex<double> sum = 0.0;
  std::complex<double> term = std::pow(W, -q) / it;
  double prev = std::abs(term);
  for (int k = 0; k < max_terms; ++k) {
    sum += term;
    std::complex<double> next = term * (q + k) / (W * it);
    const double mag = std::abs(next);
    if (mag >= prev || mag < 1e-18 * std::abs(sum)) break;
    prev = mag;
    term = next;
  }
  return -std::exp(it * W) * C * sum;
}

// Breakpoints for panels no wider than pi/(4t) on [0, W], merged with extra.
std::vector<double> oscillatory_breaks(double t, double W, std::span<const double> extra = {});

// n-point Gauss-Legendre rule mapped to [a, b]; nodes ascending.
void gauss_legendre(int n, double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace dampo::quad
