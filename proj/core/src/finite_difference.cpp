// SPDX-License-Identifier: Apache-2.0
#include "finsler/finite_difference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finsler/error.hpp"

namespace finsler {

namespace {

double binomial(int m, int j) {
  double b = 1.0;
  for (int k = 1; k <= j; ++k) b = b * (m - j + k) / k;
  return b;
}

double central(const RealFunction& f, std::span<const double> point, const MultiIndex& idx, double h) {
  // Enumerate the tensor-product stencil with an odometer over the axes.
  const std::size_t dim = point.size();
  std::vector<int> counter(dim, 0);
  std::vector<double> x(point.begin(), point.end());
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t v = 0; v < dim; ++v) {
      const int m = idx[v];
      const int j = counter[v];
      x[v] = point[v] + (0.5 * m - j) * h;
      w *= ((j % 2 == 0) ? 1.0 : -1.0) * binomial(m, j);
    }
    double fx = 0.0;
    try {
      fx = f(x);
    } catch (const Error& e) {
      throw StencilOutOfDomain(std::string("stencil evaluation failed: ") + e.what());
    }
    if (!std::isfinite(fx)) throw StencilOutOfDomain("non-finite value on stencil");
    sum += w * fx;
    std::size_t v = 0;
    for (; v < dim; ++v) {
      if (++counter[v] <= idx[v]) break;
      counter[v] = 0;
    }
    if (v == dim) break;
  }
  int total = 0;
  for (int m : idx) total += m;
  return sum / std::pow(h, total);
}

}  // namespace

double fd_partial(const RealFunction& f, std::span<const double> point, const MultiIndex& idx, double h) {
  if (idx.size() != point.size()) throw Error("fd_partial: multi-index/point dimension mismatch");
  if (!(h > 0.0)) throw Error("fd_partial: step must be positive");
  const double coarse = central(f, point, idx, h);
  const double fine = central(f, point, idx, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> fornberg_weights(double at, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  if (n < m) throw Error("fornberg_weights: need more than m nodes");
  // c[i][k]: weight of node i for derivative k
  std::vector<std::vector<double>> c(nodes.size(), std::vector<double>(static_cast<std::size_t>(m) + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - at;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - at;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
              c1 * (k * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k - 1)] -
                    c5 * c[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(k)]) /
              c2;
        }
        c[static_cast<std::size_t>(i)][0] = -c1 * c5 * c[static_cast<std::size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
            (c4 * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
             k * c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k - 1)]) /
            c3;
      }
      c[static_cast<std::size_t>(j)][0] = c4 * c[static_cast<std::size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = c[i][static_cast<std::size_t>(m)];
  return w;
}

double fd_one_sided(const std::function<double(double)>& f, double t0, int derivative_order, double h,
                    Side side, int nodes) {
  if (nodes <= derivative_order) throw Error("fd_one_sided: need more nodes than the derivative order");
  const double sign = side == Side::Plus ? 1.0 : -1.0;
  auto estimate = [&](double step) {
    std::vector<double> t(static_cast<std::size_t>(nodes));
    for (int j = 0; j < nodes; ++j) t[static_cast<std::size_t>(j)] = t0 + sign * (j + 1) * step;
    const auto w = fornberg_weights(t0, t, derivative_order);
    double sum = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
      double v = 0.0;
      try {
        v = f(t[j]);
      } catch (const Error& e) {
        throw StencilOutOfDomain(std::string("one-sided stencil evaluation failed: ") + e.what());
      }
      if (!std::isfinite(v)) throw StencilOutOfDomain("non-finite value on one-sided stencil");
      sum += w[j] * v;
    }
    return sum;
  };
  // truncation error is O(step^(nodes - derivative_order))
  const double p = std::pow(2.0, nodes - derivative_order);
  const double coarse = estimate(h);
  const double fine = estimate(0.5 * h);
  return (p * fine - coarse) / (p - 1.0);
}

}  // namespace finsler
