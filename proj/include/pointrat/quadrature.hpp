#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "pointrat/error.hpp"

namespace pointrat {

// One integration cell along a dimension: [lo, hi] carrying a constant weight
// (a density height). The integrand is assumed smooth inside each cell.
struct QuadCell {
  double lo;
  double hi;
  double weight;
};

struct QuadratureOptions {
  double rel_tol = 1e-8;
  double abs_floor = 1e-14;  // scale below which the relative test becomes absolute
  int max_levels = 14;
  std::size_t max_points = std::size_t{1} << 24;
};

namespace detail {

struct QuadNode {
  double x;
  double w;
  std::size_t cell;
};

// Composite Simpson nodes with 2m subintervals per cell. Cell endpoints are kept per
// cell so the integrand can use the cell's own one-sided values at jumps.
inline std::vector<QuadNode> simpson_nodes(const std::vector<QuadCell>& cells, std::size_t m) {
  std::vector<QuadNode> out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const QuadCell& c = cells[k];
    if (c.weight == 0.0 || !(c.hi > c.lo)) continue;
    const std::size_t n = 2 * m;
    const double h = (c.hi - c.lo) / static_cast<double>(n);
    for (std::size_t j = 0; j <= n; ++j) {
      const double s = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      out.push_back({c.lo + h * static_cast<double>(j), c.weight * s * h / 3.0, k});
    }
  }
  return out;
}

}  // namespace detail

// Integral over the tensor product of per-dimension cell lists of weight * f.
// f(x, cells) receives the point and the cell index used along each dimension.
// The number of Simpson subintervals doubles until successive estimates agree.
template <class F>
double tensor_simpson(const std::vector<std::vector<QuadCell>>& dims, F&& f, const QuadratureOptions& opt = {}) {
  const std::size_t d = dims.size();
  std::vector<double> x(d);
  std::vector<std::size_t> cell(d);
  if (d == 0) return f(std::span<const double>(x), std::span<const std::size_t>(cell));

  auto estimate = [&](std::size_t m) {
    std::vector<std::vector<detail::QuadNode>> nodes(d);
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) {
      nodes[k] = detail::simpson_nodes(dims[k], m);
      if (nodes[k].empty()) return 0.0;
      total *= nodes[k].size();
      if (total > opt.max_points) throw ResourceError("quadrature grid exceeds the point budget");
    }
    std::vector<std::size_t> idx(d, 0);
    double acc = 0.0;
    for (;;) {
      double w = 1.0;
      for (std::size_t k = 0; k < d; ++k) {
        const auto& nd = nodes[k][idx[k]];
        x[k] = nd.x;
        cell[k] = nd.cell;
        w *= nd.w;
      }
      acc += w * f(std::span<const double>(x), std::span<const std::size_t>(cell));
      std::size_t k = 0;
      while (k < d && ++idx[k] == nodes[k].size()) idx[k++] = 0;
      if (k == d) break;
    }
    return acc;
  };

  double prev = estimate(1);
  for (int level = 1; level <= opt.max_levels; ++level) {
    const double cur = estimate(std::size_t{1} << level);
    if (std::abs(cur - prev) <= opt.rel_tol * std::max(std::abs(cur), opt.abs_floor)) return cur;
    prev = cur;
  }
  std::ostringstream os;
  os << "quadrature did not converge after " << opt.max_levels << " refinements";
  throw NumericError(os.str());
}

}  // namespace pointrat
