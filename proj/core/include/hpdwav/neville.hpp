#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hpdwav/geometry.hpp"
#include "hpdwav/grid.hpp"

namespace hpdwav {

/// Value at t of the intrinsic interpolating polynomial through
/// (nodes[i], points[i]), built from repeated geodesic steps. Extrapolates
/// for t outside the node range.
template <class G>
typename G::Point neville(const G& g, std::span<const typename G::Point> points,
                          std::span<const typename G::Scalar> nodes, const typename G::Scalar& t) {
  using Point = typename G::Point;
  const std::size_t n = points.size();
  if (n == 0 || nodes.size() != n) throw std::invalid_argument("neville needs matching points and nodes");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      if (nodes[i] == nodes[k]) throw std::invalid_argument("neville nodes must be distinct");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (nodes[i] == t) return points[i];
  }
  std::vector<Point> tab(points.begin(), points.end());
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = 0; i + k < n; ++i) {
      const auto u = (t - nodes[i]) / (nodes[i + k] - nodes[i]);
      tab[i] = g.geodesic(tab[i], tab[i + 1], u);
    }
  }
  return tab.front();
}

/// Control points P(i, j) at nodes (x_i, y_j) of a tensor grid.
template <class P, class S = double>
struct BasicControlGrid {
  std::vector<S> nodes_x;
  std::vector<S> nodes_y;
  std::vector<P> points;  // i * nodes_y.size() + j

  const P& at(std::size_t i, std::size_t j) const { return points[i * nodes_y.size() + j]; }

  void validate() const {
    if (nodes_x.empty() || nodes_y.empty() || points.size() != nodes_x.size() * nodes_y.size()) {
      throw std::invalid_argument("control grid shape is inconsistent");
    }
    for (std::size_t i = 1; i < nodes_x.size(); ++i) {
      if (!(nodes_x[i - 1] < nodes_x[i])) throw std::invalid_argument("x nodes must increase strictly");
    }
    for (std::size_t j = 1; j < nodes_y.size(); ++j) {
      if (!(nodes_y[j - 1] < nodes_y[j])) throw std::invalid_argument("y nodes must increase strictly");
    }
  }
};

/// Bi-degree interpolant: one curve in t per y-node, then one curve in s.
template <class G>
typename G::Point neville_surface(const G& g, const BasicControlGrid<typename G::Point, typename G::Scalar>& grid,
                                  const typename G::Scalar& t, const typename G::Scalar& s) {
  using Point = typename G::Point;
  const std::size_t nx = grid.nodes_x.size();
  const std::size_t ny = grid.nodes_y.size();
  std::vector<Point> column(nx);
  std::vector<Point> curve;
  curve.reserve(ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) column[i] = grid.at(i, j);
    curve.push_back(neville<G>(g, column, grid.nodes_x, t));
  }
  return neville<G>(g, curve, grid.nodes_y, s);
}

/// Same interpolant, evaluated s-first. Agrees with neville_surface up to rounding.
template <class G>
typename G::Point neville_surface_transposed(const G& g,
                                             const BasicControlGrid<typename G::Point, typename G::Scalar>& grid,
                                             const typename G::Scalar& t, const typename G::Scalar& s) {
  using Point = typename G::Point;
  const std::size_t nx = grid.nodes_x.size();
  const std::size_t ny = grid.nodes_y.size();
  std::vector<Point> row(ny);
  std::vector<Point> curve;
  curve.reserve(nx);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) row[j] = grid.at(i, j);
    curve.push_back(neville<G>(g, row, grid.nodes_y, s));
  }
  return neville<G>(g, curve, grid.nodes_x, t);
}

using ControlGrid = BasicControlGrid<HpdMatrix, double>;

HpdMatrix neville_curve(std::span<const HpdMatrix> points, std::span<const double> nodes, double t);
HpdMatrix neville_surface(const ControlGrid& grid, double t, double s);

/// Evaluates the interpolating surface on the lattice eval_x x eval_y.
HpdGrid generate_polynomial_surface(const ControlGrid& grid, std::span<const double> eval_x,
                                    std::span<const double> eval_y, Rect domain = {});

}  // namespace hpdwav
