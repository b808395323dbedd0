#pragma once

#include <span>
#include <vector>

#include "hpdwav/manifold.hpp"

namespace hpdwav {

// Geometry policies for the interpolation and prediction templates. A policy
// supplies Point and Scalar types and three operations:
//   geodesic(a, b, t)  point at parameter t on the geodesic from a to b
//   mean(points)       equal-weight mean
//   complete(p, qs)    the point r with p = mean(qs..., r)

/// The HPD manifold under the affine-invariant metric.
struct HpdGeometry {
  using Point = HpdMatrix;
  using Scalar = double;

  KarcherOptions options;

  Point geodesic(const Point& a, const Point& b, Scalar t) const { return hpdwav::geodesic(a, b, t); }
  Point mean(std::span<const Point> pts) const { return karcher_mean(pts, options); }
  Point complete(const Point& p, std::span<const Point> others) const { return complete_mean(p, others); }
};

/// A flat vector space. V needs +, - and multiplication by S; S needs
/// construction from int and the field operations.
template <class V, class S = double>
struct LinearGeometry {
  using Point = V;
  using Scalar = S;

  Point geodesic(const Point& a, const Point& b, Scalar t) const { return a + t * (b - a); }
  Point mean(std::span<const Point> pts) const {
    Point acc = pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) acc = acc + pts[i];
    return (S(1) / S(static_cast<int>(pts.size()))) * acc;
  }
  Point complete(const Point& p, std::span<const Point> others) const {
    Point acc = S(static_cast<int>(others.size()) + 1) * p;
    for (const auto& q : others) acc = acc - q;
    return acc;
  }
};

}  // namespace hpdwav
