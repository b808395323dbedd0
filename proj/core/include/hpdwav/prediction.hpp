#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hpdwav/geometry.hpp"
#include "hpdwav/neville.hpp"
#include "hpdwav/pyramid.hpp"

namespace hpdwav {

/// Odd refinement orders along x and y.
struct Order {
  int n1 = 1;
  int n2 = 1;
  bool operator==(const Order&) const = default;
};

void validate_order(const Order& order);

/// Where the coarse neighbourhood of one coarse cell sits, and how its
/// children are split.
///
/// The window covers coarse cells [start1, start1 + w1) x [start2, start2 + w2);
/// the parent is at offset (c1, c2) inside it. Windows are shifted inward at
/// the boundary and shrunk to the largest odd size that fits the grid.
struct Stencil {
  Split split = Split::Quad;
  int start1 = 0, start2 = 0;
  int w1 = 1, w2 = 1;
  int c1 = 0, c2 = 0;

  int num_children() const { return split == Split::Quad ? 4 : 2; }
};

Stencil make_stencil(int coarse_n1, int coarse_n2, int k1, int k2, Split split, const Order& order);

/// Fine-cell offset (i1, i2) of child `c` in the ordering returned by
/// predict_children.
std::array<int, 2> child_offset(Split split, int c);

namespace detail {

template <class G>
typename G::Point cumulative_neville(const G& g, const std::vector<typename G::Point>& cum,
                                     const std::vector<typename G::Scalar>& nodes,
                                     const typename G::Scalar& t) {
  return neville<G>(g, std::span<const typename G::Point>(cum), std::span<const typename G::Scalar>(nodes), t);
}

// Two children of cell c of a line of coarse midpoints, left child first.
template <class G>
std::array<typename G::Point, 2> predict_line(const G& g, const std::vector<typename G::Point>& line, int c) {
  using Point = typename G::Point;
  using S = typename G::Scalar;
  const int n = static_cast<int>(line.size());
  const Point& parent = line[static_cast<std::size_t>(c)];
  if (n == 1) return {parent, parent};

  // Cumulative means over cells [0, r], attached to their right end r + 1.
  std::vector<Point> cum;
  std::vector<S> nodes;
  cum.reserve(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    cum.push_back(r == 0 ? line[0] : g.mean(std::span<const Point>(line.data(), static_cast<std::size_t>(r + 1))));
    nodes.push_back(S(r + 1));
  }
  const S th = S(2 * c + 1) / S(2);
  const Point& q1 = cum[static_cast<std::size_t>(c)];
  const Point qh = cumulative_neville(g, cum, nodes, th);
  // Right half: 2 t1 Q(t1) - 2 th Q(th).
  Point right = g.geodesic(q1, qh, S(-2) * th);
  std::array<Point, 1> others{right};
  Point left = g.complete(parent, others);
  return {std::move(left), std::move(right)};
}

// Four children of the centre cell of a w1 x w2 window (row-major i * w2 + j),
// ordered (0,0), (0,1), (1,0), (1,1) by (i1, i2).
template <class G>
std::array<typename G::Point, 4> predict_quad(const G& g, const std::vector<typename G::Point>& win, int w1, int w2,
                                              int c1, int c2) {
  using Point = typename G::Point;
  using S = typename G::Scalar;
  auto at = [&](int i, int j) -> const Point& { return win[static_cast<std::size_t>(i * w2 + j)]; };
  const Point& parent = at(c1, c2);

  if (w1 == 1 && w2 == 1) return {parent, parent, parent, parent};
  if (w1 == 1) {
    std::vector<Point> line;
    for (int j = 0; j < w2; ++j) line.push_back(at(0, j));
    auto m = predict_line(g, line, c2);
    return {m[0], m[1], m[0], m[1]};
  }
  if (w2 == 1) {
    std::vector<Point> line;
    for (int i = 0; i < w1; ++i) line.push_back(at(i, 0));
    auto m = predict_line(g, line, c1);
    return {m[0], m[0], m[1], m[1]};
  }

  // Cumulative means over [0, r1] x [0, r2], attached to the upper-right
  // corner (r1 + 1, r2 + 1) of the block.
  std::vector<Point> cum(static_cast<std::size_t>(w1 * w2));
  std::vector<Point> block;
  block.reserve(static_cast<std::size_t>(w1 * w2));
  for (int r1 = 0; r1 < w1; ++r1) {
    for (int r2 = 0; r2 < w2; ++r2) {
      block.clear();
      for (int i = 0; i <= r1; ++i) {
        for (int j = 0; j <= r2; ++j) block.push_back(at(i, j));
      }
      cum[static_cast<std::size_t>(r1 * w2 + r2)] = block.size() == 1 ? block.front() : g.mean(block);
    }
  }
  std::vector<S> nx, ny;
  for (int r = 0; r < w1; ++r) nx.push_back(S(r + 1));
  for (int r = 0; r < w2; ++r) ny.push_back(S(r + 1));

  // Q(t, s): curves in t at every y-node, then one curve in s.
  auto t_curves = [&](const S& t) {
    std::vector<Point> curve;
    std::vector<Point> col(static_cast<std::size_t>(w1));
    for (int r2 = 0; r2 < w2; ++r2) {
      for (int r1 = 0; r1 < w1; ++r1) col[static_cast<std::size_t>(r1)] = cum[static_cast<std::size_t>(r1 * w2 + r2)];
      curve.push_back(cumulative_neville(g, col, nx, t));
    }
    return curve;
  };
  auto q_at = [&](const std::vector<Point>& curve, const S& s) { return cumulative_neville(g, curve, ny, s); };

  const S half = S(1) / S(2);
  const S t0 = S(c1), th = S(2 * c1 + 1) / S(2), t1 = S(c1 + 1);
  const S s0 = S(c2), sh = S(2 * c2 + 1) / S(2), s1 = S(c2 + 1);
  const auto ct_h = t_curves(th);
  const auto ct_1 = t_curves(t1);

  const Point q_1_1 = cum[static_cast<std::size_t>(c1 * w2 + c2)];
  const Point q_1_h = q_at(ct_1, sh);
  const Point q_h_h = q_at(ct_h, sh);
  const Point q_h_1 = q_at(ct_h, s1);

  // Quadrant (1,1) = [th, t1] x [sh, s1] by inclusion-exclusion of areas.
  const Point a1 = g.geodesic(q_1_h, q_h_h, S(-2) * th);  // [th, t1] x [0, sh], area sh/2
  const S area_a2 = th * s1 + sh * half;
  const Point a2 = g.geodesic(q_h_1, a1, (sh * half) / area_a2);
  const Point m11 = g.geodesic(q_1_1, a2, S(-4) * area_a2);

  // Quadrant (0,1) from the upper half [t0, t1] x [sh, s1].
  Point b2 = q_1_h;
  S area_b1 = S(0);
  if (c1 > 0) {
    const auto ct_0 = t_curves(t0);
    const Point b1 = g.geodesic(q_at(ct_0, s1), q_at(ct_0, sh), S(-2) * sh);  // [0, t0] x [sh, s1]
    area_b1 = t0 * half;
    b2 = g.geodesic(q_1_h, b1, area_b1 / (t1 * sh + area_b1));
  }
  const Point b3 = g.geodesic(q_1_1, b2, S(-2) * (t1 * sh + area_b1));
  const Point m01 = g.geodesic(b3, m11, S(-1));

  // Quadrant (1,0) from the right half [th, t1] x [s0, s1].
  Point c2p = q_h_1;
  S area_c1 = S(0);
  if (c2 > 0) {
    const Point cc1 = g.geodesic(q_at(ct_1, s0), q_at(ct_h, s0), S(-2) * th);  // [th, t1] x [0, s0]
    area_c1 = s0 * half;
    c2p = g.geodesic(q_h_1, cc1, area_c1 / (th * s1 + area_c1));
  }
  const Point c3 = g.geodesic(q_1_1, c2p, S(-2) * (th * s1 + area_c1));
  const Point m10 = g.geodesic(c3, m11, S(-1));

  std::array<Point, 3> others{m10, m01, m11};
  Point m00 = g.complete(parent, others);
  return {std::move(m00), m01, m10, m11};
}

}  // namespace detail

/// Predicted children of the stencil's parent cell. `coarse(k1, k2)` returns
/// the coarse midpoint at absolute coarse indices. Children are ordered as
/// described by child_offset.
template <class G, class Access>
std::vector<typename G::Point> predict_children(const G& g, const Stencil& st, Access coarse) {
  using Point = typename G::Point;
  std::vector<Point> win;
  win.reserve(static_cast<std::size_t>(st.w1 * st.w2));
  for (int i = 0; i < st.w1; ++i) {
    for (int j = 0; j < st.w2; ++j) win.push_back(coarse(st.start1 + i, st.start2 + j));
  }
  switch (st.split) {
    case Split::Quad: {
      auto q = detail::predict_quad(g, win, st.w1, st.w2, st.c1, st.c2);
      return {q.begin(), q.end()};
    }
    case Split::X: {
      auto m = detail::predict_line(g, win, st.c1);
      return {m.begin(), m.end()};
    }
    case Split::Y: {
      auto m = detail::predict_line(g, win, st.c2);
      return {m.begin(), m.end()};
    }
    case Split::None:
      break;
  }
  throw std::invalid_argument("stencil has no split");
}

/// Linear weights (w1 x w2, indexed [i][j] over the window) that produce
/// child `child` of the stencil from the coarse midpoints in the flat case.
Eigen::MatrixXd stencil_weights(const Stencil& st, int child);

/// Interior weights C for order (N1, N2) and child quadrant (i1, i2), as an
/// N1 x N2 matrix indexed [l1][l2] over the centred neighbourhood.
Eigen::MatrixXd prediction_weights(int n1, int n2, int i1, int i2);

/// Four predicted children of the centre of a full (N1 x N2) HPD neighbourhood
/// (row-major i * N2 + j), ordered (0,0), (0,1), (1,0), (1,1).
std::array<HpdMatrix, 4> predict_midpoints_dyadic(std::span<const HpdMatrix> neighborhood, const Order& order);

/// The same children as weighted intrinsic means with the interior weight tables.
std::array<HpdMatrix, 4> predict_midpoints_weighted(std::span<const HpdMatrix> neighborhood, const Order& order);

/// Children of the stencil's parent as weighted intrinsic means of the window,
/// with the flat-case weights of stencil_weights. Coincides with
/// predict_children in the commuting case and stays bounded where the
/// geodesic construction has to extrapolate far.
std::vector<HpdMatrix> predict_children_weighted(const HpdGrid& coarse, const Stencil& st);

/// Predicted midpoints at scale j from the midpoints at scale j - 1, using
/// predict_children_weighted at every location.
HpdGrid predict_scale(const HpdGrid& coarse, const RefinementPyramid& pyramid, int j, const Order& order);

}  // namespace hpdwav
