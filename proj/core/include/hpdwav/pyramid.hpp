#pragma once

#include <string>
#include <vector>

#include "hpdwav/grid.hpp"

namespace hpdwav {

/// How the rectangles of scale j-1 are split to form scale j.
enum class Split { None, X, Y, Quad };

/// The rectangles of one pyramid scale, laid out as an n1 x n2 grid.
struct PyramidScale {
  int n1 = 1, n2 = 1;
  std::vector<Rect> rects;   // k1 * n2 + k2
  std::vector<int> parent;   // flat index into the previous scale; -1 at scale 0
};

/// Scales j = 0..J of nested rectangle partitions of a domain.
class RefinementPyramid {
 public:
  RefinementPyramid() = default;
  RefinementPyramid(Rect domain, std::vector<PyramidScale> scales, int j1 = -1, int j2 = -1);

  const Rect& domain() const { return domain_; }
  int max_scale() const { return static_cast<int>(scales_.size()) - 1; }
  int num_scales() const { return static_cast<int>(scales_.size()); }
  const PyramidScale& scale(int j) const { return scales_.at(static_cast<std::size_t>(j)); }
  std::vector<PyramidScale>& mutable_scales() { return scales_; }

  /// log2 of the finest grid dimensions; -1 for pyramids that are not natural dyadic.
  int j1() const { return j1_; }
  int j2() const { return j2_; }
  bool is_dyadic() const { return j1_ >= 0 && j2_ >= 0; }

  int n1(int j) const { return scale(j).n1; }
  int n2(int j) const { return scale(j).n2; }

  /// Split that produces scale j from scale j-1 (dyadic pyramids, j >= 1).
  Split split(int j) const;
  /// Flat indices at scale j of the children of flat index `parent` at scale j-1.
  std::vector<int> children(int j, int parent) const;
  /// Area of a scale-j rectangle relative to the domain (constant per scale when dyadic).
  double relative_area(int j) const;

 private:
  Rect domain_;
  std::vector<PyramidScale> scales_;
  int j1_ = -1, j2_ = -1;
};

/// Scale j has 2^max(0, j-J+J1) x 2^max(0, j-J+J2) equal rectangles, J = max(J1, J2).
RefinementPyramid natural_dyadic_pyramid(int j1, int j2, Rect domain = {});

/// Human-readable descriptions of every violated shape, partitioning or
/// refinement condition. Empty for a valid pyramid.
std::vector<std::string> validate_pyramid(const RefinementPyramid& p);

/// log2(n) for a power of two, otherwise -1.
int exact_log2(int n);

}  // namespace hpdwav
