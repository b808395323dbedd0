#pragma once

#include <stdexcept>
#include <vector>

#include "hpdwav/matrix.hpp"

namespace hpdwav {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool valid() const { return x0 < x1 && y0 < y1; }
  bool operator==(const Rect&) const = default;
};

/// Dense n1 x n2 array indexed (k1, k2): k1 runs along x, k2 along y,
/// with (0, 0) at the lower-left corner of the domain.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int n1, int n2, Rect domain = {}) : n1_(n1), n2_(n2), domain_(domain), cells_(checked_size(n1, n2)) {}
  Grid(int n1, int n2, const T& fill, Rect domain = {})
      : n1_(n1), n2_(n2), domain_(domain), cells_(checked_size(n1, n2), fill) {}

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t size() const { return cells_.size(); }
  const Rect& domain() const { return domain_; }
  void set_domain(const Rect& r) { domain_ = r; }

  T& operator()(int k1, int k2) { return cells_[index(k1, k2)]; }
  const T& operator()(int k1, int k2) const { return cells_[index(k1, k2)]; }
  T& at(int k1, int k2) {
    bounds(k1, k2);
    return cells_[index(k1, k2)];
  }
  const T& at(int k1, int k2) const {
    bounds(k1, k2);
    return cells_[index(k1, k2)];
  }

  std::vector<T>& cells() { return cells_; }
  const std::vector<T>& cells() const { return cells_; }

  std::size_t index(int k1, int k2) const {
    return static_cast<std::size_t>(k1) * static_cast<std::size_t>(n2_) + static_cast<std::size_t>(k2);
  }

  /// Applies f to every cell, returning a grid of the results.
  template <class F>
  auto map(F f) const -> Grid<decltype(f(std::declval<const T&>()))> {
    Grid<decltype(f(std::declval<const T&>()))> out(n1_, n2_, domain_);
    for (std::size_t i = 0; i < cells_.size(); ++i) out.cells()[i] = f(cells_[i]);
    return out;
  }

 private:
  static std::size_t checked_size(int n1, int n2) {
    if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("grid dimensions must be positive");
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  }
  void bounds(int k1, int k2) const {
    if (k1 < 0 || k1 >= n1_ || k2 < 0 || k2 >= n2_) throw std::out_of_range("grid index out of range");
  }

  int n1_ = 0, n2_ = 0;
  Rect domain_;
  std::vector<T> cells_;
};

using HpdGrid = Grid<HpdMatrix>;
using HermitianGrid = Grid<HermitianMatrix>;
using RealGrid = Grid<double>;

/// Common matrix dimension of all cells; throws if the cells disagree.
int grid_dim(const HpdGrid& g);
int grid_dim(const HermitianGrid& g);

/// Congruence a* X a applied cell by cell.
HpdGrid congruence(const ComplexMatrix& a, const HpdGrid& g);

}  // namespace hpdwav
