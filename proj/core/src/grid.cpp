#include "hpdwav/grid.hpp"

#include "hpdwav/manifold.hpp"

namespace hpdwav {

namespace {

template <class T>
int common_dim(const Grid<T>& g) {
  if (g.size() == 0) throw std::invalid_argument("grid is empty");
  const int d = g.cells().front().dim();
  for (const auto& c : g.cells()) {
    if (c.dim() != d) throw std::invalid_argument("grid cells have different dimensions");
  }
  return d;
}

}  // namespace

int grid_dim(const HpdGrid& g) { return common_dim(g); }
int grid_dim(const HermitianGrid& g) { return common_dim(g); }

HpdGrid congruence(const ComplexMatrix& a, const HpdGrid& g) {
  return g.map([&](const HpdMatrix& p) { return congruence(a, p); });
}

}  // namespace hpdwav
