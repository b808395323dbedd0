#include "hpdwav/neville.hpp"

namespace hpdwav {

HpdMatrix neville_curve(std::span<const HpdMatrix> points, std::span<const double> nodes, double t) {
  return neville<HpdGeometry>(HpdGeometry{}, points, nodes, t);
}

HpdMatrix neville_surface(const ControlGrid& grid, double t, double s) {
  grid.validate();
  return neville_surface<HpdGeometry>(HpdGeometry{}, grid, t, s);
}

HpdGrid generate_polynomial_surface(const ControlGrid& grid, std::span<const double> eval_x,
                                    std::span<const double> eval_y, Rect domain) {
  grid.validate();
  if (eval_x.empty() || eval_y.empty()) throw std::invalid_argument("evaluation lattice is empty");
  const HpdGeometry g;
  const std::size_t nx = grid.nodes_x.size();
  const std::size_t ny = grid.nodes_y.size();
  HpdGrid out(static_cast<int>(eval_x.size()), static_cast<int>(eval_y.size()), domain);

  // The t-curves do not depend on s, so evaluate them once per x.
  std::vector<HpdMatrix> column(nx);
  std::vector<HpdMatrix> curve(ny);
  for (std::size_t a = 0; a < eval_x.size(); ++a) {
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) column[i] = grid.at(i, j);
      curve[j] = neville<HpdGeometry>(g, column, grid.nodes_x, eval_x[a]);
    }
    for (std::size_t b = 0; b < eval_y.size(); ++b) {
      out(static_cast<int>(a), static_cast<int>(b)) = neville<HpdGeometry>(g, curve, grid.nodes_y, eval_y[b]);
    }
  }
  return out;
}

}  // namespace hpdwav
