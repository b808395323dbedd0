#pragma once

#include <vector>

#include "hpdwav/prediction.hpp"

namespace hpdwav {

/// Midpoints at every scale, index j = 0..J.
using MidpointPyramid = std::vector<HpdGrid>;

/// Parent midpoints at scale j - 1: area-weighted intrinsic means of the children.
HpdGrid coarsen(const HpdGrid& fine, const RefinementPyramid& pyramid, int j);

MidpointPyramid build_midpoint_pyramid(const HpdGrid& grid, const RefinementPyramid& pyramid);

/// The natural dyadic pyramid that matches a 2^J1 x 2^J2 grid.
RefinementPyramid pyramid_for(const HpdGrid& grid);

struct WaveletDecomposition {
  Order order;
  RefinementPyramid pyramid;
  HpdMatrix coarsest;
  // Entries 1..J are populated; entry 0 is an empty placeholder.
  std::vector<HermitianGrid> coeffs;
  std::vector<HermitianGrid> whitened;
  std::vector<HpdGrid> predicted;

  int max_scale() const { return pyramid.max_scale(); }
  int dim() const { return coarsest.dim(); }
  bool has_whitened() const { return whitened.size() == coeffs.size(); }
  /// sqrt(area(I_j) / area(domain)).
  double scale_factor(int j) const;
};

WaveletDecomposition forward_transform(const HpdGrid& grid, const Order& order);
WaveletDecomposition forward_transform(const HpdGrid& grid, const Order& order, const RefinementPyramid& pyramid);

/// When the decomposition carries its forward-pass predictions, a coefficient
/// whose prediction has changed (after thresholding) is parallel transported
/// to the new prediction before it is applied.
HpdGrid inverse_transform(const WaveletDecomposition& decomp);

/// Fills in predicted bases and whitened coefficients for a decomposition
/// that carries only the coarsest midpoint and raw coefficients.
WaveletDecomposition with_whitened(const WaveletDecomposition& decomp);

/// Midpoints at scales 0..J rebuilt from the coarsest midpoint and the coefficients.
MidpointPyramid inverse_pyramid(const WaveletDecomposition& decomp);

/// Largest per-cell ‖a - b‖_F / ‖b‖_F.
double max_relative_error(const HpdGrid& a, const HpdGrid& b);

}  // namespace hpdwav
