#pragma once

#include <optional>

#include "hpdwav/threshold.hpp"

namespace hpdwav {

/// Equal-weight intrinsic mean over the (2h+1)^2 window around each cell,
/// clipped at the grid boundary.
HpdGrid intrinsic_nn(const HpdGrid& grid, int half_width);

/// Intrinsic Nadaraya-Watson smoother with the radial Epanechnikov kernel
/// max(0, 1 - |u|^2), u = (dx, dy) / radius in unit-square cell coordinates.
HpdGrid intrinsic_nw(const HpdGrid& grid, double radius);

/// Mean squared Riemannian distance between corresponding cells.
double iise(const HpdGrid& estimate, const HpdGrid& target);

struct DenoiseConfig {
  Order order{3, 3};
  std::optional<double> lambda;  // unset: universal penalty
  VarianceSpec variance{};
  std::optional<int> max_scale;
};

struct DenoiseResult {
  HpdGrid estimate;
  double lambda = 0.0;
  double sigma_hat = 0.0;  // MAD scale of the finest homogenized traces
  std::vector<double> scale_sigma;
  std::vector<std::size_t> kept;   // per scale
  std::vector<std::size_t> total;  // per scale
  LabelField labels;
};

/// Tree-structured trace thresholding of an existing decomposition.
DenoiseResult denoise_decomposition(const WaveletDecomposition& decomp, const DenoiseConfig& config);

/// Forward transform, homogenize, prune, reconstruct.
DenoiseResult wavelet_denoise(const HpdGrid& grid, const DenoiseConfig& config);

}  // namespace hpdwav
