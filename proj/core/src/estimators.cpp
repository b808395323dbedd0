#include "hpdwav/estimators.hpp"

#include <algorithm>
#include <cmath>

namespace hpdwav {

HpdGrid intrinsic_nn(const HpdGrid& grid, int half_width) {
  if (half_width < 0) throw std::invalid_argument("half width must be non-negative");
  if (half_width == 0) return grid;
  HpdGrid out(grid.n1(), grid.n2(), grid.domain());
  std::vector<HpdMatrix> pts;
  for (int k1 = 0; k1 < grid.n1(); ++k1) {
    for (int k2 = 0; k2 < grid.n2(); ++k2) {
      pts.clear();
      // The centre goes first so that the iteration starts there.
      pts.push_back(grid(k1, k2));
      for (int a = std::max(0, k1 - half_width); a <= std::min(grid.n1() - 1, k1 + half_width); ++a) {
        for (int b = std::max(0, k2 - half_width); b <= std::min(grid.n2() - 1, k2 + half_width); ++b) {
          if (a != k1 || b != k2) pts.push_back(grid(a, b));
        }
      }
      out(k1, k2) = karcher_mean(pts);
    }
  }
  return out;
}

HpdGrid intrinsic_nw(const HpdGrid& grid, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  const int r1 = static_cast<int>(std::ceil(radius * grid.n1()));
  const int r2 = static_cast<int>(std::ceil(radius * grid.n2()));
  HpdGrid out(grid.n1(), grid.n2(), grid.domain());
  std::vector<HpdMatrix> pts;
  std::vector<double> w;
  for (int k1 = 0; k1 < grid.n1(); ++k1) {
    for (int k2 = 0; k2 < grid.n2(); ++k2) {
      pts.clear();
      w.clear();
      for (int a = std::max(0, k1 - r1); a <= std::min(grid.n1() - 1, k1 + r1); ++a) {
        for (int b = std::max(0, k2 - r2); b <= std::min(grid.n2() - 1, k2 + r2); ++b) {
          const double u1 = (a - k1) / (grid.n1() * radius);
          const double u2 = (b - k2) / (grid.n2() * radius);
          const double kern = 1.0 - (u1 * u1 + u2 * u2);
          if (kern <= 0.0) continue;
          pts.push_back(grid(a, b));
          w.push_back(kern);
        }
      }
      double total = 0.0;
      for (double x : w) total += x;
      for (double& x : w) x /= total;
      out(k1, k2) = karcher_mean(pts, w);
    }
  }
  return out;
}

double iise(const HpdGrid& estimate, const HpdGrid& target) {
  if (estimate.n1() != target.n1() || estimate.n2() != target.n2()) {
    throw std::invalid_argument("iise: grid shapes differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double dist = riemann_distance(estimate.cells()[i], target.cells()[i]);
    s += dist * dist;
  }
  return s / static_cast<double>(estimate.size());
}

DenoiseResult denoise_decomposition(const WaveletDecomposition& decomp, const DenoiseConfig& config) {
  const TraceField raw = trace_field(decomp);
  TraceField field = homogenize_variances(raw, decomp, config.variance);

  DenoiseResult res;
  res.scale_sigma = field.sigma;
  res.sigma_hat = finest_scale_sigma(field);
  res.lambda = config.lambda ? *config.lambda : universal_penalty(field);
  if (config.max_scale) field = truncate_scales(field, *config.max_scale);

  res.labels = cpress_tree_threshold(field, decomp.pyramid, res.lambda);
  const int jmax = decomp.max_scale();
  res.kept.assign(static_cast<std::size_t>(jmax + 1), 0);
  res.total.assign(static_cast<std::size_t>(jmax + 1), 0);
  for (int j = 1; j <= jmax; ++j) {
    const auto& lab = res.labels[static_cast<std::size_t>(j)].cells();
    res.total[static_cast<std::size_t>(j)] = lab.size();
    res.kept[static_cast<std::size_t>(j)] = static_cast<std::size_t>(std::count(lab.begin(), lab.end(), 1));
  }
  res.estimate = inverse_transform(apply_labels(decomp, res.labels));
  return res;
}

DenoiseResult wavelet_denoise(const HpdGrid& grid, const DenoiseConfig& config) {
  return denoise_decomposition(forward_transform(grid, config.order), config);
}

}  // namespace hpdwav
