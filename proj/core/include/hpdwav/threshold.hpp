#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hpdwav/wavelet.hpp"

namespace hpdwav {

/// Raised when the finest-scale traces carry no spread to estimate noise from.
class DegenerateNoise : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Traces of whitened coefficients, per scale (entries 1..J), with the
/// per-scale standard deviations used to normalize them.
struct TraceField {
  std::vector<RealGrid> traces;
  std::vector<double> sigma;  // 1.0 before homogenization

  int max_scale() const { return static_cast<int>(traces.size()) - 1; }
  std::size_t num_coefficients() const;
};

TraceField trace_field(const WaveletDecomposition& decomp);

/// Orders actually used at scale j once the window is clipped to the coarse
/// grid; an axis that is not split at scale j has order 1.
Order effective_order(const RefinementPyramid& pyramid, int j, const Order& order);

/// Interior weights that drive scale j (the (0,0) child of an interior cell).
Eigen::MatrixXd nominal_weights(const RefinementPyramid& pyramid, int j, const Order& order);

/// Variance of Tr of a whitened coefficient at an interior location when the
/// noise has Var(Tr(Log ε)) = v. `binary` selects the two-child form; the
/// centre weight is assumed to be 1. n is the number of finest cells.
double analytic_trace_variance(const Eigen::MatrixXd& weights, bool binary, long long n, double v);

/// Same, with the split type and weights taken from scale j of the pyramid.
double analytic_trace_variance(const RefinementPyramid& pyramid, int j, const Order& order, double v);

enum class VarianceMethod { Parametric, Nonparametric, Semiparametric };

struct VarianceSpec {
  VarianceMethod method = VarianceMethod::Nonparametric;
  double trace_variance = 0.0;  // Var(Tr(Log ε)); used by the parametric and semiparametric methods
};

/// Median absolute deviation about the median, without the consistency constant.
double median_absolute_deviation(std::vector<double> values);
inline constexpr double kMadConsistency = 0.6745;

/// Per-scale standard deviations of the traces under `spec`; entry 0 unused.
std::vector<double> scale_sigmas(const TraceField& raw, const WaveletDecomposition& decomp, const VarianceSpec& spec);

/// Divides every scale by its standard deviation. Scales with zero deviation are left at zero.
TraceField homogenize_variances(const TraceField& raw, const WaveletDecomposition& decomp, const VarianceSpec& spec);

/// σ̂ sqrt(2 ln N), σ̂ = MAD of the finest homogenized traces / 0.6745, N = number of coefficients.
double universal_penalty(const TraceField& homogenized);
/// The MAD noise scale of the finest scale.
double finest_scale_sigma(const TraceField& field);

/// Keep/kill flags per scale (entries 1..J).
using LabelField = std::vector<Grid<std::uint8_t>>;

/// Rooted-subtree labels minimizing Σ_{killed} d² + λ² · #kept over the
/// coefficient forest whose roots are the scale-1 coefficients. Ties kill.
LabelField cpress_tree_threshold(const TraceField& field, const RefinementPyramid& pyramid, double lambda);

/// Σ_{killed} d² + λ² · #kept, and a check that kept nodes have kept parents.
double cpress_cost(const TraceField& field, const LabelField& labels, double lambda);
bool is_rooted(const LabelField& labels, const RefinementPyramid& pyramid);

/// Zeroes raw and whitened coefficients whose label is 0.
WaveletDecomposition apply_labels(const WaveletDecomposition& decomp, const LabelField& labels);

/// Zeroes every coefficient at scales j >= j0.
WaveletDecomposition linear_threshold(const WaveletDecomposition& decomp, int j0);

/// (log2 n + |J1 - J2|(1 + 2 max(N1, N2))) / (2 + 2 min(N1, N2)).
double linear_threshold_scale(int j1, int j2, const Order& order);
int linear_threshold_scale_ceil(int j1, int j2, const Order& order);

/// Zeroes traces above max_scale so that the tree prune removes them.
TraceField truncate_scales(const TraceField& field, int max_scale);

}  // namespace hpdwav
