#include "hpdwav/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace hpdwav {

std::size_t TraceField::num_coefficients() const {
  std::size_t n = 0;
  for (std::size_t j = 1; j < traces.size(); ++j) n += traces[j].size();
  return n;
}

TraceField trace_field(const WaveletDecomposition& decomp) {
  const WaveletDecomposition* src = &decomp;
  WaveletDecomposition filled;
  if (!decomp.has_whitened()) {
    filled = with_whitened(decomp);
    src = &filled;
  }
  TraceField f;
  const int jmax = src->max_scale();
  f.traces.resize(static_cast<std::size_t>(jmax + 1));
  f.sigma.assign(static_cast<std::size_t>(jmax + 1), 1.0);
  for (int j = 1; j <= jmax; ++j) {
    f.traces[static_cast<std::size_t>(j)] =
        src->whitened[static_cast<std::size_t>(j)].map([](const HermitianMatrix& h) { return h.trace(); });
  }
  return f;
}

Order effective_order(const RefinementPyramid& pyramid, int j, const Order& order) {
  const Split s = pyramid.split(j);
  auto clip = [](int n, int want) { return std::min(want, n % 2 == 1 ? n : n - 1); };
  Order eff{1, 1};
  if (s == Split::Quad || s == Split::X) eff.n1 = clip(pyramid.n1(j - 1), order.n1);
  if (s == Split::Quad || s == Split::Y) eff.n2 = clip(pyramid.n2(j - 1), order.n2);
  return eff;
}

Eigen::MatrixXd nominal_weights(const RefinementPyramid& pyramid, int j, const Order& order) {
  const Order eff = effective_order(pyramid, j, order);
  return prediction_weights(eff.n1, eff.n2, 0, 0);
}

double analytic_trace_variance(const Eigen::MatrixXd& weights, bool binary, long long n, double v) {
  if (n <= 0) throw std::invalid_argument("cell count must be positive");
  const double sum_sq = weights.squaredNorm();
  const double base = v / (2.0 * static_cast<double>(n));
  return binary ? base * sum_sq : base * (1.0 + 0.5 * sum_sq);
}

double analytic_trace_variance(const RefinementPyramid& pyramid, int j, const Order& order, double v) {
  const int jmax = pyramid.max_scale();
  const long long n = static_cast<long long>(pyramid.n1(jmax)) * pyramid.n2(jmax);
  const bool binary = pyramid.split(j) != Split::Quad;
  return analytic_trace_variance(nominal_weights(pyramid, j, order), binary, n, v);
}

double median_absolute_deviation(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("MAD of an empty set");
  auto median = [](std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
      const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
      m = 0.5 * (m + lower);
    }
    return m;
  };
  const double med = median(values);
  for (double& x : values) x = std::abs(x - med);
  return median(values);
}

double finest_scale_sigma(const TraceField& field) {
  if (field.max_scale() < 1) throw std::invalid_argument("trace field has no wavelet scales");
  return median_absolute_deviation(field.traces.back().cells()) / kMadConsistency;
}

std::vector<double> scale_sigmas(const TraceField& raw, const WaveletDecomposition& decomp, const VarianceSpec& spec) {
  const auto& pyr = decomp.pyramid;
  const int jmax = pyr.max_scale();
  std::vector<double> sigma(static_cast<std::size_t>(jmax + 1), 1.0);
  if (jmax < 1) return sigma;
  if (spec.method != VarianceMethod::Nonparametric && !(spec.trace_variance >= 0.0)) {
    throw std::invalid_argument("trace variance must be non-negative");
  }

  std::vector<double> unit(static_cast<std::size_t>(jmax + 1), 0.0);
  for (int j = 1; j <= jmax; ++j) unit[static_cast<std::size_t>(j)] = analytic_trace_variance(pyr, j, decomp.order, 1.0);

  auto from_finest = [&]() {
    const double s = finest_scale_sigma(raw);
    if (!(s > 0.0)) throw DegenerateNoise("finest-scale traces have zero spread; cannot estimate the noise level");
    return s;
  };

  switch (spec.method) {
    case VarianceMethod::Parametric:
      for (int j = 1; j <= jmax; ++j) sigma[static_cast<std::size_t>(j)] = std::sqrt(spec.trace_variance * unit[static_cast<std::size_t>(j)]);
      break;
    case VarianceMethod::Nonparametric: {
      const double s = from_finest();
      const double ref = unit[static_cast<std::size_t>(jmax)];
      for (int j = 1; j <= jmax; ++j) sigma[static_cast<std::size_t>(j)] = s * std::sqrt(unit[static_cast<std::size_t>(j)] / ref);
      break;
    }
    case VarianceMethod::Semiparametric: {
      const bool finest_quad = pyr.split(jmax) == Split::Quad;
      const double s = finest_quad ? from_finest() : 0.0;
      const double ref = unit[static_cast<std::size_t>(jmax)];
      for (int j = 1; j <= jmax; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (pyr.split(j) == Split::Quad) {
          sigma[ju] = s * std::sqrt(unit[ju] / ref);
        } else {
          sigma[ju] = std::sqrt(spec.trace_variance * unit[ju]);
        }
      }
      break;
    }
  }
  return sigma;
}

TraceField homogenize_variances(const TraceField& raw, const WaveletDecomposition& decomp, const VarianceSpec& spec) {
  TraceField out = raw;
  out.sigma = scale_sigmas(raw, decomp, spec);
  for (std::size_t j = 1; j < out.traces.size(); ++j) {
    const double s = out.sigma[j];
    for (double& x : out.traces[j].cells()) x = s > 0.0 ? x / s : 0.0;
  }
  return out;
}

double universal_penalty(const TraceField& homogenized) {
  const double n = static_cast<double>(homogenized.num_coefficients());
  return finest_scale_sigma(homogenized) * std::sqrt(2.0 * std::log(n));
}

namespace {

std::vector<std::vector<std::vector<int>>> child_lists(const RefinementPyramid& pyramid) {
  const int jmax = pyramid.max_scale();
  std::vector<std::vector<std::vector<int>>> kids(static_cast<std::size_t>(jmax + 1));
  for (int j = 0; j < jmax; ++j) {
    const auto& next = pyramid.scale(j + 1);
    auto& lists = kids[static_cast<std::size_t>(j)];
    lists.resize(pyramid.scale(j).rects.size());
    for (std::size_t i = 0; i < next.parent.size(); ++i) {
      lists[static_cast<std::size_t>(next.parent[i])].push_back(static_cast<int>(i));
    }
  }
  return kids;
}

}  // namespace

LabelField cpress_tree_threshold(const TraceField& field, const RefinementPyramid& pyramid, double lambda) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("penalty must be non-negative");
  const int jmax = pyramid.max_scale();
  if (field.max_scale() != jmax) throw std::invalid_argument("trace field does not match the pyramid");
  const auto kids = child_lists(pyramid);
  const double pen = lambda * lambda;

  std::vector<std::vector<double>> subtree(static_cast<std::size_t>(jmax + 1));
  std::vector<std::vector<double>> best(static_cast<std::size_t>(jmax + 1));
  std::vector<std::vector<std::uint8_t>> keep(static_cast<std::size_t>(jmax + 1));
  for (int j = jmax; j >= 1; --j) {
    const auto ju = static_cast<std::size_t>(j);
    const auto& tr = field.traces[ju].cells();
    subtree[ju].assign(tr.size(), 0.0);
    best[ju].assign(tr.size(), 0.0);
    keep[ju].assign(tr.size(), 0);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      double sq = tr[i] * tr[i];
      double keep_cost = pen;
      if (j < jmax) {
        for (int c : kids[ju][i]) {
          sq += subtree[ju + 1][static_cast<std::size_t>(c)];
          keep_cost += best[ju + 1][static_cast<std::size_t>(c)];
        }
      }
      subtree[ju][i] = sq;
      if (keep_cost < sq) {
        keep[ju][i] = 1;
        best[ju][i] = keep_cost;
      } else {
        best[ju][i] = sq;
      }
    }
  }

  LabelField labels(static_cast<std::size_t>(jmax + 1));
  for (int j = 1; j <= jmax; ++j) {
    labels[static_cast<std::size_t>(j)] = Grid<std::uint8_t>(pyramid.n1(j), pyramid.n2(j), std::uint8_t{0}, pyramid.domain());
  }
  for (int j = 1; j <= jmax; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const auto& parents = pyramid.scale(j).parent;
    auto& lab = labels[ju].cells();
    for (std::size_t i = 0; i < lab.size(); ++i) {
      const bool parent_kept = j == 1 || labels[ju - 1].cells()[static_cast<std::size_t>(parents[i])] == 1;
      lab[i] = (parent_kept && keep[ju][i]) ? 1 : 0;
    }
  }
  return labels;
}

double cpress_cost(const TraceField& field, const LabelField& labels, double lambda) {
  double cost = 0.0;
  for (std::size_t j = 1; j < field.traces.size(); ++j) {
    const auto& tr = field.traces[j].cells();
    const auto& lab = labels[j].cells();
    for (std::size_t i = 0; i < tr.size(); ++i) cost += lab[i] ? lambda * lambda : tr[i] * tr[i];
  }
  return cost;
}

bool is_rooted(const LabelField& labels, const RefinementPyramid& pyramid) {
  for (int j = 2; j <= pyramid.max_scale(); ++j) {
    const auto& parents = pyramid.scale(j).parent;
    const auto& lab = labels[static_cast<std::size_t>(j)].cells();
    for (std::size_t i = 0; i < lab.size(); ++i) {
      if (lab[i] && !labels[static_cast<std::size_t>(j - 1)].cells()[static_cast<std::size_t>(parents[i])]) return false;
    }
  }
  return true;
}

WaveletDecomposition apply_labels(const WaveletDecomposition& decomp, const LabelField& labels) {
  WaveletDecomposition out = decomp;
  const int jmax = decomp.max_scale();
  if (static_cast<int>(labels.size()) != jmax + 1) throw std::invalid_argument("label field does not match the decomposition");
  for (int j = 1; j <= jmax; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const auto& lab = labels[ju];
    if (lab.n1() != decomp.pyramid.n1(j) || lab.n2() != decomp.pyramid.n2(j)) {
      throw std::invalid_argument("label grid has the wrong shape");
    }
    const HermitianMatrix zero = HermitianMatrix::zero(decomp.dim());
    for (std::size_t i = 0; i < lab.size(); ++i) {
      if (lab.cells()[i]) continue;
      out.coeffs[ju].cells()[i] = zero;
      if (out.has_whitened()) out.whitened[ju].cells()[i] = zero;
    }
  }
  return out;
}

WaveletDecomposition linear_threshold(const WaveletDecomposition& decomp, int j0) {
  if (j0 < 1) throw std::invalid_argument("threshold scale must be at least 1");
  WaveletDecomposition out = decomp;
  const HermitianMatrix zero = HermitianMatrix::zero(decomp.dim());
  for (int j = j0; j <= decomp.max_scale(); ++j) {
    const auto ju = static_cast<std::size_t>(j);
    for (auto& h : out.coeffs[ju].cells()) h = zero;
    if (out.has_whitened()) {
      for (auto& h : out.whitened[ju].cells()) h = zero;
    }
  }
  return out;
}

double linear_threshold_scale(int j1, int j2, const Order& order) {
  validate_order(order);
  const double log2n = j1 + j2;
  const double gap = std::abs(j1 - j2);
  return (log2n + gap * (1.0 + 2.0 * std::max(order.n1, order.n2))) / (2.0 + 2.0 * std::min(order.n1, order.n2));
}

int linear_threshold_scale_ceil(int j1, int j2, const Order& order) {
  return std::max(1, static_cast<int>(std::ceil(linear_threshold_scale(j1, j2, order))));
}

TraceField truncate_scales(const TraceField& field, int max_scale) {
  TraceField out = field;
  for (int j = std::max(1, max_scale + 1); j <= field.max_scale(); ++j) {
    for (double& x : out.traces[static_cast<std::size_t>(j)].cells()) x = 0.0;
  }
  return out;
}

}  // namespace hpdwav
