#include "hpdwav/spectral.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include <fftw3.h>

#include <Eigen/Eigenvalues>

#include "hpdwav/simulate.hpp"
#include "hpdwav/special.hpp"

namespace hpdwav {

Eigen::MatrixXd dpss_tapers(int length, double nw, int count) {
  if (length < 8) throw std::invalid_argument("taper length must be at least 8");
  if (!(nw > 0.0)) throw std::invalid_argument("time-bandwidth must be positive");
  if (count < 1 || count > static_cast<int>(std::floor(2.0 * nw))) {
    throw std::invalid_argument("taper count must lie in [1, 2 nw]");
  }
  const double w = nw / length;
  Eigen::VectorXd diag(length);
  Eigen::VectorXd off(length - 1);
  const double c = std::cos(2.0 * std::numbers::pi * w);
  for (int t = 0; t < length; ++t) {
    const double a = (length - 1 - 2.0 * t) / 2.0;
    diag(t) = a * a * c;
  }
  for (int t = 1; t < length; ++t) off(t - 1) = t * (length - t) / 2.0;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericalError("tridiagonal eigensolver failed");

  Eigen::MatrixXd out(count, length);
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v = es.eigenvectors().col(length - 1 - k);
    v /= v.norm();
    double sign_stat = 0.0;
    if (k % 2 == 0) {
      sign_stat = v.sum();
    } else {
      for (int t = 0; t < length; ++t) sign_stat += (length - 1 - 2.0 * t) * v(t);
    }
    if (sign_stat < 0.0) v = -v;
    out.row(k) = v.transpose();
  }
  return out;
}

std::vector<double> periodogram_frequencies(int n) {
  if (n < 1) throw std::invalid_argument("need at least one frequency");
  std::vector<double> f(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) f[static_cast<std::size_t>(k)] = std::numbers::pi * k / n;
  return f;
}

namespace {

PeriodogramCell finish_cell(const ComplexMatrix& acc, int tapers) {
  const int d = static_cast<int>(acc.rows());
  ComplexMatrix m = symmetrize(acc / (2.0 * std::numbers::pi * tapers));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo > pd_tolerance(hi)) return {HpdMatrix(m), false};
  const double tr = m.diagonal().real().sum();
  const double eps = 1e-10 * std::max(tr / d, 1.0);
  m += eps * ComplexMatrix::Identity(d, d);
  return {HpdMatrix(m), true};
}

void check_segment(const Eigen::MatrixXd& segment, const Eigen::MatrixXd& tapers) {
  if (segment.rows() != tapers.cols()) throw std::invalid_argument("taper length does not match the segment");
  if (tapers.rows() < segment.cols()) {
    throw std::invalid_argument("need at least as many tapers as channels for a full-rank periodogram");
  }
}

}  // namespace

std::vector<PeriodogramCell> multitaper_periodogram(const Eigen::MatrixXd& segment, const Eigen::MatrixXd& tapers,
                                                    const std::vector<double>& freqs) {
  check_segment(segment, tapers);
  const int n = static_cast<int>(segment.rows());
  const int d = static_cast<int>(segment.cols());
  const int ntap = static_cast<int>(tapers.rows());
  std::vector<PeriodogramCell> out;
  out.reserve(freqs.size());
  Eigen::VectorXcd phase(n);
  for (double omega : freqs) {
    for (int t = 0; t < n; ++t) phase(t) = std::polar(1.0, -omega * t);
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    for (int l = 0; l < ntap; ++l) {
      Eigen::VectorXcd j = Eigen::VectorXcd::Zero(d);
      for (int t = 0; t < n; ++t) j += (tapers(l, t) * phase(t)) * segment.row(t).transpose().cast<Complex>();
      acc += j * j.adjoint();
    }
    out.push_back(finish_cell(acc, ntap));
  }
  return out;
}

std::vector<PeriodogramCell> multitaper_periodogram_fft(const Eigen::MatrixXd& segment, const Eigen::MatrixXd& tapers,
                                                        int n_freq) {
  check_segment(segment, tapers);
  if (n_freq < 1) throw std::invalid_argument("need at least one frequency");
  const int n = static_cast<int>(segment.rows());
  const int d = static_cast<int>(segment.cols());
  const int ntap = static_cast<int>(tapers.rows());
  // ω_k = 2π (k·m) / N with N = 2·n_freq·m >= n.
  const int m = std::max(1, (n + 2 * n_freq - 1) / (2 * n_freq));
  const int big = 2 * n_freq * m;

  double* in = fftw_alloc_real(static_cast<std::size_t>(big));
  fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(big / 2 + 1));
  fftw_plan plan = fftw_plan_dft_r2c_1d(big, in, spec, FFTW_ESTIMATE);

  // coeffs[l][c][k] = J_l(ω_k) for channel c.
  std::vector<Eigen::MatrixXcd> j(static_cast<std::size_t>(ntap), Eigen::MatrixXcd(d, n_freq));
  for (int l = 0; l < ntap; ++l) {
    for (int c = 0; c < d; ++c) {
      std::fill(in, in + big, 0.0);
      for (int t = 0; t < n; ++t) in[t] = tapers(l, t) * segment(t, c);
      fftw_execute(plan);
      for (int k = 0; k < n_freq; ++k) {
        const auto& z = spec[static_cast<std::size_t>(k) * m];
        j[static_cast<std::size_t>(l)](c, k) = Complex(z[0], z[1]);
      }
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(spec);
  fftw_free(in);

  std::vector<PeriodogramCell> out;
  out.reserve(static_cast<std::size_t>(n_freq));
  for (int k = 0; k < n_freq; ++k) {
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    for (int l = 0; l < ntap; ++l) {
      const Eigen::VectorXcd v = j[static_cast<std::size_t>(l)].col(k);
      acc += v * v.adjoint();
    }
    out.push_back(finish_cell(acc, ntap));
  }
  return out;
}

PeriodogramGrid segmented_periodogram(const MultivariateSeries& series, const SpectralConfig& config) {
  const int d = series.channels();
  const int ntap = config.tapers > 0 ? config.tapers : d;
  if (config.segments < 1 || config.frequencies < 1) throw std::invalid_argument("segment and frequency counts must be positive");
  if (static_cast<long long>(series.length()) < static_cast<long long>(config.segments) * config.segment_length) {
    throw std::invalid_argument("series is shorter than segments x segment length");
  }
  const Eigen::MatrixXd tapers = dpss_tapers(config.segment_length, config.nw, ntap);
  PeriodogramGrid out;
  out.tapers = ntap;
  out.segment_length = config.segment_length;
  out.grid = HpdGrid(config.segments, config.frequencies, Rect{0.0, 1.0, 0.0, 1.0});
  out.ridged = Grid<std::uint8_t>(config.segments, config.frequencies, std::uint8_t{0});
  for (int s = 0; s < config.segments; ++s) {
    const Eigen::MatrixXd seg = series.samples.middleRows(static_cast<Eigen::Index>(s) * config.segment_length,
                                                          config.segment_length);
    const auto cells = multitaper_periodogram_fft(seg, tapers, config.frequencies);
    for (int k = 0; k < config.frequencies; ++k) {
      out.grid(s, k) = cells[static_cast<std::size_t>(k)].value;
      out.ridged(s, k) = cells[static_cast<std::size_t>(k)].ridged ? 1 : 0;
    }
  }
  return out;
}

PeriodogramGrid bias_correct(const PeriodogramGrid& grid) {
  if (grid.bias_corrected) return grid;
  PeriodogramGrid out = grid;
  const double c = wishart_bias_factor(grid_dim(grid.grid), grid.tapers);
  for (auto& p : out.grid.cells()) p = HpdMatrix::trusted(c * p.matrix());
  out.bias_corrected = true;
  return out;
}

MultivariateSeries simulate_locally_stationary(const TransferFunction& a, int d, int length, std::uint64_t seed,
                                               const CramerOptions& options) {
  if (d < 1 || length < 1) throw std::invalid_argument("dimension and length must be positive");
  if (options.mesh_factor < 4 || options.knots < 2) throw std::invalid_argument("mesh factor >= 4 and knots >= 2 required");
  const int mesh = options.mesh_factor * length;
  const double dw = 2.0 * std::numbers::pi / mesh;

  // ξ_m, one d-vector per mesh frequency.
  Eigen::MatrixXcd xi(d, mesh);
  Rng rng = cell_rng(seed, 0x5eC7, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int m = 0; m < mesh; ++m) {
    for (int c = 0; c < d; ++c) {
      const double re = normal(rng);
      xi(c, m) = Complex(re, normal(rng));
    }
  }

  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(mesh));
  fftw_plan plan = fftw_plan_dft_1d(mesh, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);

  // knot_series[k] is the series obtained with A frozen at u_k.
  std::vector<Eigen::MatrixXd> knot_series(static_cast<std::size_t>(options.knots), Eigen::MatrixXd(length, d));
  Eigen::MatrixXcd v(d, mesh);
  for (int k = 0; k < options.knots; ++k) {
    const double u = static_cast<double>(k) / (options.knots - 1);
    for (int m = 0; m < mesh; ++m) {
      const double omega = -std::numbers::pi + m * dw;
      v.col(m) = a(omega, u) * xi.col(m) * std::sqrt(dw);
    }
    for (int c = 0; c < d; ++c) {
      for (int m = 0; m < mesh; ++m) {
        buf[m][0] = v(c, m).real();
        buf[m][1] = v(c, m).imag();
      }
      fftw_execute(plan);
      // e^{itω_m} = e^{-iπt} e^{2πi tm/M}
      for (int t = 0; t < length; ++t) {
        const double sign = (t % 2 == 0) ? 1.0 : -1.0;
        knot_series[static_cast<std::size_t>(k)](t, c) = sign * buf[t][0];
      }
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);

  MultivariateSeries out;
  out.samples.resize(length, d);
  for (int t = 0; t < length; ++t) {
    const double pos = static_cast<double>(t) / length * (options.knots - 1);
    const int lo = std::min(static_cast<int>(pos), options.knots - 2);
    const double frac = pos - lo;
    out.samples.row(t) = (1.0 - frac) * knot_series[static_cast<std::size_t>(lo)].row(t) +
                         frac * knot_series[static_cast<std::size_t>(lo + 1)].row(t);
  }
  return out;
}

MultivariateSeries simulate_tvar(int length, int d, std::uint64_t seed) {
  if (d < 1 || length < 1) throw std::invalid_argument("dimension and length must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tvar_innovation(d));
  const Eigen::MatrixXd root = es.operatorSqrt();
  Rng rng = cell_rng(seed, 0x7FA2, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto innovation = [&]() {
    Eigen::VectorXd e(d);
    for (int c = 0; c < d; ++c) e(c) = normal(rng);
    return Eigen::VectorXd(root * e);
  };
  // Burn in with the coefficient frozen at u = 0.
  const Eigen::MatrixXd phi0 = tvar_coefficient(0.0, d);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
  for (int t = 0; t < 500; ++t) y = phi0 * y + innovation();

  MultivariateSeries out;
  out.samples.resize(length, d);
  for (int t = 0; t < length; ++t) {
    y = tvar_coefficient(static_cast<double>(t) / length, d) * y + innovation();
    out.samples.row(t) = y.transpose();
  }
  return out;
}

HpdGrid tvar_spectrum_grid(int segments, int frequencies, int d) {
  HpdGrid out(segments, frequencies, Rect{0.0, 1.0, 0.0, 1.0});
  const auto freqs = periodogram_frequencies(frequencies);
  for (int s = 0; s < segments; ++s) {
    const double u = (s + 0.5) / segments;
    for (int k = 0; k < frequencies; ++k) out(s, k) = tvar_spectrum(freqs[static_cast<std::size_t>(k)], u, d);
  }
  return out;
}

SpectralEstimate estimate_from_periodogram(const PeriodogramGrid& corrected, const SpectralConfig& config, int d) {
  SpectralEstimate out;
  out.periodogram = bias_correct(corrected);
  DenoiseConfig dc;
  dc.order = config.order;
  dc.lambda = config.lambda;
  dc.max_scale = config.max_scale;
  dc.variance.method = VarianceMethod::Semiparametric;
  dc.variance.trace_variance = wishart_trace_variance(d, out.periodogram.tapers);
  out.denoise = wavelet_denoise(out.periodogram.grid, dc);
  out.estimate = out.denoise.estimate;
  return out;
}

SpectralEstimate estimate_tv_spectrum(const MultivariateSeries& series, const SpectralConfig& config) {
  const PeriodogramGrid raw = segmented_periodogram(series, config);
  return estimate_from_periodogram(bias_correct(raw), config, series.channels());
}

double coherence(const HpdMatrix& f, int x, int y) {
  const double denom = std::sqrt(f(x, x).real() * f(y, y).real());
  return std::min(1.0, std::abs(f(x, y)) / denom);
}

}  // namespace hpdwav
