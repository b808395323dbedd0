#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hpdwav/estimators.hpp"

namespace hpdwav {

/// T x d real samples, one row per time point.
struct MultivariateSeries {
  Eigen::MatrixXd samples;
  double rate = 1.0;

  int length() const { return static_cast<int>(samples.rows()); }
  int channels() const { return static_cast<int>(samples.cols()); }
};

/// First L discrete prolate spheroidal sequences of length T with
/// time-bandwidth n_w, one per row, unit energy. Even-indexed tapers have a
/// positive sum and odd-indexed tapers a positive first half.
Eigen::MatrixXd dpss_tapers(int length, double nw, int count);

struct PeriodogramCell {
  HpdMatrix value;
  bool ridged = false;
};

/// (1/(2πL)) Σ_l J_l(ω) J_l(ω)*, J_l(ω) = Σ_t h_l(t) Y_t e^{-iωt}, by direct
/// summation. Rank-deficient results get ε·Id added, ε = 1e-10·max(Tr/d, 1).
std::vector<PeriodogramCell> multitaper_periodogram(const Eigen::MatrixXd& segment, const Eigen::MatrixXd& tapers,
                                                    const std::vector<double>& freqs);

/// The same estimate on ω_k = πk/n_freq (k < n_freq) computed with real FFTs.
std::vector<PeriodogramCell> multitaper_periodogram_fft(const Eigen::MatrixXd& segment, const Eigen::MatrixXd& tapers,
                                                        int n_freq);

/// ω_k = πk/n for k = 0..n-1.
std::vector<double> periodogram_frequencies(int n);

struct SpectralConfig {
  int segments = 128;         // L_t
  int segment_length = 256;   // T_t
  int frequencies = 128;      // L_f
  double nw = 3.0;
  int tapers = 0;             // L; 0 means d
  Order order{3, 3};
  std::optional<double> lambda;  // unset: universal penalty
  std::optional<int> max_scale = 6;
};

/// Time-varying periodogram: k1 indexes time segments, k2 frequencies.
struct PeriodogramGrid {
  HpdGrid grid;
  int tapers = 0;
  int segment_length = 0;
  bool bias_corrected = false;
  Grid<std::uint8_t> ridged;
};

PeriodogramGrid segmented_periodogram(const MultivariateSeries& series, const SpectralConfig& config);

/// Scales by c(d, L) once; a corrected grid is returned unchanged.
PeriodogramGrid bias_correct(const PeriodogramGrid& grid);

using TransferFunction = std::function<ComplexMatrix(double omega, double u)>;

struct CramerOptions {
  int mesh_factor = 4;  // frequency mesh of mesh_factor * T points on [-π, π)
  int knots = 33;       // rescaled-time knots at which A is evaluated
};

/// Y_t = Re Σ_m A(ω_m, t/T) e^{itω_m} ξ_m sqrt(Δω), ξ_m with iid N(0, 1)
/// real and imaginary parts. A is interpolated linearly in u between knots.
MultivariateSeries simulate_locally_stationary(const TransferFunction& a, int d, int length, std::uint64_t seed,
                                               const CramerOptions& options = {});

/// Y_t = Φ(t/T) Y_{t-1} + Σ^{1/2} ε_t with the coefficients of the tvar surface.
MultivariateSeries simulate_tvar(int length, int d, std::uint64_t seed);

/// f(ω_k2, u_k1) on the periodogram grid: u at segment centres, ω_k = πk/L_f.
HpdGrid tvar_spectrum_grid(int segments, int frequencies, int d);

struct SpectralEstimate {
  HpdGrid estimate;
  PeriodogramGrid periodogram;  // bias corrected
  DenoiseResult denoise;
};

/// Wavelet estimate of an already computed, bias-corrected periodogram grid.
SpectralEstimate estimate_from_periodogram(const PeriodogramGrid& corrected, const SpectralConfig& config, int d);

/// Periodogram, bias correction, forward transform, semiparametric
/// homogenization, tree pruning at the universal penalty, inverse transform.
SpectralEstimate estimate_tv_spectrum(const MultivariateSeries& series, const SpectralConfig& config);

/// |f_xy| / sqrt(f_xx f_yy).
double coherence(const HpdMatrix& f, int x, int y);

}  // namespace hpdwav
