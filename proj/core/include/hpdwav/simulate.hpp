#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hpdwav/grid.hpp"
#include "hpdwav/random.hpp"

namespace hpdwav {

/// Frobenius-orthonormal basis of the d x d Hermitian matrices: E_ii, then
/// (1_ij + 1_ji)/√2 and i(1_ij - 1_ji)/√2 for each i < j.
std::vector<HermitianMatrix> hermitian_basis(int d);

/// Exp(Σ z_k e_k) with z_k iid N(0, sigma2) over the Hermitian basis.
HpdMatrix sample_intrinsic_normal(int d, double sigma2, Rng& rng);

/// Complex Wishart with B degrees of freedom and scale Id/B (Euclidean mean Id),
/// by the Bartlett decomposition.
HpdMatrix sample_complex_wishart(int d, int b, Rng& rng);

/// c(d, B) times a Wishart(B, Id/B) draw; its intrinsic mean is Id.
HpdMatrix sample_rescaled_wishart(int d, int b, Rng& rng);

struct NoiseSpec {
  enum class Kind { IntrinsicNormal, RescaledWishart };
  Kind kind = Kind::IntrinsicNormal;
  double sigma2 = 0.5;
  int dof = 4;
  std::uint64_t seed = 0;
};

/// Noise matrix for one cell, from the stream keyed by (seed, k1, k2).
HpdMatrix sample_noise(const NoiseSpec& noise, int d, int k1, int k2);

/// X_k = γ_k^{1/2} ε_k γ_k^{1/2} with ε_k iid from `noise`.
HpdGrid apply_noise(const HpdGrid& target, const NoiseSpec& noise);

/// The iid noise matrices themselves, on an n1 x n2 grid.
HpdGrid noise_grid(int n1, int n2, int d, const NoiseSpec& noise);

struct SurfaceSpec {
  std::string name = "tvar";
  int n1 = 64;
  int n2 = 64;
  int d = 3;
};

/// Deterministic target surfaces on [0, 1]^2 sampled at cell centres:
/// "blocks", "smiley", "bumps" and "tvar".
HpdGrid test_surface(const SurfaceSpec& spec);

/// Version tag of the fixture constants behind test_surface.
int fixture_version();

/// Number of distinct region values used by the piecewise-constant surfaces.
int surface_region_count(const std::string& name);

/// Coefficient matrix Φ(u) of the time-varying VAR(1) behind "tvar".
Eigen::MatrixXd tvar_coefficient(double u, int d);
/// Innovation covariance Σ of the time-varying VAR(1).
Eigen::MatrixXd tvar_innovation(int d);
/// Transfer function A(ω, u) = (2π)^{-1/2} (I - Φ(u) e^{-iω})^{-1} Σ^{1/2}.
ComplexMatrix tvar_transfer(double omega, double u, int d);
/// Spectral matrix f(ω, u) = A A*.
HpdMatrix tvar_spectrum(double omega, double u, int d);

}  // namespace hpdwav
