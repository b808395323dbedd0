#include "hpdwav/simulate.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "hpdwav/manifold.hpp"
#include "hpdwav/special.hpp"

namespace hpdwav {

std::vector<HermitianMatrix> hermitian_basis(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  std::vector<HermitianMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  const double r = 1.0 / std::numbers::sqrt2;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    m(i, i) = 1.0;
    basis.emplace_back(m);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      ComplexMatrix s = ComplexMatrix::Zero(d, d);
      s(i, j) = r;
      s(j, i) = r;
      basis.emplace_back(s);
      ComplexMatrix a = ComplexMatrix::Zero(d, d);
      a(i, j) = Complex(0.0, r);
      a(j, i) = Complex(0.0, -r);
      basis.emplace_back(a);
    }
  }
  return basis;
}

namespace {

HermitianMatrix basis_combination(const std::vector<HermitianMatrix>& basis, const std::vector<double>& z) {
  const int d = basis.front().dim();
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < basis.size(); ++k) m += z[k] * basis[k].matrix();
  return HermitianMatrix(m);
}

}  // namespace

HpdMatrix sample_intrinsic_normal(int d, double sigma2, Rng& rng) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("variance must be non-negative");
  if (sigma2 == 0.0) return HpdMatrix::identity(d);
  const auto basis = hermitian_basis(d);
  std::normal_distribution<double> normal(0.0, std::sqrt(sigma2));
  std::vector<double> z(basis.size());
  for (double& x : z) x = normal(rng);
  return matrix_exp(basis_combination(basis, z));
}

HpdMatrix sample_complex_wishart(int d, int b, Rng& rng) {
  if (d < 1 || b < d) throw std::invalid_argument("Wishart needs 1 <= d <= B");
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  ComplexMatrix l = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    std::gamma_distribution<double> gamma(static_cast<double>(b - i), 1.0);
    l(i, i) = std::sqrt(gamma(rng));
    for (int j = 0; j < i; ++j) l(i, j) = Complex(half(rng), half(rng));
  }
  return HpdMatrix::trusted(l * l.adjoint() / static_cast<double>(b));
}

HpdMatrix sample_rescaled_wishart(int d, int b, Rng& rng) {
  const double c = wishart_bias_factor(d, b);
  return HpdMatrix::trusted(c * sample_complex_wishart(d, b, rng).matrix());
}

HpdMatrix sample_noise(const NoiseSpec& noise, int d, int k1, int k2) {
  Rng rng = cell_rng(noise.seed, static_cast<std::uint64_t>(k1), static_cast<std::uint64_t>(k2));
  switch (noise.kind) {
    case NoiseSpec::Kind::IntrinsicNormal:
      return sample_intrinsic_normal(d, noise.sigma2, rng);
    case NoiseSpec::Kind::RescaledWishart:
      return sample_rescaled_wishart(d, noise.dof, rng);
  }
  throw std::invalid_argument("unknown noise kind");
}

HpdGrid noise_grid(int n1, int n2, int d, const NoiseSpec& noise) {
  HpdGrid out(n1, n2);
  for (int k1 = 0; k1 < n1; ++k1) {
    for (int k2 = 0; k2 < n2; ++k2) out(k1, k2) = sample_noise(noise, d, k1, k2);
  }
  return out;
}

HpdGrid apply_noise(const HpdGrid& target, const NoiseSpec& noise) {
  const int d = grid_dim(target);
  HpdGrid out(target.n1(), target.n2(), target.domain());
  for (int k1 = 0; k1 < target.n1(); ++k1) {
    for (int k2 = 0; k2 < target.n2(); ++k2) {
      const HpdMatrix eps = sample_noise(noise, d, k1, k2);
      const HpdMatrix root = matrix_sqrt(target(k1, k2));
      out(k1, k2) = HpdMatrix::trusted(root.matrix() * eps.matrix() * root.matrix());
    }
  }
  return out;
}

// Fixture constants for the test surfaces. Changing any of them changes the
// canonical surfaces; bump kFixtureVersion when doing so.
namespace fixtures {

constexpr int kFixtureVersion = 1;
constexpr std::uint64_t kRegionSeed = 0x5eed0001ULL;
constexpr double kRegionScale = 0.9;

struct Box {
  double x0, x1, y0, y1;
};
// Later boxes take precedence; region r + 1 for box r, 0 elsewhere.
constexpr Box kBlocks[] = {
    {0.10, 0.45, 0.55, 0.90},
    {0.55, 0.90, 0.10, 0.40},
    {0.60, 0.85, 0.60, 0.90},
    {0.15, 0.40, 0.10, 0.35},
};

struct Circle {
  double cx, cy, r;
};
constexpr Circle kFace{0.5, 0.5, 0.42};
constexpr Circle kEyes[] = {{0.34, 0.64, 0.08}, {0.66, 0.64, 0.08}};
constexpr double kMouthInner = 0.18, kMouthOuter = 0.27, kMouthTop = 0.43;

struct Bump {
  double cx, cy, width, height;
};
constexpr Bump kBumps[] = {
    {0.20, 0.30, 0.035, 2.2}, {0.45, 0.75, 0.025, 2.6}, {0.70, 0.20, 0.045, 1.8},
    {0.80, 0.65, 0.030, 2.4}, {0.35, 0.50, 0.050, 1.5},
};

constexpr double kTvarScaleMean = 0.75, kTvarScaleSwing = 0.2;

}  // namespace fixtures

namespace {

HermitianMatrix region_generator(int region, int d) {
  const auto basis = hermitian_basis(d);
  Rng rng = cell_rng(fixtures::kRegionSeed, static_cast<std::uint64_t>(region), static_cast<std::uint64_t>(d));
  std::normal_distribution<double> normal(0.0, fixtures::kRegionScale);
  std::vector<double> z(basis.size());
  for (double& x : z) x = normal(rng);
  return basis_combination(basis, z);
}

int blocks_region(double x, double y) {
  int r = 0;
  int i = 1;
  for (const auto& b : fixtures::kBlocks) {
    if (x >= b.x0 && x < b.x1 && y >= b.y0 && y < b.y1) r = i;
    ++i;
  }
  return r;
}

int smiley_region(double x, double y) {
  auto inside = [&](const fixtures::Circle& c) { return std::hypot(x - c.cx, y - c.cy) < c.r; };
  if (!inside(fixtures::kFace)) return 0;
  for (const auto& e : fixtures::kEyes) {
    if (inside(e)) return 2;
  }
  const double rad = std::hypot(x - fixtures::kFace.cx, y - fixtures::kFace.cy);
  if (rad >= fixtures::kMouthInner && rad < fixtures::kMouthOuter && y < fixtures::kMouthTop) return 3;
  return 1;
}

// Real skew-symmetric generator of the rotation in the tvar coefficient.
Eigen::MatrixXd rotation_generator(int d) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      k(i, j) = 1.0 / (1.0 + j - i);
      k(j, i) = -k(i, j);
    }
  }
  return k;
}

HpdGrid region_surface(const SurfaceSpec& spec, int (*region)(double, double), int regions) {
  std::vector<HpdMatrix> values;
  for (int r = 0; r < regions; ++r) values.push_back(matrix_exp(region_generator(r, spec.d)));
  HpdGrid out(spec.n1, spec.n2);
  for (int k1 = 0; k1 < spec.n1; ++k1) {
    for (int k2 = 0; k2 < spec.n2; ++k2) {
      const double x = (k1 + 0.5) / spec.n1;
      const double y = (k2 + 0.5) / spec.n2;
      out(k1, k2) = values[static_cast<std::size_t>(region(x, y))];
    }
  }
  return out;
}

HpdGrid bumps_surface(const SurfaceSpec& spec) {
  const int d = spec.d;
  const HermitianMatrix smooth_a = region_generator(10, d) * 0.6;
  const HermitianMatrix smooth_b = region_generator(11, d) * 0.4;
  std::vector<HermitianMatrix> peak_dirs;
  for (int m = 0; m < static_cast<int>(std::size(fixtures::kBumps)); ++m) {
    // Peaks mostly scale the eigenvalues up: identity plus a small twist.
    peak_dirs.push_back(HermitianMatrix::identity(d) + region_generator(20 + m, d) * 0.25);
  }
  HpdGrid out(spec.n1, spec.n2);
  for (int k1 = 0; k1 < spec.n1; ++k1) {
    for (int k2 = 0; k2 < spec.n2; ++k2) {
      const double x = (k1 + 0.5) / spec.n1;
      const double y = (k2 + 0.5) / spec.n2;
      HermitianMatrix h = smooth_a * std::sin(std::numbers::pi * y) + smooth_b * std::cos(2.0 * std::numbers::pi * x);
      int m = 0;
      for (const auto& b : fixtures::kBumps) {
        const double r2 = ((x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy)) / (b.width * b.width);
        h += peak_dirs[static_cast<std::size_t>(m)] * (b.height * std::exp(-0.5 * r2));
        ++m;
      }
      out(k1, k2) = matrix_exp(h);
    }
  }
  return out;
}

HpdGrid tvar_surface(const SurfaceSpec& spec) {
  HpdGrid out(spec.n1, spec.n2);
  for (int k1 = 0; k1 < spec.n1; ++k1) {
    for (int k2 = 0; k2 < spec.n2; ++k2) {
      const double u = (k1 + 0.5) / spec.n1;
      const double omega = std::numbers::pi * (k2 + 0.5) / spec.n2;
      out(k1, k2) = tvar_spectrum(omega, u, spec.d);
    }
  }
  return out;
}

}  // namespace

int fixture_version() { return fixtures::kFixtureVersion; }

int surface_region_count(const std::string& name) {
  if (name == "blocks") return static_cast<int>(std::size(fixtures::kBlocks)) + 1;
  if (name == "smiley") return 4;
  return 0;
}

HpdGrid test_surface(const SurfaceSpec& spec) {
  if (spec.n1 < 1 || spec.n2 < 1 || spec.d < 1) throw std::invalid_argument("surface size and dimension must be positive");
  HpdGrid g;
  if (spec.name == "blocks") {
    g = region_surface(spec, blocks_region, surface_region_count("blocks"));
  } else if (spec.name == "smiley") {
    g = region_surface(spec, smiley_region, surface_region_count("smiley"));
  } else if (spec.name == "bumps") {
    g = bumps_surface(spec);
  } else if (spec.name == "tvar") {
    g = tvar_surface(spec);
  } else {
    throw std::invalid_argument("unknown test surface '" + spec.name + "'");
  }
  g.set_domain(Rect{0.0, 1.0, 0.0, 1.0});
  return g;
}

Eigen::MatrixXd tvar_coefficient(double u, int d) {
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  Eigen::VectorXd diag(d);
  for (int i = 0; i < d; ++i) diag(i) = d == 1 ? 0.6 : 0.6 - i * (1.0 / (d - 1));
  const double s = fixtures::kTvarScaleMean + fixtures::kTvarScaleSwing * std::sin(2.0 * std::numbers::pi * u);
  const Eigen::MatrixXd rot = (std::numbers::pi * u * rotation_generator(d)).exp();
  return s * rot * diag.asDiagonal() * rot.transpose();
}

Eigen::MatrixXd tvar_innovation(int d) {
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (i != j) sigma(i, j) = 0.4 / (1.0 + std::abs(i - j));
    }
  }
  return sigma;
}

ComplexMatrix tvar_transfer(double omega, double u, int d) {
  const Eigen::MatrixXd phi = tvar_coefficient(u, d);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tvar_innovation(d));
  const Eigen::MatrixXd root = es.operatorSqrt();
  const ComplexMatrix lhs = ComplexMatrix::Identity(d, d) - phi.cast<Complex>() * std::polar(1.0, -omega);
  return lhs.partialPivLu().solve(root.cast<Complex>()) / std::sqrt(2.0 * std::numbers::pi);
}

HpdMatrix tvar_spectrum(double omega, double u, int d) {
  const ComplexMatrix a = tvar_transfer(omega, u, d);
  return HpdMatrix(ComplexMatrix(a * a.adjoint()));
}

}  // namespace hpdwav
