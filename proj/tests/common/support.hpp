#pragma once

#include <random>

#include <hpdwav/grid.hpp>
#include <hpdwav/manifold.hpp>

namespace hpdwav::testing {

inline ComplexMatrix random_complex(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

inline HermitianMatrix random_hermitian(int d, std::mt19937_64& rng, double scale = 1.0) {
  return HermitianMatrix(random_complex(d, rng, scale));
}

/// Exp of a random Hermitian matrix: well conditioned for moderate scales.
inline HpdMatrix random_hpd(int d, std::mt19937_64& rng, double scale = 0.5) {
  return matrix_exp(random_hermitian(d, rng, scale));
}

/// Identity plus a random perturbation, kept away from singularity.
inline ComplexMatrix random_invertible(int d, std::mt19937_64& rng) {
  ComplexMatrix a = random_complex(d, rng, 0.4);
  a += ComplexMatrix::Identity(d, d);
  return a;
}

inline HpdGrid random_grid(int n1, int n2, int d, std::mt19937_64& rng, double scale = 0.5) {
  HpdGrid g(n1, n2);
  for (auto& c : g.cells()) c = random_hpd(d, rng, scale);
  return g;
}

inline double rel_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

inline double max_cell_diff(const HpdGrid& a, const HpdGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, rel_diff(a.cells()[i].matrix(), b.cells()[i].matrix()));
  return m;
}

inline HpdMatrix diag_hpd(std::initializer_list<double> v) {
  std::vector<double> e(v);
  return HpdMatrix::diagonal(e);
}

}  // namespace hpdwav::testing
