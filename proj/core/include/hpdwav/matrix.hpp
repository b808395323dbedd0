#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hpdwav {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Raised when a matrix fails the positive-definiteness check of HpdMatrix.
class NotPositiveDefinite : public std::invalid_argument {
 public:
  explicit NotPositiveDefinite(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an iterative numerical routine fails.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Returns (m + m*) / 2.
ComplexMatrix symmetrize(const ComplexMatrix& m);

/// Largest absolute deviation |m(i,j) - conj(m(j,i))|.
double hermitian_defect(const ComplexMatrix& m);

/// A d x d complex Hermitian matrix. Tangent vectors and wavelet
/// coefficients live here. Construction always re-symmetrizes.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);

  /// Rejects inputs whose Hermitian defect exceeds `tolerance` (absolute).
  static HermitianMatrix checked(const ComplexMatrix& m, double tolerance);
  static HermitianMatrix zero(int dim);
  static HermitianMatrix identity(int dim);
  static HermitianMatrix diagonal(std::span<const double> entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const;
  double frobenius_norm() const { return m_.norm(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator-() const;
  HermitianMatrix operator*(double s) const;
  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  bool operator==(const HermitianMatrix& o) const { return m_ == o.m_; }

 private:
  struct NoCheck {};
  HermitianMatrix(ComplexMatrix m, NoCheck) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& h) { return h * s; }

/// Frobenius inner product Tr(a b) of two Hermitian matrices.
double frobenius_inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// A Hermitian positive definite matrix: a point on the manifold.
///
/// The public constructor symmetrizes and rejects matrices whose smallest
/// eigenvalue is at or below pd_tolerance(m) = 1e-12 * max(|largest eigenvalue|, 1).
class HpdMatrix {
 public:
  HpdMatrix() = default;
  explicit HpdMatrix(const ComplexMatrix& m);

  static HpdMatrix identity(int dim);
  static HpdMatrix diagonal(std::span<const double> entries);
  static HpdMatrix scaled_identity(int dim, double s);

  /// Symmetrizes without the eigenvalue check. For results that are positive
  /// definite by construction (exponentials, congruences of HPD matrices).
  static HpdMatrix trusted(const ComplexMatrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }
  double frobenius_norm() const { return m_.norm(); }
  double trace() const;

  HermitianMatrix as_hermitian() const;

  bool operator==(const HpdMatrix& o) const { return m_ == o.m_; }

 private:
  struct NoCheck {};
  HpdMatrix(ComplexMatrix m, NoCheck) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Positive-definiteness threshold used by the HpdMatrix constructor.
double pd_tolerance(double largest_eigenvalue);

/// A tangent vector `vector` in the tangent space at `base`.
struct TangentVector {
  TangentVector(HpdMatrix base_point, HermitianMatrix v);

  HpdMatrix base;
  HermitianMatrix vector;
};

}  // namespace hpdwav
