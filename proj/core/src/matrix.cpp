#include "hpdwav/matrix.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace hpdwav {

ComplexMatrix symmetrize(const ComplexMatrix& m) {
  ComplexMatrix out = 0.5 * (m + m.adjoint());
  for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, i) = Complex(out(i, i).real(), 0.0);
  return out;
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

void require_square(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("matrix must be square and non-empty");
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  require_square(m);
  m_ = symmetrize(m);
}

HermitianMatrix HermitianMatrix::checked(const ComplexMatrix& m, double tolerance) {
  require_square(m);
  const double defect = hermitian_defect(m);
  if (defect > tolerance) {
    throw std::invalid_argument("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  return HermitianMatrix(m);
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim), NoCheck{});
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim), NoCheck{});
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> entries) {
  const int d = static_cast<int>(entries.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = entries[i];
  return HermitianMatrix(std::move(m), NoCheck{});
}

double HermitianMatrix::trace() const { return m_.diagonal().real().sum(); }

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(ComplexMatrix(m_ + o.m_), NoCheck{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(ComplexMatrix(m_ - o.m_), NoCheck{});
}

HermitianMatrix HermitianMatrix::operator-() const { return HermitianMatrix(ComplexMatrix(-m_), NoCheck{}); }

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(ComplexMatrix(m_ * s), NoCheck{});
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double frobenius_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  // Tr(ab) = sum_ij a_ij b_ji = sum_ij a_ij conj(b_ij) for Hermitian b.
  return (a.matrix().array() * b.matrix().array().conjugate()).sum().real();
}

double pd_tolerance(double largest_eigenvalue) {
  return 1e-12 * std::max(std::abs(largest_eigenvalue), 1.0);
}

HpdMatrix::HpdMatrix(const ComplexMatrix& m) {
  require_square(m);
  ComplexMatrix s = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > pd_tolerance(hi))) {
    throw NotPositiveDefinite("matrix is not positive definite (smallest eigenvalue " +
                              std::to_string(lo) + ")");
  }
  m_ = std::move(s);
}

HpdMatrix HpdMatrix::identity(int dim) { return HpdMatrix(ComplexMatrix::Identity(dim, dim), NoCheck{}); }

HpdMatrix HpdMatrix::scaled_identity(int dim, double s) {
  if (!(s > 0)) throw NotPositiveDefinite("scale must be positive");
  return HpdMatrix(ComplexMatrix(ComplexMatrix::Identity(dim, dim) * s), NoCheck{});
}

HpdMatrix HpdMatrix::diagonal(std::span<const double> entries) {
  const int d = static_cast<int>(entries.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = entries[i];
  return HpdMatrix(m);
}

HpdMatrix HpdMatrix::trusted(const ComplexMatrix& m) { return HpdMatrix(symmetrize(m), NoCheck{}); }

double HpdMatrix::trace() const { return m_.diagonal().real().sum(); }

HermitianMatrix HpdMatrix::as_hermitian() const { return HermitianMatrix(m_); }

TangentVector::TangentVector(HpdMatrix base_point, HermitianMatrix v)
    : base(std::move(base_point)), vector(std::move(v)) {
  if (base.dim() != vector.dim()) throw std::invalid_argument("tangent vector dimension mismatch");
}

}  // namespace hpdwav
