#pragma once

#include <span>
#include <vector>

#include "hpdwav/matrix.hpp"

namespace hpdwav {

HpdMatrix matrix_exp(const HermitianMatrix& h);
HermitianMatrix matrix_log(const HpdMatrix& p);
HpdMatrix matrix_sqrt(const HpdMatrix& p);
HpdMatrix matrix_invsqrt(const HpdMatrix& p);
/// p^t through the eigendecomposition; any real t.
HpdMatrix matrix_power(const HpdMatrix& p, double t);

/// a* x a.
HermitianMatrix congruence(const ComplexMatrix& a, const HermitianMatrix& x);
/// a* x a; throws NotPositiveDefinite when a is numerically singular.
HpdMatrix congruence(const ComplexMatrix& a, const HpdMatrix& x);

double metric_inner(const HpdMatrix& p, const HermitianMatrix& h1, const HermitianMatrix& h2);
double metric_norm(const HpdMatrix& p, const HermitianMatrix& h);
double riemann_distance(const HpdMatrix& p1, const HpdMatrix& p2);

/// Point at parameter t on the geodesic from p1 (t=0) to p2 (t=1).
/// Values of t outside [0, 1] extrapolate along the same geodesic.
HpdMatrix geodesic(const HpdMatrix& p1, const HpdMatrix& p2, double t);
HpdMatrix exp_map(const HpdMatrix& p, const HermitianMatrix& h);
HermitianMatrix log_map(const HpdMatrix& p, const HpdMatrix& q);

/// p^{-1/2} w p^{-1/2}: moves a tangent vector at p to the identity.
HermitianMatrix whitening_transport(const HpdMatrix& p, const HermitianMatrix& w);

/// Parallel transport of h from the tangent space at p to the one at q along
/// the geodesic: E h E* with E = (q p^{-1})^{1/2}.
HermitianMatrix parallel_transport(const HpdMatrix& p, const HpdMatrix& q, const HermitianMatrix& h);

struct KarcherOptions {
  double step = 1.0;  // scales the step for nonnegative weights, used as is otherwise
  double tolerance = 1e-10;  // on the Riemannian norm of the gradient
  int max_iterations = 1000;
  int max_step_halvings = 20;
};

/// Thrown when the Karcher iteration exhausts its budget.
class KarcherNotConverged : public NumericalError {
 public:
  KarcherNotConverged(HpdMatrix last, double residual, int iterations);

  const HpdMatrix& last_iterate() const { return last_; }
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  HpdMatrix last_;
  double residual_;
  int iterations_;
};

/// Weighted intrinsic mean by Riemannian gradient descent. Weights may be
/// negative but must sum to one. Nonnegative weights start from the
/// log-Euclidean mean with a curvature-bounded Armijo step; signed weights
/// start from the largest-weight point.
HpdMatrix karcher_mean(std::span<const HpdMatrix> points, std::span<const double> weights,
                       const KarcherOptions& options = {});
/// Equal-weight intrinsic mean.
HpdMatrix karcher_mean(std::span<const HpdMatrix> points, const KarcherOptions& options = {});

/// ‖Σ w_i Log_mu(X_i)‖_F, the stationarity residual at mu.
double karcher_residual(const HpdMatrix& mu, std::span<const HpdMatrix> points,
                        std::span<const double> weights);

/// Exp_p(-Σ Log_p(q_i)): the point that makes p the equal-weight mean of
/// {q_1, ..., q_m, result}.
HpdMatrix complete_mean(const HpdMatrix& p, std::span<const HpdMatrix> others);

/// log det of an HPD matrix.
double log_det(const HpdMatrix& p);

}  // namespace hpdwav
