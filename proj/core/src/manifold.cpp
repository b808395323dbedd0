#include "hpdwav/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace hpdwav {

namespace {

template <class M, class F>
ComplexMatrix spectral_apply_impl(const ComplexMatrix& h, F f) {
  Eigen::SelfAdjointEigenSolver<M> es{M(h)};
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  const auto mapped = es.eigenvalues().unaryExpr(f).eval();
  if (!mapped.allFinite()) throw NumericalError("matrix function is not finite");
  const M& u = es.eigenvectors();
  return symmetrize(ComplexMatrix(u * mapped.asDiagonal() * u.adjoint()));
}

// U f(Λ) U* for Hermitian h, re-symmetrized.
template <class F>
ComplexMatrix spectral_apply(const ComplexMatrix& h, F f) {
  if (h.rows() == 1) {
    ComplexMatrix out(1, 1);
    out(0, 0) = f(h(0, 0).real());
    return out;
  }
  if (h.rows() == 3) return spectral_apply_impl<Eigen::Matrix3cd>(h, f);
  if (h.rows() <= 4) {
    return spectral_apply_impl<Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>>(h, f);
  }
  return spectral_apply_impl<ComplexMatrix>(h, f);
}

Eigen::VectorXd eigenvalues_of(const ComplexMatrix& h) {
  if (h.rows() == 1) return Eigen::VectorXd::Constant(1, h(0, 0).real());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
  return es.eigenvalues();
}

// Congruence by a Cholesky factor p = L L*. Congruence invariance of the
// metric makes L interchangeable with the Hermitian square root wherever the
// result is mapped back through the same factor.
class Whitener {
 public:
  explicit Whitener(const HpdMatrix& p) {
    Eigen::LLT<ComplexMatrix> llt(p.matrix());
    if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization failed");
    l_ = llt.matrixL();
    linv_ = llt.matrixL().solve(ComplexMatrix::Identity(p.dim(), p.dim()));
  }

  // L^{-1} x L^{-*}
  ComplexMatrix whiten(const ComplexMatrix& x) const { return symmetrize(linv_ * x * linv_.adjoint()); }

  // L h L*
  ComplexMatrix unwhiten(const ComplexMatrix& h) const { return symmetrize(l_ * h * l_.adjoint()); }

  const ComplexMatrix& inverse_factor() const { return linv_; }

 private:
  ComplexMatrix l_;
  ComplexMatrix linv_;
};

ComplexMatrix log_of(const ComplexMatrix& h) {
  return spectral_apply(h, [](double x) { return std::log(x); });
}

ComplexMatrix exp_of(const ComplexMatrix& h) {
  return spectral_apply(h, [](double x) { return std::exp(x); });
}

void require_same_dim(int a, int b) {
  if (a != b) throw std::invalid_argument("matrix dimensions disagree");
}

}  // namespace

HpdMatrix matrix_exp(const HermitianMatrix& h) { return HpdMatrix::trusted(exp_of(h.matrix())); }

HermitianMatrix matrix_log(const HpdMatrix& p) { return HermitianMatrix(log_of(p.matrix())); }

HpdMatrix matrix_sqrt(const HpdMatrix& p) {
  return HpdMatrix::trusted(spectral_apply(p.matrix(), [](double x) { return std::sqrt(x); }));
}

HpdMatrix matrix_invsqrt(const HpdMatrix& p) {
  return HpdMatrix::trusted(spectral_apply(p.matrix(), [](double x) { return 1.0 / std::sqrt(x); }));
}

HpdMatrix matrix_power(const HpdMatrix& p, double t) {
  return HpdMatrix::trusted(spectral_apply(p.matrix(), [t](double x) { return std::pow(x, t); }));
}

HermitianMatrix congruence(const ComplexMatrix& a, const HermitianMatrix& x) {
  require_same_dim(static_cast<int>(a.rows()), x.dim());
  return HermitianMatrix(ComplexMatrix(a.adjoint() * x.matrix() * a));
}

HpdMatrix congruence(const ComplexMatrix& a, const HpdMatrix& x) {
  require_same_dim(static_cast<int>(a.rows()), x.dim());
  return HpdMatrix(ComplexMatrix(a.adjoint() * x.matrix() * a));
}

double metric_inner(const HpdMatrix& p, const HermitianMatrix& h1, const HermitianMatrix& h2) {
  require_same_dim(p.dim(), h1.dim());
  require_same_dim(p.dim(), h2.dim());
  const Whitener w(p);
  return frobenius_inner(HermitianMatrix(w.whiten(h1.matrix())), HermitianMatrix(w.whiten(h2.matrix())));
}

double metric_norm(const HpdMatrix& p, const HermitianMatrix& h) {
  return std::sqrt(std::max(0.0, metric_inner(p, h, h)));
}

double riemann_distance(const HpdMatrix& p1, const HpdMatrix& p2) {
  require_same_dim(p1.dim(), p2.dim());
  const Eigen::VectorXd ev = eigenvalues_of(Whitener(p1).whiten(p2.matrix()));
  double sum = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double l = std::log(ev(i));
    sum += l * l;
  }
  return std::sqrt(sum);
}

HpdMatrix geodesic(const HpdMatrix& p1, const HpdMatrix& p2, double t) {
  require_same_dim(p1.dim(), p2.dim());
  if (t == 0.0) return p1;
  if (t == 1.0) return p2;
  const Whitener w(p1);
  const ComplexMatrix q = w.whiten(p2.matrix());
  return HpdMatrix::trusted(w.unwhiten(spectral_apply(q, [t](double x) { return std::pow(x, t); })));
}

HpdMatrix exp_map(const HpdMatrix& p, const HermitianMatrix& h) {
  require_same_dim(p.dim(), h.dim());
  const Whitener w(p);
  return HpdMatrix::trusted(w.unwhiten(exp_of(w.whiten(h.matrix()))));
}

HermitianMatrix log_map(const HpdMatrix& p, const HpdMatrix& q) {
  require_same_dim(p.dim(), q.dim());
  const Whitener w(p);
  return HermitianMatrix(w.unwhiten(log_of(w.whiten(q.matrix()))));
}

HermitianMatrix whitening_transport(const HpdMatrix& p, const HermitianMatrix& w) {
  require_same_dim(p.dim(), w.dim());
  return congruence(matrix_invsqrt(p).matrix(), w);
}

HermitianMatrix parallel_transport(const HpdMatrix& p, const HpdMatrix& q, const HermitianMatrix& h) {
  require_same_dim(p.dim(), q.dim());
  require_same_dim(p.dim(), h.dim());
  const Whitener w(p);
  const ComplexMatrix s = spectral_apply(w.whiten(q.matrix()), [](double x) { return std::sqrt(x); });
  return HermitianMatrix(w.unwhiten(s * w.whiten(h.matrix()) * s));
}

KarcherNotConverged::KarcherNotConverged(HpdMatrix last, double residual, int iterations)
    : NumericalError("Karcher mean did not converge after " + std::to_string(iterations) +
                     " iterations (residual " + std::to_string(residual) + ")"),
      last_(std::move(last)),
      residual_(residual),
      iterations_(iterations) {}

namespace {

struct Gradient {
  ComplexMatrix whitened;  // Σ w_i Log(L^{-1} X_i L^{-*})
  double residual = 0.0;   // Riemannian norm of the gradient, ‖whitened‖_F
  double objective = 0.0;  // ½ Σ w_i δ(mu, X_i)²
  double curvature = 0.0;  // Σ |w_i| (r_i/2) coth(r_i/2), r_i the log-eigenvalue spread
};

// Largest Hessian eigenvalue of ½δ(·, X)² when the whitened X has
// log-eigenvalue spread r.
double hessian_bound(double r) { return r < 1e-8 ? 1.0 : 0.5 * r / std::tanh(0.5 * r); }

// Stack-allocated storage for the common small dimensions.
using SmallMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

template <class M>
Gradient karcher_gradient_impl(const Whitener& w, std::span<const HpdMatrix> points,
                               std::span<const double> weights) {
  using Real = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, M::MaxRowsAtCompileTime, 1>;
  const Eigen::Index d = points.front().dim();
  const M li = w.inverse_factor();
  M s = M::Zero(d, d);
  M x(d, d);
  double f = 0.0;
  double curv = 0.0;
  Eigen::SelfAdjointEigenSolver<M> es(d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] == 0.0) continue;
    x.noalias() = li * points[i].matrix() * li.adjoint();
    es.compute(0.5 * (x + x.adjoint()));
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
    const Real logs = es.eigenvalues().array().log();
    const M& u = es.eigenvectors();
    s.noalias() += weights[i] * (u * logs.asDiagonal() * u.adjoint());
    f += 0.5 * weights[i] * logs.squaredNorm();
    curv += std::abs(weights[i]) * hessian_bound(logs.maxCoeff() - logs.minCoeff());
  }
  ComplexMatrix out = symmetrize(ComplexMatrix(s));
  const double r = out.norm();
  return {std::move(out), r, f, curv};
}

Gradient karcher_gradient(const Whitener& w, std::span<const HpdMatrix> points,
                          std::span<const double> weights) {
  if (points.front().dim() == 3) return karcher_gradient_impl<Eigen::Matrix3cd>(w, points, weights);
  if (points.front().dim() <= 4) return karcher_gradient_impl<SmallMatrix>(w, points, weights);
  return karcher_gradient_impl<ComplexMatrix>(w, points, weights);
}

// Newton step for signed weights. At the current point the whitened data
// are Y_i; moving to L exp(V) L* turns the whitened gradient into
// G(V) = Σ w_i log(exp(-V/2) Y_i exp(-V/2)). The Jacobian of G at 0 is taken
// by central differences over an orthonormal Hermitian basis, and the step is
// halved until ‖G‖ drops. Returns the accepted V, or an empty matrix.
ComplexMatrix newton_direction(const Whitener& w, std::span<const HpdMatrix> points, std::span<const double> weights,
                               const ComplexMatrix& g0, int max_halvings) {
  const Eigen::Index d = g0.rows();
  std::vector<ComplexMatrix> ys;
  std::vector<double> ws;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] == 0.0) continue;
    ys.push_back(w.whiten(points[i].matrix()));
    ws.push_back(weights[i]);
  }
  auto g_at = [&](const ComplexMatrix& v) {
    const ComplexMatrix half = spectral_apply(v, [](double x) { return std::exp(-0.5 * x); });
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < ys.size(); ++i) acc += ws[i] * log_of(symmetrize(half * ys[i] * half));
    return symmetrize(acc);
  };
  std::vector<ComplexMatrix> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(i, i) = 1.0;
    basis.push_back(e);
    for (Eigen::Index j = i + 1; j < d; ++j) {
      ComplexMatrix a = ComplexMatrix::Zero(d, d), b = ComplexMatrix::Zero(d, d);
      a(i, j) = a(j, i) = r;
      b(i, j) = Complex(0.0, r);
      b(j, i) = Complex(0.0, -r);
      basis.push_back(a);
      basis.push_back(b);
    }
  }
  const auto n = static_cast<Eigen::Index>(basis.size());
  auto coords = [&](const ComplexMatrix& h) {
    Eigen::VectorXd c(n);
    for (Eigen::Index k = 0; k < n; ++k) c(k) = (basis[static_cast<std::size_t>(k)].adjoint() * h).trace().real();
    return c;
  };
  const double h = 1e-5;
  Eigen::MatrixXd jac(n, n);
  try {
    for (Eigen::Index k = 0; k < n; ++k) {
      const ComplexMatrix& e = basis[static_cast<std::size_t>(k)];
      jac.col(k) = (coords(g_at(h * e)) - coords(g_at(-h * e))) / (2.0 * h);
    }
  } catch (const NumericalError&) {
    return {};
  }
  const Eigen::VectorXd delta = jac.fullPivLu().solve(-coords(g0));
  if (!delta.allFinite()) return {};
  ComplexMatrix v = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < n; ++k) v += delta(k) * basis[static_cast<std::size_t>(k)];
  const double r0 = g0.norm();
  for (int halvings = 0; halvings <= max_halvings; ++halvings) {
    try {
      if (g_at(v).norm() < r0) return v;
    } catch (const NumericalError&) {
    }
    v *= 0.5;
  }
  return {};
}

void validate_mean_inputs(std::span<const HpdMatrix> points, std::span<const double> weights) {
  if (points.empty()) throw std::invalid_argument("karcher_mean needs at least one point");
  if (points.size() != weights.size()) throw std::invalid_argument("points and weights differ in length");
  const int d = points.front().dim();
  for (const auto& p : points) require_same_dim(d, p.dim());
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!std::isfinite(total) || std::abs(total - 1.0) > 1e-8) {
    throw std::invalid_argument("karcher_mean weights must sum to 1");
  }
}

// exp(Σ w_i log X_i), the starting point for nonnegative weights.
HpdMatrix log_euclidean_mean(std::span<const HpdMatrix> points, std::span<const double> weights) {
  const Eigen::Index d = points.front().dim();
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] != 0.0) s += weights[i] * log_of(points[i].matrix());
  }
  return HpdMatrix::trusted(exp_of(s));
}

}  // namespace

double karcher_residual(const HpdMatrix& mu, std::span<const HpdMatrix> points,
                        std::span<const double> weights) {
  validate_mean_inputs(points, weights);
  const Whitener w(mu);
  return w.unwhiten(karcher_gradient(w, points, weights).whitened).norm();
}

HpdMatrix karcher_mean(std::span<const HpdMatrix> points, std::span<const double> weights,
                       const KarcherOptions& options) {
  validate_mean_inputs(points, weights);
  if (points.size() == 1) return points.front();
  if (std::all_of(points.begin() + 1, points.end(), [&](const HpdMatrix& p) { return p == points.front(); })) {
    return points.front();
  }
  if (points.front().dim() == 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) acc += weights[i] * std::log(points[i](0, 0).real());
    ComplexMatrix m(1, 1);
    m(0, 0) = std::exp(acc);
    return HpdMatrix::trusted(m);
  }

  const double tol = options.tolerance;
  const bool convex = std::all_of(weights.begin(), weights.end(), [](double x) { return x >= 0.0; });
  HpdMatrix mu = convex ? log_euclidean_mean(points, weights)
                        : points[static_cast<std::size_t>(std::max_element(weights.begin(), weights.end()) -
                                                          weights.begin())];

  auto whitener = std::make_unique<Whitener>(mu);
  Gradient grad = karcher_gradient(*whitener, points, weights);
  double previous_residual = grad.residual;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (grad.residual <= tol) return mu;
    // Signed weights with large cancelling terms make the gradient iteration
    // crawl; once it stops halving the residual, switch to Newton steps.
    if (!convex && iter > 0 && grad.residual > 0.5 * previous_residual) {
      const ComplexMatrix v = newton_direction(*whitener, points, weights, grad.whitened, options.max_step_halvings);
      if (v.size() != 0) {
        previous_residual = grad.residual;
        mu = HpdMatrix::trusted(whitener->unwhiten(exp_of(v)));
        whitener = std::make_unique<Whitener>(mu);
        grad = karcher_gradient(*whitener, points, weights);
        continue;
      }
    }
    previous_residual = grad.residual;
    // With nonnegative weights the objective is geodesically convex and the
    // step is backtracked until it decreases (Armijo); with signed weights the
    // mean is only a critical point and the gradient norm is tracked instead.
    // For nonnegative weights the Hessian lies between Id and curvature * Id,
    // so 2 / (1 + curvature) is the best fixed step for that bound.
    double step = convex ? options.step * 2.0 / (1.0 + grad.curvature) : options.step;
    for (int halvings = 0;; ++halvings) {
      HpdMatrix candidate;
      std::unique_ptr<Whitener> cand_whitener;
      Gradient cand_grad;
      try {
        candidate = HpdMatrix::trusted(whitener->unwhiten(exp_of(step * grad.whitened)));
        cand_whitener = std::make_unique<Whitener>(candidate);
        cand_grad = karcher_gradient(*cand_whitener, points, weights);
      } catch (const NumericalError&) {
        // Overflowing step: shrink it like any other rejected step.
        if (halvings >= options.max_step_halvings) throw KarcherNotConverged(mu, grad.residual, iter);
        step *= 0.5;
        continue;
      }
      // Near the optimum the objective stops resolving the decrease.
      const double decrease = step * grad.residual * grad.residual;
      const bool use_objective = convex && decrease > 1e-10 * std::max(grad.objective, 1.0);
      const bool worse = use_objective ? cand_grad.objective > grad.objective - 1e-4 * decrease
                                       : cand_grad.residual > grad.residual;
      if (worse && halvings < options.max_step_halvings) {
        step *= 0.5;
        continue;
      }
      mu = std::move(candidate);
      whitener = std::move(cand_whitener);
      grad = std::move(cand_grad);
      break;
    }
  }
  if (grad.residual <= tol) return mu;
  throw KarcherNotConverged(mu, grad.residual, options.max_iterations);
}

HpdMatrix karcher_mean(std::span<const HpdMatrix> points, const KarcherOptions& options) {
  std::vector<double> w(points.size(), points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size()));
  return karcher_mean(points, w, options);
}

HpdMatrix complete_mean(const HpdMatrix& p, std::span<const HpdMatrix> others) {
  const Whitener w(p);
  ComplexMatrix s = ComplexMatrix::Zero(p.dim(), p.dim());
  for (const auto& q : others) {
    require_same_dim(p.dim(), q.dim());
    s += log_of(w.whiten(q.matrix()));
  }
  return HpdMatrix::trusted(w.unwhiten(exp_of(-s)));
}

double log_det(const HpdMatrix& p) {
  Eigen::LLT<ComplexMatrix> llt(p.matrix());
  if (llt.info() != Eigen::Success) throw NumericalError("Cholesky factorization failed");
  const ComplexMatrix& l = llt.matrixLLT();
  double s = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(l(i, i).real());
  return 2.0 * s;
}

}  // namespace hpdwav
