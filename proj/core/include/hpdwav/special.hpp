#pragma once

namespace hpdwav {

/// ψ(x) for x > 0.
double digamma(double x);
/// ψ'(x) for x > 0.
double trigamma(double x);

/// Var(Tr(Log W)) for a complex Wishart matrix with B degrees of freedom:
/// Σ_{i=1}^{d} ψ'(B - d + i).
double wishart_trace_variance(int d, int b);

/// c(d, B) = exp(log B - (1/d) Σ_{i=1}^{d} ψ(B - d + i)). Multiplying a
/// Wishart(B, Id/B) matrix by c puts its intrinsic mean at the identity.
double wishart_bias_factor(int d, int b);

}  // namespace hpdwav
