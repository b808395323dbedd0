#include "hpdwav/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <tuple>

namespace hpdwav {

void validate_order(const Order& order) {
  if (order.n1 < 1 || order.n2 < 1 || order.n1 % 2 == 0 || order.n2 % 2 == 0) {
    throw std::invalid_argument("refinement orders must be odd and at least 1");
  }
}

namespace {

struct AxisWindow {
  int start, width, centre;
};

// Exact fraction on 64-bit integers; operations report overflow instead of wrapping.
struct Fraction {
  long long num = 0, den = 1;
};

bool reduce(Fraction& f) {
  if (f.den < 0) {
    f.num = -f.num;
    f.den = -f.den;
  }
  const long long g = std::gcd(f.num, f.den);
  if (g > 1) {
    f.num /= g;
    f.den /= g;
  }
  return f.den != 0;
}

bool multiply(Fraction& a, long long num, long long den) {
  Fraction b{num, den};
  if (!reduce(b)) return false;
  const long long g1 = std::gcd(a.num, b.den), g2 = std::gcd(b.num, a.den);
  const long long d1 = g1 == 0 ? 1 : g1, d2 = g2 == 0 ? 1 : g2;
  long long n = 0, d = 0;
  if (__builtin_mul_overflow(a.num / d1, b.num / d2, &n) || __builtin_mul_overflow(a.den / d2, b.den / d1, &d)) {
    return false;
  }
  a = {n, d};
  return reduce(a);
}

bool add(Fraction& a, const Fraction& b) {
  const long long g = std::gcd(a.den, b.den);
  long long l = 0, x = 0, y = 0, n = 0;
  if (__builtin_mul_overflow(a.den / g, b.den, &l) || __builtin_mul_overflow(a.num, l / a.den, &x) ||
      __builtin_mul_overflow(b.num, l / b.den, &y) || __builtin_add_overflow(x, y, &n)) {
    return false;
  }
  a = {n, l};
  return reduce(a);
}

// Lagrange basis polynomial s on the nodes 0..w, evaluated at a / 2.
bool lagrange_at_half(int w, int s, long long a, Fraction& out) {
  out = {1, 1};
  for (int k = 0; k <= w; ++k) {
    if (k == s) continue;
    if (!multiply(out, a - 2LL * k, 2LL * (s - k))) return false;
  }
  return true;
}

// Weights of the w window cells for the left (half = 0) or right child of
// cell c. The cumulative sums P(s) = Σ_{r<s} m_r sit at nodes s = 0..w and
// the child average is 2 (P(c + (half+1)/2) - P(c + half/2)).
std::optional<std::vector<double>> exact_line_weights(int w, int c, int half) {
  const long long lo = 2LL * c + half, hi = lo + 1;
  std::vector<Fraction> dl(static_cast<std::size_t>(w) + 1);
  for (int s = 0; s <= w; ++s) {
    Fraction a, b;
    if (!lagrange_at_half(w, s, hi, a) || !lagrange_at_half(w, s, lo, b)) return std::nullopt;
    b.num = -b.num;
    if (!add(a, b) || !multiply(a, 2, 1)) return std::nullopt;
    dl[static_cast<std::size_t>(s)] = a;
  }
  std::vector<double> out(static_cast<std::size_t>(w));
  Fraction acc{0, 1};
  for (int r = w - 1; r >= 0; --r) {
    if (!add(acc, dl[static_cast<std::size_t>(r) + 1])) return std::nullopt;
    out[static_cast<std::size_t>(r)] = static_cast<double>(acc.num) / static_cast<double>(acc.den);
  }
  return out;
}

// Largest Σ|w| over both children of a shifted window before its order is reduced.
constexpr double kMaxShiftedLebesgue = 2.0 + 1e-12;

bool shifted_window_too_wide(int w, int c) {
  for (int half = 0; half < 2; ++half) {
    const auto weights = exact_line_weights(w, c, half);
    if (!weights) return true;
    double sum = 0.0;
    for (double x : *weights) sum += std::abs(x);
    if (sum > kMaxShiftedLebesgue) return true;
  }
  return false;
}

AxisWindow axis_window(int n, int k, int order) {
  const int fit = (n % 2 == 1) ? n : n - 1;
  for (int w = std::min(order, fit);; w -= 2) {
    const int half = (w - 1) / 2;
    const int start = std::clamp(k - half, 0, n - w);
    const int c = k - start;
    if (w == 1 || c == half || !shifted_window_too_wide(w, c)) return {start, w, c};
  }
}

bool splits_x(Split s) { return s == Split::Quad || s == Split::X; }
bool splits_y(Split s) { return s == Split::Quad || s == Split::Y; }

}  // namespace

Stencil make_stencil(int coarse_n1, int coarse_n2, int k1, int k2, Split split, const Order& order) {
  validate_order(order);
  if (split == Split::None) throw std::invalid_argument("stencil needs a split");
  Stencil st;
  st.split = split;
  if (splits_x(split)) {
    const auto a = axis_window(coarse_n1, k1, order.n1);
    st.start1 = a.start;
    st.w1 = a.width;
    st.c1 = a.centre;
  } else {
    st.start1 = k1;
  }
  if (splits_y(split)) {
    const auto a = axis_window(coarse_n2, k2, order.n2);
    st.start2 = a.start;
    st.w2 = a.width;
    st.c2 = a.centre;
  } else {
    st.start2 = k2;
  }
  return st;
}

std::array<int, 2> child_offset(Split split, int c) {
  switch (split) {
    case Split::Quad:
      return {c / 2, c % 2};
    case Split::X:
      return {c, 0};
    case Split::Y:
      return {0, c};
    case Split::None:
      break;
  }
  return {0, 0};
}

namespace {

Eigen::MatrixXd procedural_weights(const Stencil& st, int child) {
  using G = LinearGeometry<Eigen::VectorXd, double>;
  const int m = st.w1 * st.w2;
  auto unit = [&](int k1, int k2) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e((k1 - st.start1) * st.w2 + (k2 - st.start2)) = 1.0;
    return e;
  };
  const auto kids = predict_children(G{}, st, unit);
  Eigen::MatrixXd w(st.w1, st.w2);
  for (int i = 0; i < st.w1; ++i) {
    for (int j = 0; j < st.w2; ++j) w(i, j) = kids[static_cast<std::size_t>(child)](i * st.w2 + j);
  }
  return w;
}

}  // namespace

Eigen::MatrixXd stencil_weights(const Stencil& st, int child) {
  if (child < 0 || child >= st.num_children()) throw std::out_of_range("child index out of range");
  // The flat scheme is a tensor product of one-dimensional schemes.
  const auto off = child_offset(st.split, child);
  const auto wx = st.w1 == 1 ? std::optional<std::vector<double>>{{1.0}} : exact_line_weights(st.w1, st.c1, off[0]);
  const auto wy = st.w2 == 1 ? std::optional<std::vector<double>>{{1.0}} : exact_line_weights(st.w2, st.c2, off[1]);
  if (!wx || !wy) return procedural_weights(st, child);
  Eigen::MatrixXd w(st.w1, st.w2);
  for (int i = 0; i < st.w1; ++i) {
    for (int j = 0; j < st.w2; ++j) w(i, j) = (*wx)[static_cast<std::size_t>(i)] * (*wy)[static_cast<std::size_t>(j)];
  }
  return w;
}

Eigen::MatrixXd prediction_weights(int n1, int n2, int i1, int i2) {
  validate_order({n1, n2});
  if (i1 < 0 || i1 > 1 || i2 < 0 || i2 > 1) throw std::invalid_argument("quadrant indices must be 0 or 1");
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int>, Eigen::MatrixXd> cache;
  const auto key = std::make_tuple(n1, n2, i1, i2);
  const bool cacheable = n1 <= 9 && n2 <= 9;
  if (cacheable) {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const Stencil st = make_stencil(n1, n2, (n1 - 1) / 2, (n2 - 1) / 2, Split::Quad, {n1, n2});
  Eigen::MatrixXd w = stencil_weights(st, i1 * 2 + i2);
  if (cacheable) {
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, w);
  }
  return w;
}

std::array<HpdMatrix, 4> predict_midpoints_dyadic(std::span<const HpdMatrix> neighborhood, const Order& order) {
  validate_order(order);
  if (neighborhood.size() != static_cast<std::size_t>(order.n1 * order.n2)) {
    throw std::invalid_argument("neighbourhood size does not match the order");
  }
  const Stencil st = make_stencil(order.n1, order.n2, (order.n1 - 1) / 2, (order.n2 - 1) / 2, Split::Quad, order);
  const auto kids = predict_children(HpdGeometry{}, st, [&](int k1, int k2) -> const HpdMatrix& {
    return neighborhood[static_cast<std::size_t>(k1 * order.n2 + k2)];
  });
  return {kids[0], kids[1], kids[2], kids[3]};
}

std::array<HpdMatrix, 4> predict_midpoints_weighted(std::span<const HpdMatrix> neighborhood, const Order& order) {
  validate_order(order);
  if (neighborhood.size() != static_cast<std::size_t>(order.n1 * order.n2)) {
    throw std::invalid_argument("neighbourhood size does not match the order");
  }
  std::array<HpdMatrix, 4> out;
  for (int c = 0; c < 4; ++c) {
    const Eigen::MatrixXd w = prediction_weights(order.n1, order.n2, c / 2, c % 2);
    std::vector<HpdMatrix> pts;
    std::vector<double> ws;
    for (int i = 0; i < order.n1; ++i) {
      for (int j = 0; j < order.n2; ++j) {
        if (w(i, j) == 0.0) continue;
        pts.push_back(neighborhood[static_cast<std::size_t>(i * order.n2 + j)]);
        ws.push_back(w(i, j));
      }
    }
    out[static_cast<std::size_t>(c)] = karcher_mean(pts, ws);
  }
  return out;
}

std::vector<HpdMatrix> predict_children_weighted(const HpdGrid& coarse, const Stencil& st) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, int, int, int>, std::vector<Eigen::MatrixXd>> cache;
  const auto key = std::make_tuple(static_cast<int>(st.split), st.w1, st.w2, st.c1, st.c2, 0);
  std::vector<Eigen::MatrixXd> weights;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) weights = it->second;
  }
  if (weights.empty()) {
    for (int c = 0; c < st.num_children(); ++c) weights.push_back(stencil_weights(st, c));
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, weights);
  }
  std::vector<HpdMatrix> out;
  std::vector<HpdMatrix> pts;
  std::vector<double> ws;
  for (const auto& w : weights) {
    pts.clear();
    ws.clear();
    for (int i = 0; i < st.w1; ++i) {
      for (int j = 0; j < st.w2; ++j) {
        if (w(i, j) == 0.0) continue;
        pts.push_back(coarse(st.start1 + i, st.start2 + j));
        ws.push_back(w(i, j));
      }
    }
    out.push_back(pts.size() == 1 ? pts.front() : karcher_mean(pts, ws));
  }
  return out;
}

HpdGrid predict_scale(const HpdGrid& coarse, const RefinementPyramid& pyramid, int j, const Order& order) {
  validate_order(order);
  const Split split = pyramid.split(j);
  if (split == Split::None) throw std::invalid_argument("scale has no split");
  if (coarse.n1() != pyramid.n1(j - 1) || coarse.n2() != pyramid.n2(j - 1)) {
    throw std::invalid_argument("coarse grid does not match the pyramid scale");
  }
  HpdGrid fine(pyramid.n1(j), pyramid.n2(j), pyramid.domain());
  for (int k1 = 0; k1 < coarse.n1(); ++k1) {
    for (int k2 = 0; k2 < coarse.n2(); ++k2) {
      const Stencil st = make_stencil(coarse.n1(), coarse.n2(), k1, k2, split, order);
      const auto kids = predict_children_weighted(coarse, st);
      for (int c = 0; c < st.num_children(); ++c) {
        const auto off = child_offset(split, c);
        const int f1 = (splits_x(split) ? 2 * k1 : k1) + off[0];
        const int f2 = (splits_y(split) ? 2 * k2 : k2) + off[1];
        fine(f1, f2) = kids[static_cast<std::size_t>(c)];
      }
    }
  }
  return fine;
}

}  // namespace hpdwav
