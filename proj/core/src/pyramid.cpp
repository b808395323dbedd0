#include "hpdwav/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hpdwav {

int exact_log2(int n) {
  if (n <= 0 || (n & (n - 1)) != 0) return -1;
  int k = 0;
  while ((1 << k) < n) ++k;
  return k;
}

RefinementPyramid::RefinementPyramid(Rect domain, std::vector<PyramidScale> scales, int j1, int j2)
    : domain_(domain), scales_(std::move(scales)), j1_(j1), j2_(j2) {
  if (scales_.empty()) throw std::invalid_argument("pyramid needs at least one scale");
}

Split RefinementPyramid::split(int j) const {
  if (j <= 0 || j > max_scale()) return Split::None;
  const bool sx = n1(j) > n1(j - 1);
  const bool sy = n2(j) > n2(j - 1);
  if (sx && sy) return Split::Quad;
  if (sx) return Split::X;
  if (sy) return Split::Y;
  return Split::None;
}

std::vector<int> RefinementPyramid::children(int j, int parent) const {
  std::vector<int> out;
  const auto& s = scale(j);
  for (std::size_t i = 0; i < s.parent.size(); ++i) {
    if (s.parent[i] == parent) out.push_back(static_cast<int>(i));
  }
  return out;
}

double RefinementPyramid::relative_area(int j) const {
  return scale(j).rects.front().area() / domain_.area();
}

RefinementPyramid natural_dyadic_pyramid(int j1, int j2, Rect domain) {
  if (j1 < 0 || j2 < 0) throw std::invalid_argument("dyadic exponents must be non-negative");
  if (j1 > 20 || j2 > 20) throw std::invalid_argument("dyadic exponents too large");
  if (!domain.valid()) throw std::invalid_argument("domain rectangle is degenerate");
  const int jmax = std::max(j1, j2);
  std::vector<PyramidScale> scales;
  for (int j = 0; j <= jmax; ++j) {
    PyramidScale s;
    const int e1 = std::max(0, j - jmax + j1);
    const int e2 = std::max(0, j - jmax + j2);
    s.n1 = 1 << e1;
    s.n2 = 1 << e2;
    const double w = domain.width() / s.n1;
    const double h = domain.height() / s.n2;
    s.rects.resize(static_cast<std::size_t>(s.n1) * s.n2);
    s.parent.assign(s.rects.size(), -1);
    for (int k1 = 0; k1 < s.n1; ++k1) {
      for (int k2 = 0; k2 < s.n2; ++k2) {
        const std::size_t i = static_cast<std::size_t>(k1) * s.n2 + k2;
        // Outer edges are pinned to the domain so the union is exact.
        Rect r;
        r.x0 = k1 == 0 ? domain.x0 : domain.x0 + k1 * w;
        r.x1 = k1 == s.n1 - 1 ? domain.x1 : domain.x0 + (k1 + 1) * w;
        r.y0 = k2 == 0 ? domain.y0 : domain.y0 + k2 * h;
        r.y1 = k2 == s.n2 - 1 ? domain.y1 : domain.y0 + (k2 + 1) * h;
        s.rects[i] = r;
        if (j > 0) {
          const auto& prev = scales.back();
          const int p1 = prev.n1 == s.n1 ? k1 : k1 / 2;
          const int p2 = prev.n2 == s.n2 ? k2 : k2 / 2;
          s.parent[i] = p1 * prev.n2 + p2;
        }
      }
    }
    scales.push_back(std::move(s));
  }
  return RefinementPyramid(domain, std::move(scales), j1, j2);
}

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

double overlap_area(const Rect& a, const Rect& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  return (w > 0 && h > 0) ? w * h : 0.0;
}

}  // namespace

std::vector<std::string> validate_pyramid(const RefinementPyramid& p) {
  std::vector<std::string> out;
  const Rect& dom = p.domain();
  const double tol = 1e-12 * std::max(1.0, dom.area());
  auto report = [&](const std::string& kind, int j, const std::string& msg) {
    std::ostringstream os;
    os << kind << " condition violated at scale " << j << ": " << msg;
    out.push_back(os.str());
  };

  if (p.scale(0).rects.size() != 1 || !(p.scale(0).rects.front() == dom)) {
    report("refinement", 0, "scale 0 must be the single domain rectangle");
  }

  for (int j = 0; j <= p.max_scale(); ++j) {
    const auto& s = p.scale(j);
    if (s.rects.size() != static_cast<std::size_t>(s.n1) * s.n2) {
      report("partitioning", j, "rectangle count does not match the grid shape");
      continue;
    }
    double total = 0.0;
    for (const auto& r : s.rects) {
      if (!r.valid()) report("partitioning", j, "degenerate rectangle");
      total += r.area();
    }
    if (!near(total, dom.area(), tol * s.rects.size())) report("partitioning", j, "areas do not sum to the domain");
    for (std::size_t a = 0; a < s.rects.size(); ++a) {
      for (std::size_t b = a + 1; b < s.rects.size(); ++b) {
        if (overlap_area(s.rects[a], s.rects[b]) > tol) {
          report("partitioning", j, "rectangles " + std::to_string(a) + " and " + std::to_string(b) + " overlap");
        }
      }
    }

    // Adjacent neighbours must share a full edge, so that their union is a rectangle.
    for (int k1 = 0; k1 < s.n1; ++k1) {
      for (int k2 = 0; k2 < s.n2; ++k2) {
        const Rect& r = s.rects[static_cast<std::size_t>(k1) * s.n2 + k2];
        if (k1 + 1 < s.n1) {
          const Rect& q = s.rects[static_cast<std::size_t>(k1 + 1) * s.n2 + k2];
          if (!near(r.x1, q.x0, tol) || !near(r.y0, q.y0, tol) || !near(r.y1, q.y1, tol)) {
            report("shape", j, "horizontal neighbours do not form a rectangle");
          }
        }
        if (k2 + 1 < s.n2) {
          const Rect& q = s.rects[static_cast<std::size_t>(k1) * s.n2 + k2 + 1];
          if (!near(r.y1, q.y0, tol) || !near(r.x0, q.x0, tol) || !near(r.x1, q.x1, tol)) {
            report("shape", j, "vertical neighbours do not form a rectangle");
          }
        }
      }
    }

    if (j == 0) continue;
    const auto& prev = p.scale(j - 1);
    if (s.rects.size() <= prev.rects.size()) report("refinement", j, "rectangle count does not increase");
    if (s.parent.size() != s.rects.size()) {
      report("refinement", j, "missing parent links");
      continue;
    }
    std::vector<double> child_area(prev.rects.size(), 0.0);
    std::vector<Rect> hull(prev.rects.size());
    std::vector<bool> seen(prev.rects.size(), false);
    for (std::size_t i = 0; i < s.rects.size(); ++i) {
      const int par = s.parent[i];
      if (par < 0 || static_cast<std::size_t>(par) >= prev.rects.size()) {
        report("refinement", j, "invalid parent index");
        continue;
      }
      const Rect& r = s.rects[i];
      child_area[par] += r.area();
      if (!seen[par]) {
        hull[par] = r;
        seen[par] = true;
      } else {
        hull[par].x0 = std::min(hull[par].x0, r.x0);
        hull[par].x1 = std::max(hull[par].x1, r.x1);
        hull[par].y0 = std::min(hull[par].y0, r.y0);
        hull[par].y1 = std::max(hull[par].y1, r.y1);
      }
    }
    for (std::size_t q = 0; q < prev.rects.size(); ++q) {
      const Rect& pr = prev.rects[q];
      if (!seen[q]) {
        report("refinement", j, "rectangle " + std::to_string(q) + " has no children");
        continue;
      }
      const Rect& h = hull[q];
      if (!near(child_area[q], pr.area(), tol) || !near(h.x0, pr.x0, tol) || !near(h.x1, pr.x1, tol) ||
          !near(h.y0, pr.y0, tol) || !near(h.y1, pr.y1, tol)) {
        report("refinement", j, "rectangle " + std::to_string(q) + " is not the union of its children");
      }
    }
  }
  return out;
}

}  // namespace hpdwav
