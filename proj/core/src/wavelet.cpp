#include "hpdwav/wavelet.hpp"

#include <algorithm>
#include <cmath>

namespace hpdwav {

HpdGrid coarsen(const HpdGrid& fine, const RefinementPyramid& pyramid, int j) {
  if (j < 1 || j > pyramid.max_scale()) throw std::invalid_argument("coarsen: scale out of range");
  const auto& fs = pyramid.scale(j);
  const auto& cs = pyramid.scale(j - 1);
  if (fine.n1() != fs.n1 || fine.n2() != fs.n2) throw std::invalid_argument("coarsen: grid does not match scale");

  std::vector<std::vector<int>> kids(cs.rects.size());
  for (std::size_t i = 0; i < fs.parent.size(); ++i) kids[static_cast<std::size_t>(fs.parent[i])].push_back(static_cast<int>(i));

  HpdGrid out(cs.n1, cs.n2, fine.domain());
  std::vector<HpdMatrix> pts;
  std::vector<double> w;
  for (std::size_t p = 0; p < cs.rects.size(); ++p) {
    pts.clear();
    w.clear();
    const double parent_area = cs.rects[p].area();
    for (int c : kids[p]) {
      pts.push_back(fine.cells()[static_cast<std::size_t>(c)]);
      w.push_back(fs.rects[static_cast<std::size_t>(c)].area() / parent_area);
    }
    // Absorb rounding in the area ratios so the weights sum to one exactly enough.
    double total = 0.0;
    for (double x : w) total += x;
    for (double& x : w) x /= total;
    out.cells()[p] = karcher_mean(pts, w);
  }
  return out;
}

MidpointPyramid build_midpoint_pyramid(const HpdGrid& grid, const RefinementPyramid& pyramid) {
  const int jmax = pyramid.max_scale();
  if (grid.n1() != pyramid.n1(jmax) || grid.n2() != pyramid.n2(jmax)) {
    throw std::invalid_argument("grid does not match the finest pyramid scale");
  }
  grid_dim(grid);
  MidpointPyramid mids(static_cast<std::size_t>(jmax + 1));
  mids[static_cast<std::size_t>(jmax)] = grid;
  for (int j = jmax; j >= 1; --j) mids[static_cast<std::size_t>(j - 1)] = coarsen(mids[static_cast<std::size_t>(j)], pyramid, j);
  return mids;
}

RefinementPyramid pyramid_for(const HpdGrid& grid) {
  const int j1 = exact_log2(grid.n1());
  const int j2 = exact_log2(grid.n2());
  if (j1 < 0 || j2 < 0) throw std::invalid_argument("grid dimensions must be powers of two");
  return natural_dyadic_pyramid(j1, j2, grid.domain());
}

double WaveletDecomposition::scale_factor(int j) const { return std::sqrt(pyramid.relative_area(j)); }

WaveletDecomposition forward_transform(const HpdGrid& grid, const Order& order) {
  return forward_transform(grid, order, pyramid_for(grid));
}

WaveletDecomposition forward_transform(const HpdGrid& grid, const Order& order, const RefinementPyramid& pyramid) {
  validate_order(order);
  if (!pyramid.is_dyadic()) throw std::invalid_argument("transforms need a natural dyadic pyramid");
  const MidpointPyramid mids = build_midpoint_pyramid(grid, pyramid);
  const int jmax = pyramid.max_scale();

  WaveletDecomposition dec;
  dec.order = order;
  dec.pyramid = pyramid;
  dec.coarsest = mids.front()(0, 0);
  dec.coeffs.resize(static_cast<std::size_t>(jmax + 1));
  dec.whitened.resize(static_cast<std::size_t>(jmax + 1));
  dec.predicted.resize(static_cast<std::size_t>(jmax + 1));

  for (int j = 1; j <= jmax; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    HpdGrid pred = predict_scale(mids[ju - 1], pyramid, j, order);
    const double scale = dec.scale_factor(j);
    const HpdGrid& actual = mids[ju];
    HermitianGrid raw(actual.n1(), actual.n2(), grid.domain());
    HermitianGrid white(actual.n1(), actual.n2(), grid.domain());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      const HpdMatrix& base = pred.cells()[i];
      const HpdMatrix root = matrix_sqrt(base);
      const HpdMatrix inv_root = matrix_invsqrt(base);
      const HermitianMatrix w = matrix_log(congruence(inv_root.matrix(), actual.cells()[i]));
      white.cells()[i] = w * scale;
      raw.cells()[i] = congruence(root.matrix(), w) * scale;
    }
    dec.coeffs[ju] = std::move(raw);
    dec.whitened[ju] = std::move(white);
    dec.predicted[ju] = std::move(pred);
  }
  return dec;
}

MidpointPyramid inverse_pyramid(const WaveletDecomposition& decomp) {
  validate_order(decomp.order);
  const auto& pyr = decomp.pyramid;
  const int jmax = pyr.max_scale();
  if (static_cast<int>(decomp.coeffs.size()) != jmax + 1) throw std::invalid_argument("decomposition is missing scales");
  MidpointPyramid mids(static_cast<std::size_t>(jmax + 1));
  mids[0] = HpdGrid(1, 1, decomp.coarsest, pyr.domain());
  for (int j = 1; j <= jmax; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const HermitianGrid& d = decomp.coeffs[ju];
    if (d.n1() != pyr.n1(j) || d.n2() != pyr.n2(j)) throw std::invalid_argument("coefficient grid has the wrong shape");
    HpdGrid m = predict_scale(mids[ju - 1], pyr, j, decomp.order);
    const double inv_scale = 1.0 / decomp.scale_factor(j);
    // Coefficients live at the forward-pass predictions. After thresholding
    // the predictions here can differ, so each coefficient is carried over.
    const HpdGrid* bases = nullptr;
    if (decomp.predicted.size() == decomp.coeffs.size() && decomp.predicted[ju].n1() == m.n1() &&
        decomp.predicted[ju].n2() == m.n2()) {
      bases = &decomp.predicted[ju];
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      const HermitianMatrix& h = d.cells()[i];
      if (h.frobenius_norm() == 0.0) continue;
      HpdMatrix& base = m.cells()[i];
      if (bases && !(bases->cells()[i] == base)) {
        base = exp_map(base, parallel_transport(bases->cells()[i], base, h) * inv_scale);
      } else {
        base = exp_map(base, h * inv_scale);
      }
    }
    mids[ju] = std::move(m);
  }
  return mids;
}

WaveletDecomposition with_whitened(const WaveletDecomposition& decomp) {
  WaveletDecomposition out = decomp;
  const MidpointPyramid mids = inverse_pyramid(decomp);
  const int jmax = decomp.max_scale();
  out.whitened.assign(static_cast<std::size_t>(jmax + 1), HermitianGrid{});
  out.predicted.assign(static_cast<std::size_t>(jmax + 1), HpdGrid{});
  for (int j = 1; j <= jmax; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    HpdGrid pred = predict_scale(mids[ju - 1], decomp.pyramid, j, decomp.order);
    HermitianGrid white(pred.n1(), pred.n2(), pred.domain());
    for (std::size_t i = 0; i < pred.size(); ++i) {
      white.cells()[i] = whitening_transport(pred.cells()[i], decomp.coeffs[ju].cells()[i]);
    }
    out.whitened[ju] = std::move(white);
    out.predicted[ju] = std::move(pred);
  }
  return out;
}

HpdGrid inverse_transform(const WaveletDecomposition& decomp) {
  HpdGrid out = std::move(inverse_pyramid(decomp).back());
  out.set_domain(decomp.pyramid.domain());
  return out;
}

double max_relative_error(const HpdGrid& a, const HpdGrid& b) {
  if (a.n1() != b.n1() || a.n2() != b.n2()) throw std::invalid_argument("grid shapes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = b.cells()[i].frobenius_norm();
    worst = std::max(worst, (a.cells()[i].matrix() - b.cells()[i].matrix()).norm() / denom);
  }
  return worst;
}

}  // namespace hpdwav
