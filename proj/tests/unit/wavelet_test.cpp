#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <hpdwav/neville.hpp>
#include <hpdwav/wavelet.hpp>

#include "common/support.hpp"

namespace hpdwav {
namespace {

using testing::diag_hpd;
using testing::random_grid;
using testing::random_hpd;

int fine_index(Split split, int k, int off, bool x_axis) {
  const bool split_here = split == Split::Quad || (x_axis ? split == Split::X : split == Split::Y);
  return (split_here ? 2 * k : k) + off;
}

// Scalar transform on log values: midpoints are arithmetic means, predictions
// are the flat stencil weights, coefficients are scaled differences.
std::vector<Grid<double>> scalar_coefficients(const Grid<double>& logs, const RefinementPyramid& p, const Order& order) {
  const int big_j = p.max_scale();
  std::vector<Grid<double>> mid(static_cast<std::size_t>(big_j + 1));
  mid[static_cast<std::size_t>(big_j)] = logs;
  for (int j = big_j; j >= 1; --j) {
    const Grid<double>& fine = mid[static_cast<std::size_t>(j)];
    Grid<double> coarse(p.n1(j - 1), p.n2(j - 1), 0.0);
    const Split split = p.split(j);
    const int kids = split == Split::Quad ? 4 : 2;
    for (int k1 = 0; k1 < coarse.n1(); ++k1) {
      for (int k2 = 0; k2 < coarse.n2(); ++k2) {
        for (int c = 0; c < kids; ++c) {
          const auto off = child_offset(split, c);
          coarse(k1, k2) += fine(fine_index(split, k1, off[0], true), fine_index(split, k2, off[1], false)) / kids;
        }
      }
    }
    mid[static_cast<std::size_t>(j - 1)] = coarse;
  }
  std::vector<Grid<double>> coeffs(static_cast<std::size_t>(big_j + 1));
  for (int j = 1; j <= big_j; ++j) {
    const Grid<double>& coarse = mid[static_cast<std::size_t>(j - 1)];
    const Grid<double>& fine = mid[static_cast<std::size_t>(j)];
    Grid<double> out(fine.n1(), fine.n2(), 0.0);
    const Split split = p.split(j);
    const double scale = std::sqrt(p.relative_area(j));
    for (int k1 = 0; k1 < coarse.n1(); ++k1) {
      for (int k2 = 0; k2 < coarse.n2(); ++k2) {
        const Stencil st = make_stencil(coarse.n1(), coarse.n2(), k1, k2, split, order);
        for (int c = 0; c < st.num_children(); ++c) {
          const Eigen::MatrixXd w = stencil_weights(st, c);
          double pred = 0.0;
          for (int a = 0; a < st.w1; ++a) {
            for (int b = 0; b < st.w2; ++b) pred += w(a, b) * coarse(st.start1 + a, st.start2 + b);
          }
          const auto off = child_offset(split, c);
          const int f1 = fine_index(split, k1, off[0], true);
          const int f2 = fine_index(split, k2, off[1], false);
          out(f1, f2) = scale * (fine(f1, f2) - pred);
        }
      }
    }
    coeffs[static_cast<std::size_t>(j)] = out;
  }
  return coeffs;
}

HpdGrid commuting_grid(int n1, int n2, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 0.7);
  const ComplexMatrix u = matrix_exp(testing::random_hermitian(3, rng)).matrix().householderQr().householderQ();
  HpdGrid g(n1, n2);
  for (auto& c : g.cells()) {
    const HpdMatrix d = diag_hpd({std::exp(n(rng)), std::exp(n(rng)), std::exp(n(rng))});
    c = congruence(ComplexMatrix(u.adjoint()), d);
  }
  return g;
}

TEST(Coarsen, CommutingChildrenGiveGeometricMean) {
  HpdGrid fine(2, 2);
  fine(0, 0) = diag_hpd({1.0, 2.0});
  fine(0, 1) = diag_hpd({4.0, 8.0});
  fine(1, 0) = diag_hpd({16.0, 1.0});
  fine(1, 1) = diag_hpd({0.25, 0.5});
  const RefinementPyramid p = natural_dyadic_pyramid(1, 1);
  const HpdGrid parent = coarsen(fine, p, 1);
  ASSERT_EQ(parent.n1(), 1);
  const double g1 = std::pow(1.0 * 4.0 * 16.0 * 0.25, 0.25);
  const double g2 = std::pow(2.0 * 8.0 * 1.0 * 0.5, 0.25);
  EXPECT_LE(testing::rel_diff(parent(0, 0).matrix(), diag_hpd({g1, g2}).matrix()), 1e-12);
}

TEST(Coarsen, ConstantStaysConstant) {
  std::mt19937_64 rng(2);
  const HpdMatrix p = random_hpd(3, rng);
  const HpdGrid g(4, 2, p);
  const MidpointPyramid mp = build_midpoint_pyramid(g, pyramid_for(g));
  ASSERT_EQ(mp.size(), 3u);
  for (const auto& level : mp) {
    for (const auto& c : level.cells()) EXPECT_LE(testing::rel_diff(c.matrix(), p.matrix()), 1e-12);
  }
  EXPECT_EQ(mp[0].n1(), 1);
  EXPECT_EQ(mp[0].n2(), 1);
}

TEST(MidpointPyramid, SingleCell) {
  const HpdGrid g(1, 1, HpdMatrix::identity(2));
  EXPECT_EQ(build_midpoint_pyramid(g, pyramid_for(g)).size(), 1u);
}

TEST(MidpointPyramid, ScaleZeroIsTheDirectMeanForCommutingData) {
  std::mt19937_64 rng(3);
  const HpdGrid g = commuting_grid(8, 8, rng);
  const MidpointPyramid mp = build_midpoint_pyramid(g, pyramid_for(g));
  EXPECT_LE(riemann_distance(mp[0](0, 0), karcher_mean(g.cells())), 1e-10);
}

TEST(MidpointPyramid, ScaleZeroApproachesTheDirectMeanCubically) {
  // Iterated Karcher means are not associative on a curved space; the gap
  // shrinks with the third power of the spread.
  auto worst_gap = [](double spread) {
    std::mt19937_64 rng(4);
    double worst = 0.0;
    for (int r = 0; r < 3; ++r) {
      const HpdGrid g = random_grid(8, 8, 3, rng, spread);
      const MidpointPyramid mp = build_midpoint_pyramid(g, pyramid_for(g));
      worst = std::max(worst, riemann_distance(mp[0](0, 0), karcher_mean(g.cells())));
    }
    return worst;
  };
  const double coarse = worst_gap(0.2);
  const double fine = worst_gap(0.05);
  EXPECT_LE(fine, 1e-4);
  EXPECT_LE(fine, coarse / 30.0);
}

TEST(ForwardTransform, ConstantGridHasZeroCoefficients) {
  std::mt19937_64 rng(5);
  const HpdMatrix p = random_hpd(2, rng);
  const HpdGrid g(8, 4, p);
  for (const Order o : {Order{1, 1}, Order{3, 3}, Order{5, 1}}) {
    const WaveletDecomposition dec = forward_transform(g, o);
    EXPECT_LE(testing::rel_diff(dec.coarsest.matrix(), p.matrix()), 1e-12);
    for (int j = 1; j <= dec.max_scale(); ++j) {
      for (const auto& c : dec.coeffs[static_cast<std::size_t>(j)].cells()) EXPECT_LE(c.frobenius_norm(), 1e-10);
    }
  }
}

TEST(ForwardTransform, ShapesFollowThePyramid) {
  std::mt19937_64 rng(6);
  const WaveletDecomposition dec = forward_transform(random_grid(16, 4, 2, rng), Order{3, 3});
  ASSERT_EQ(dec.max_scale(), 4);
  ASSERT_TRUE(dec.has_whitened());
  for (int j = 1; j <= 4; ++j) {
    const auto& c = dec.coeffs[static_cast<std::size_t>(j)];
    EXPECT_EQ(c.n1(), dec.pyramid.n1(j));
    EXPECT_EQ(c.n2(), dec.pyramid.n2(j));
    EXPECT_EQ(dec.whitened[static_cast<std::size_t>(j)].n1(), c.n1());
    EXPECT_EQ(dec.predicted[static_cast<std::size_t>(j)].n2(), c.n2());
  }
}

TEST(ForwardTransform, WhiteningIsAnIsometry) {
  std::mt19937_64 rng(7);
  const WaveletDecomposition dec = forward_transform(random_grid(8, 8, 3, rng, 0.6), Order{3, 3});
  for (int j = 1; j <= dec.max_scale(); ++j) {
    const auto& raw = dec.coeffs[static_cast<std::size_t>(j)];
    const auto& white = dec.whitened[static_cast<std::size_t>(j)];
    const auto& base = dec.predicted[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double a = white.cells()[i].frobenius_norm();
      const double b = metric_norm(base.cells()[i], raw.cells()[i]);
      EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, b));
    }
  }
}

TEST(ForwardTransform, CoefficientNormIsScaledDistance) {
  std::mt19937_64 rng(8);
  const HpdGrid g = random_grid(8, 4, 2, rng, 0.5);
  const WaveletDecomposition dec = forward_transform(g, Order{3, 1});
  const MidpointPyramid mp = build_midpoint_pyramid(g, dec.pyramid);
  for (int j = 1; j <= dec.max_scale(); ++j) {
    const double area = dec.pyramid.relative_area(j);
    EXPECT_NEAR(dec.scale_factor(j), std::sqrt(area), 1e-15);
    const auto& white = dec.whitened[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < white.size(); ++i) {
      const double dist = riemann_distance(mp[static_cast<std::size_t>(j)].cells()[i],
                                           dec.predicted[static_cast<std::size_t>(j)].cells()[i]);
      EXPECT_NEAR(std::pow(white.cells()[i].frobenius_norm(), 2), area * dist * dist, 1e-10);
    }
  }
}

struct RoundTripCase {
  int n1, n2, d;
};

class RoundTrip : public ::testing::TestWithParam<RoundTripCase> {};

TEST_P(RoundTrip, AllOddOrdersReconstruct) {
  const auto [n1, n2, d] = GetParam();
  std::mt19937_64 rng(static_cast<std::uint64_t>(100 * n1 + 10 * n2 + d));
  const HpdGrid g = random_grid(n1, n2, d, rng, 0.5);
  for (int o1 = 1; o1 <= 9; o1 += 2) {
    for (int o2 = 1; o2 <= 9; o2 += 2) {
      const WaveletDecomposition dec = forward_transform(g, Order{o1, o2});
      EXPECT_LE(max_relative_error(inverse_transform(dec), g), 1e-8) << "order " << o1 << "," << o2;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, RoundTrip,
                         ::testing::Values(RoundTripCase{8, 8, 1}, RoundTripCase{8, 8, 2}, RoundTripCase{8, 8, 3},
                                           RoundTripCase{16, 16, 1}, RoundTripCase{16, 16, 2},
                                           RoundTripCase{16, 16, 3}, RoundTripCase{16, 4, 1},
                                           RoundTripCase{16, 4, 2}, RoundTripCase{16, 4, 3}),
                         [](const auto& info) {
                           return std::to_string(info.param.n1) + "x" + std::to_string(info.param.n2) + "_d" +
                                  std::to_string(info.param.d);
                         });

TEST(InverseTransform, ZeroCoefficientsGiveConstantGrid) {
  std::mt19937_64 rng(9);
  WaveletDecomposition dec = forward_transform(random_grid(4, 8, 2, rng), Order{1, 1});
  const HpdMatrix p = random_hpd(2, rng);
  dec.coarsest = p;
  for (int j = 1; j <= dec.max_scale(); ++j) {
    for (auto& c : dec.coeffs[static_cast<std::size_t>(j)].cells()) c = HermitianMatrix::zero(2);
  }
  const HpdGrid out = inverse_transform(dec);
  for (const auto& c : out.cells()) EXPECT_LE(testing::rel_diff(c.matrix(), p.matrix()), 1e-12);
}

TEST(InverseTransform, RawCoefficientsSuffice) {
  std::mt19937_64 rng(10);
  const HpdGrid g = random_grid(8, 8, 2, rng);
  const WaveletDecomposition full = forward_transform(g, Order{3, 3});
  WaveletDecomposition bare = full;
  bare.whitened.clear();
  bare.predicted.clear();
  EXPECT_LE(max_relative_error(inverse_transform(bare), g), 1e-10);
  const WaveletDecomposition rebuilt = with_whitened(bare);
  ASSERT_TRUE(rebuilt.has_whitened());
  for (int j = 1; j <= full.max_scale(); ++j) {
    for (std::size_t i = 0; i < full.whitened[static_cast<std::size_t>(j)].size(); ++i) {
      EXPECT_LE((rebuilt.whitened[static_cast<std::size_t>(j)].cells()[i].matrix() -
                 full.whitened[static_cast<std::size_t>(j)].cells()[i].matrix())
                    .norm(),
                1e-10);
    }
  }
  const MidpointPyramid mp = inverse_pyramid(bare);
  EXPECT_LE(testing::max_cell_diff(mp.back(), g), 1e-10);
}

TEST(ForwardTransform, ScalarCaseEqualsTransformOfLogs) {
  std::mt19937_64 rng(11);
  const HpdGrid g = random_grid(16, 4, 1, rng, 0.8);
  const Grid<double> logs = g.map([](const HpdMatrix& m) { return std::log(m(0, 0).real()); });
  for (const Order o : {Order{1, 1}, Order{3, 3}, Order{5, 3}, Order{9, 7}}) {
    const WaveletDecomposition dec = forward_transform(g, o);
    const auto oracle = scalar_coefficients(logs, dec.pyramid, o);
    for (int j = 1; j <= dec.max_scale(); ++j) {
      const auto& got = dec.coeffs[static_cast<std::size_t>(j)];
      const auto& white = dec.whitened[static_cast<std::size_t>(j)];
      const auto& want = oracle[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < got.size(); ++i) {
        const double expected = want.cells()[i];
        EXPECT_NEAR(white.cells()[i](0, 0).real(), expected, 1e-10);
        // The raw coefficient lives in the tangent space at the prediction.
        const double base = dec.predicted[static_cast<std::size_t>(j)].cells()[i](0, 0).real();
        EXPECT_NEAR(got.cells()[i](0, 0).real(), base * expected, 1e-10 * std::max(1.0, base));
      }
    }
  }
}

TEST(ForwardTransform, CongruencePreservesTraces) {
  std::mt19937_64 rng(12);
  const HpdGrid g = random_grid(8, 8, 3, rng, 0.5);
  const ComplexMatrix a = testing::random_invertible(3, rng);
  const WaveletDecomposition d0 = forward_transform(g, Order{3, 3});
  const WaveletDecomposition d1 = forward_transform(congruence(a, g), Order{3, 3});
  EXPECT_LE(testing::rel_diff(d1.coarsest.matrix(), congruence(a, d0.coarsest).matrix()), 1e-9);
  for (int j = 1; j <= d0.max_scale(); ++j) {
    for (std::size_t i = 0; i < d0.whitened[static_cast<std::size_t>(j)].size(); ++i) {
      EXPECT_NEAR(d1.whitened[static_cast<std::size_t>(j)].cells()[i].trace(),
                  d0.whitened[static_cast<std::size_t>(j)].cells()[i].trace(), 1e-9);
      EXPECT_NEAR(d1.whitened[static_cast<std::size_t>(j)].cells()[i].frobenius_norm(),
                  d0.whitened[static_cast<std::size_t>(j)].cells()[i].frobenius_norm(), 1e-9);
    }
  }
}

HpdGrid polynomial_grid(const Order& degree_plus_one, int n, int d, double spread, std::mt19937_64& rng) {
  ControlGrid cg;
  for (int i = 0; i < degree_plus_one.n1; ++i) cg.nodes_x.push_back(i / double(std::max(1, degree_plus_one.n1 - 1)));
  for (int i = 0; i < degree_plus_one.n2; ++i) cg.nodes_y.push_back(i / double(std::max(1, degree_plus_one.n2 - 1)));
  for (int k = 0; k < degree_plus_one.n1 * degree_plus_one.n2; ++k) cg.points.push_back(random_hpd(d, rng, spread));
  std::vector<double> centres;
  for (int k = 0; k < n; ++k) centres.push_back((k + 0.5) / n);
  return generate_polynomial_surface(cg, centres, centres);
}

double max_interior_whitened(const WaveletDecomposition& dec) {
  double worst = 0.0;
  const int b1 = dec.order.n1 / 2, b2 = dec.order.n2 / 2;
  for (int j = 1; j <= dec.max_scale(); ++j) {
    const auto& w = dec.whitened[static_cast<std::size_t>(j)];
    const int m1 = dec.pyramid.n1(j - 1), m2 = dec.pyramid.n2(j - 1);
    for (int k1 = 0; k1 < w.n1(); ++k1) {
      for (int k2 = 0; k2 < w.n2(); ++k2) {
        const int c1 = k1 / 2, c2 = k2 / 2;
        if (c1 < b1 || c1 >= m1 - b1 || c2 < b2 || c2 >= m2 - b2) continue;
        worst = std::max(worst, w(k1, k2).frobenius_norm());
      }
    }
  }
  return worst;
}

TEST(PolynomialReproduction, ExactInFlatGeometry) {
  std::mt19937_64 rng(13);
  for (const Order o : {Order{1, 1}, Order{3, 3}, Order{3, 1}, Order{5, 5}}) {
    const HpdGrid g = polynomial_grid(o, 16, 1, 0.5, rng);
    EXPECT_LE(max_interior_whitened(forward_transform(g, o)), 1e-10) << o.n1 << "," << o.n2;
    const HpdGrid c = polynomial_grid(Order{1, 1}, 16, 3, 0.5, rng);
    EXPECT_LE(max_interior_whitened(forward_transform(c, o)), 1e-10);
  }
}

TEST(PolynomialReproduction, HaarReproducesConstantsForAnyDimension) {
  std::mt19937_64 rng(14);
  const HpdGrid g = polynomial_grid(Order{1, 1}, 8, 3, 0.5, rng);
  EXPECT_LE(max_interior_whitened(forward_transform(g, Order{1, 1})), 1e-12);
}

TEST(PolynomialReproduction, CurvedResidualShrinksWithSpread) {
  auto residual = [](double spread) {
    std::mt19937_64 rng(15);
    return max_interior_whitened(forward_transform(polynomial_grid(Order{3, 3}, 16, 3, spread, rng), Order{3, 3}));
  };
  const double wide = residual(0.2);
  const double narrow = residual(0.05);
  EXPECT_LE(narrow, 1e-4);
  EXPECT_LE(narrow, wide / 20.0);
}

TEST(CoefficientDecay, SmoothSurfaceCoefficientsShrinkAcrossScales) {
  std::mt19937_64 rng(16);
  const HpdGrid g = polynomial_grid(Order{5, 5}, 32, 2, 0.4, rng);
  const WaveletDecomposition dec = forward_transform(g, Order{3, 3});
  double previous = INFINITY;
  for (int j = 3; j <= dec.max_scale(); ++j) {
    double m = 0.0;
    for (const auto& c : dec.whitened[static_cast<std::size_t>(j)].cells()) m = std::max(m, c.frobenius_norm());
    EXPECT_LT(m, previous);
    previous = m;
  }
}

TEST(MaxRelativeError, MeasuresWorstCell) {
  HpdGrid a(1, 2, HpdMatrix::identity(2));
  HpdGrid b = a;
  b(0, 1) = HpdMatrix::scaled_identity(2, 2.0);
  EXPECT_NEAR(max_relative_error(a, b), 0.5, 1e-15);
}

}  // namespace
}  // namespace hpdwav
