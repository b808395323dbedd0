#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include <hpdwav/prediction.hpp>

#include "common/support.hpp"

namespace hpdwav {
namespace {

using Q = boost::multiprecision::cpp_rational;
using testing::diag_hpd;
using testing::random_hpd;
using testing::rel_diff;

// Exact average-interpolation weights along one axis. A polynomial of degree
// w - 1 is fitted to the averages over unit cells [r, r + 1), r < w, and
// integrated over the requested half of cell c.
std::vector<Q> oracle_weights_1d(int w, int c, int half) {
  const std::size_t n = static_cast<std::size_t>(w);
  auto integral = [](Q a, Q b, int k) {
    Q pa = 1, pb = 1;
    for (int e = 0; e <= k; ++e) {
      pa *= a;
      pb *= b;
    }
    return (pb - pa) / Q(k + 1);
  };
  // A[r][k] = ∫_r^{r+1} x^k dx; weights solve A^T u = b.
  std::vector<std::vector<Q>> m(n, std::vector<Q>(n + 1));
  const Q lo = Q(c) + Q(half, 2);
  const Q hi = lo + Q(1, 2);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t r = 0; r < n; ++r) m[k][r] = integral(Q(static_cast<int>(r)), Q(static_cast<int>(r) + 1), static_cast<int>(k));
    m[k][n] = 2 * integral(lo, hi, static_cast<int>(k));
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (m[piv][col] == 0) ++piv;
    std::swap(m[piv], m[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const Q f = m[row][col] / m[col][col];
      for (std::size_t k = col; k <= n; ++k) m[row][k] -= f * m[col][k];
    }
  }
  std::vector<Q> u(n);
  for (std::size_t r = 0; r < n; ++r) u[r] = m[r][n] / m[r][r];
  return u;
}

Q oracle_weight_2d(int w1, int c1, int i1, int w2, int c2, int i2, int l1, int l2) {
  return oracle_weights_1d(w1, c1, i1)[static_cast<std::size_t>(l1)] *
         oracle_weights_1d(w2, c2, i2)[static_cast<std::size_t>(l2)];
}

// The procedural scheme run in exact arithmetic on an indicator field.
Q procedural_weight(const Stencil& st, int child, int l1, int l2) {
  const LinearGeometry<Q, Q> g;
  const auto kids = predict_children(g, st, [&](int k1, int k2) {
    return (k1 - st.start1 == l1 && k2 - st.start2 == l2) ? Q(1) : Q(0);
  });
  return kids[static_cast<std::size_t>(child)];
}

TEST(OracleWeights, KnownOneDimensionalValues) {
  EXPECT_EQ(oracle_weights_1d(1, 0, 0), std::vector<Q>{Q(1)});
  EXPECT_EQ(oracle_weights_1d(3, 1, 0), (std::vector<Q>{Q(1, 8), Q(1), Q(-1, 8)}));
  EXPECT_EQ(oracle_weights_1d(3, 1, 1), (std::vector<Q>{Q(-1, 8), Q(1), Q(1, 8)}));
  EXPECT_EQ(oracle_weights_1d(5, 2, 0), (std::vector<Q>{Q(-3, 128), Q(11, 64), Q(1), Q(-11, 64), Q(3, 128)}));
}

TEST(PredictionWeights, MatchPublishedThreeByThreeTable) {
  const Eigen::MatrixXd w = prediction_weights(3, 3, 0, 0);
  Eigen::Matrix3d expected;
  expected << 1, 8, -1, 8, 64, -8, -1, -8, 1;
  EXPECT_EQ(w * 64.0, Eigen::MatrixXd(expected));
}

TEST(PredictionWeights, MatchPublishedFiveByFiveTable) {
  const Eigen::MatrixXd w = prediction_weights(5, 5, 0, 0);
  const double t[5][5] = {
      {9.0 / 16384, -33.0 / 8192, -3.0 / 128, 33.0 / 8192, -9.0 / 16384},
      {-33.0 / 8192, 121.0 / 4096, 11.0 / 64, -121.0 / 4096, 33.0 / 8192},
      {-3.0 / 128, 11.0 / 64, 1.0, -11.0 / 64, 3.0 / 128},
      {33.0 / 8192, -121.0 / 4096, -11.0 / 64, 121.0 / 4096, -33.0 / 8192},
      {-9.0 / 16384, 33.0 / 8192, 3.0 / 128, -33.0 / 8192, 9.0 / 16384},
  };
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) EXPECT_EQ(w(i, j), t[i][j]) << i << "," << j;
  }
}

TEST(PredictionWeights, HaarOrderIsTrivial) {
  for (int c = 0; c < 4; ++c) EXPECT_EQ(prediction_weights(1, 1, c / 2, c % 2), Eigen::MatrixXd::Ones(1, 1));
}

TEST(PredictionWeights, MatchExactOracleForAllInteriorOrders) {
  for (int n1 : {1, 3, 5, 7, 9}) {
    for (int n2 : {1, 3, 5, 7, 9}) {
      for (int i1 = 0; i1 < 2; ++i1) {
        for (int i2 = 0; i2 < 2; ++i2) {
          const Eigen::MatrixXd w = prediction_weights(n1, n2, i1, i2);
          ASSERT_EQ(w.rows(), n1);
          ASSERT_EQ(w.cols(), n2);
          for (int l1 = 0; l1 < n1; ++l1) {
            for (int l2 = 0; l2 < n2; ++l2) {
              const double q = static_cast<double>(oracle_weight_2d(n1, n1 / 2, i1, n2, n2 / 2, i2, l1, l2));
              EXPECT_NEAR(w(l1, l2), q, 1e-15 * std::max(1.0, std::abs(q)))
                  << "order " << n1 << "," << n2 << " child " << i1 << i2 << " at " << l1 << "," << l2;
            }
          }
          EXPECT_NEAR(w.sum(), 1.0, 1e-13);
        }
      }
    }
  }
}

TEST(PredictionWeights, ChildrenAverageToTheParent) {
  for (int n1 : {1, 3, 5, 7, 9}) {
    for (int n2 : {1, 3, 5, 7, 9}) {
      Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n1, n2);
      for (int c = 0; c < 4; ++c) acc += prediction_weights(n1, n2, c / 2, c % 2) / 4.0;
      Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(n1, n2);
      delta(n1 / 2, n2 / 2) = 1.0;
      EXPECT_LE((acc - delta).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(ProceduralScheme, ExactArithmeticMatchesOracleInTheInterior) {
  for (int n1 : {1, 3, 5}) {
    for (int n2 : {1, 3, 5}) {
      const Stencil st = make_stencil(n1, n2, n1 / 2, n2 / 2, Split::Quad, Order{n1, n2});
      for (int c = 0; c < 4; ++c) {
        const auto off = child_offset(Split::Quad, c);
        for (int l1 = 0; l1 < n1; ++l1) {
          for (int l2 = 0; l2 < n2; ++l2) {
            EXPECT_EQ(procedural_weight(st, c, l1, l2), oracle_weight_2d(n1, n1 / 2, off[0], n2, n2 / 2, off[1], l1, l2))
                << "order " << n1 << "," << n2 << " child " << c;
          }
        }
      }
    }
  }
}

TEST(ProceduralScheme, ExactArithmeticMatchesOracleAtBoundaries) {
  const Order order{5, 3};
  const int cn1 = 6, cn2 = 4;
  for (int k1 = 0; k1 < cn1; ++k1) {
    for (int k2 = 0; k2 < cn2; ++k2) {
      const Stencil st = make_stencil(cn1, cn2, k1, k2, Split::Quad, order);
      ASSERT_EQ(st.w1, k1 == 0 || k1 == cn1 - 1 ? 3 : 5);
      ASSERT_EQ(st.w2, 3);
      ASSERT_EQ(st.start1 + st.c1, k1);
      ASSERT_EQ(st.start2 + st.c2, k2);
      for (int c = 0; c < 4; ++c) {
        const auto off = child_offset(Split::Quad, c);
        const Eigen::MatrixXd sw = stencil_weights(st, c);
        for (int l1 = 0; l1 < st.w1; ++l1) {
          for (int l2 = 0; l2 < st.w2; ++l2) {
            const Q expected = oracle_weight_2d(st.w1, st.c1, off[0], st.w2, st.c2, off[1], l1, l2);
            EXPECT_EQ(procedural_weight(st, c, l1, l2), expected) << k1 << "," << k2 << " child " << c;
            EXPECT_NEAR(sw(l1, l2), static_cast<double>(expected), 1e-12);
          }
        }
      }
    }
  }
}

TEST(ProceduralScheme, BinarySplitsUseOneDimensionalWeights) {
  const Order order{5, 5};
  for (Split split : {Split::X, Split::Y}) {
    for (int k = 0; k < 7; ++k) {
      const bool x = split == Split::X;
      const Stencil st = x ? make_stencil(7, 3, k, 1, split, order) : make_stencil(3, 7, 1, k, split, order);
      EXPECT_EQ(x ? st.w2 : st.w1, 1);
      const int w = x ? st.w1 : st.w2;
      const int c = x ? st.c1 : st.c2;
      for (int child = 0; child < 2; ++child) {
        for (int l = 0; l < w; ++l) {
          const Q expected = oracle_weights_1d(w, c, child)[static_cast<std::size_t>(l)];
          EXPECT_EQ(procedural_weight(st, child, x ? l : 0, x ? 0 : l), expected);
        }
      }
    }
  }
}

TEST(Stencil, ShrinksToLargestOddOrderThatFits) {
  const Stencil st = make_stencil(2, 4, 1, 0, Split::Quad, Order{5, 5});
  EXPECT_EQ(st.w1, 1);
  EXPECT_EQ(st.w2, 3);
  EXPECT_EQ(st.start2, 0);
  EXPECT_EQ(st.c2, 0);
  EXPECT_THROW(make_stencil(2, 2, 0, 0, Split::None, Order{1, 1}), std::invalid_argument);
}

TEST(Order, EvenOrdersAreRejected) {
  EXPECT_THROW(validate_order(Order{2, 3}), std::invalid_argument);
  EXPECT_THROW(validate_order(Order{3, 0}), std::invalid_argument);
  EXPECT_NO_THROW(validate_order(Order{9, 1}));
}

TEST(PolynomialReproduction, CellAveragesOfPolynomialsArePredictedExactly) {
  // Averages of x^a y^b over unit cells, with a < N1 and b < N2.
  auto cell_avg = [](int a, int b, Q x0, Q y0, Q h) {
    auto mono = [](Q lo, Q len, int e) {
      Q p0 = 1, p1 = 1;
      for (int k = 0; k <= e; ++k) {
        p0 *= lo;
        p1 *= lo + len;
      }
      return (p1 - p0) / (Q(e + 1) * len);
    };
    return mono(x0, h, a) * mono(y0, h, b);
  };
  const Order order{5, 3};
  const LinearGeometry<Q, Q> g;
  // Edge windows drop to order 3, so they reproduce only quadratics in x.
  EXPECT_EQ(make_stencil(7, 3, 3, 1, Split::Quad, order).w1, 5);
  for (int k1 : {0, 3, 6}) {
    const Stencil st = make_stencil(7, 3, k1, 1, Split::Quad, order);
    for (int a = 0; a < st.w1; ++a) {
      for (int b = 0; b < st.w2; ++b) {
        const auto kids = predict_children(g, st, [&](int i, int j) { return cell_avg(a, b, Q(i), Q(j), Q(1)); });
        for (int c = 0; c < 4; ++c) {
          const auto off = child_offset(Split::Quad, c);
          const Q x0 = Q(k1) + Q(off[0], 2);
          const Q y0 = Q(1) + Q(off[1], 2);
          EXPECT_EQ(kids[static_cast<std::size_t>(c)], cell_avg(a, b, x0, y0, Q(1, 2)));
        }
      }
    }
  }
}

std::vector<HpdMatrix> diagonal_neighbourhood(int count, std::mt19937_64& rng, std::vector<std::array<double, 3>>& logs) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<HpdMatrix> out;
  for (int k = 0; k < count; ++k) {
    logs.push_back({u(rng), u(rng), u(rng)});
    out.push_back(diag_hpd({std::exp(logs.back()[0]), std::exp(logs.back()[1]), std::exp(logs.back()[2])}));
  }
  return out;
}

TEST(MidpointPrediction, CommutingNeighbourhoodFollowsScalarScheme) {
  std::mt19937_64 rng(1);
  for (Order o : {Order{1, 1}, Order{3, 3}, Order{5, 3}, Order{1, 5}, Order{5, 5}}) {
    std::vector<std::array<double, 3>> logs;
    const auto nb = diagonal_neighbourhood(o.n1 * o.n2, rng, logs);
    const auto dyadic = predict_midpoints_dyadic(nb, o);
    const auto weighted = predict_midpoints_weighted(nb, o);
    for (int c = 0; c < 4; ++c) {
      const Eigen::MatrixXd w = prediction_weights(o.n1, o.n2, c / 2, c % 2);
      for (int e = 0; e < 3; ++e) {
        double expected = 0.0;
        for (int i = 0; i < o.n1; ++i) {
          for (int j = 0; j < o.n2; ++j) expected += w(i, j) * logs[static_cast<std::size_t>(i * o.n2 + j)][static_cast<std::size_t>(e)];
        }
        EXPECT_NEAR(std::log(dyadic[static_cast<std::size_t>(c)](e, e).real()), expected, 1e-8);
        EXPECT_NEAR(std::log(weighted[static_cast<std::size_t>(c)](e, e).real()), expected, 1e-8);
      }
      EXPECT_LE(rel_diff(dyadic[static_cast<std::size_t>(c)].matrix(), weighted[static_cast<std::size_t>(c)].matrix()), 1e-7);
    }
  }
}

TEST(MidpointPrediction, ScalarCaseIsExpOfLinearScheme) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  const Order o{3, 5};
  std::vector<HpdMatrix> nb;
  std::vector<double> logs;
  for (int k = 0; k < 15; ++k) {
    logs.push_back(n(rng));
    nb.push_back(HpdMatrix::scaled_identity(1, std::exp(logs.back())));
  }
  const auto kids = predict_midpoints_dyadic(nb, o);
  for (int c = 0; c < 4; ++c) {
    const Eigen::MatrixXd w = prediction_weights(3, 5, c / 2, c % 2);
    double expected = 0.0;
    for (int k = 0; k < 15; ++k) expected += w(k / 5, k % 5) * logs[static_cast<std::size_t>(k)];
    EXPECT_NEAR(std::log(kids[static_cast<std::size_t>(c)](0, 0).real()), expected, 1e-12);
  }
}

TEST(MidpointPrediction, ChildrenHaveTheParentAsMean) {
  std::mt19937_64 rng(3);
  for (Order o : {Order{3, 3}, Order{5, 3}}) {
    std::vector<HpdMatrix> nb;
    for (int k = 0; k < o.n1 * o.n2; ++k) nb.push_back(random_hpd(3, rng, 0.4));
    const auto kids = predict_midpoints_dyadic(nb, o);
    const HpdMatrix mean = karcher_mean(std::span<const HpdMatrix>(kids.data(), kids.size()));
    EXPECT_LE(rel_diff(mean.matrix(), nb[static_cast<std::size_t>((o.n1 / 2) * o.n2 + o.n2 / 2)].matrix()), 1e-8);
  }
}

TEST(MidpointPrediction, CongruenceEquivariance) {
  std::mt19937_64 rng(4);
  const Order o{3, 3};
  std::vector<HpdMatrix> nb, moved;
  const ComplexMatrix a = testing::random_invertible(3, rng);
  for (int k = 0; k < 9; ++k) {
    nb.push_back(random_hpd(3, rng, 0.4));
    moved.push_back(congruence(a, nb.back()));
  }
  const auto lhs = predict_midpoints_dyadic(moved, o);
  const auto rhs = predict_midpoints_dyadic(nb, o);
  for (int c = 0; c < 4; ++c) {
    EXPECT_LE(rel_diff(lhs[static_cast<std::size_t>(c)].matrix(), congruence(a, rhs[static_cast<std::size_t>(c)]).matrix()), 1e-8);
  }
}

TEST(MidpointPrediction, WeightedAndProceduralDifferAtThirdOrder) {
  // Off the commuting case the weighted mean and the geodesic construction
  // are different points; the gap shrinks faster than the square of the spread.
  const Order o{3, 3};
  auto worst_gap = [&](double spread) {
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<HpdMatrix> nb;
      for (int k = 0; k < 9; ++k) nb.push_back(random_hpd(3, rng, spread));
      const auto a = predict_midpoints_dyadic(nb, o);
      const auto b = predict_midpoints_weighted(nb, o);
      for (int c = 0; c < 4; ++c) {
        worst = std::max(worst, riemann_distance(a[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(c)]));
      }
    }
    return worst;
  };
  const double coarse = worst_gap(0.1);
  const double fine = worst_gap(0.025);
  EXPECT_GT(coarse, 1e-6);
  EXPECT_LE(fine, coarse / 16.0);
}

TEST(MidpointPrediction, RejectsWrongNeighbourhoodSize) {
  const std::vector<HpdMatrix> nb(4, HpdMatrix::identity(2));
  EXPECT_THROW(predict_midpoints_dyadic(nb, Order{3, 3}), std::invalid_argument);
  EXPECT_THROW(predict_midpoints_weighted(nb, Order{3, 3}), std::invalid_argument);
}

TEST(PredictScale, MatchesStencilByStencilPrediction) {
  std::mt19937_64 rng(6);
  const RefinementPyramid p = natural_dyadic_pyramid(3, 2);
  const HpdGrid coarse = testing::random_grid(p.n1(2), p.n2(2), 2, rng, 0.4);
  const HpdGrid fine = predict_scale(coarse, p, 3, Order{3, 3});
  ASSERT_EQ(fine.n1(), 8);
  ASSERT_EQ(fine.n2(), 4);
  // Interior coarse cell (1, 1) of the 4 x 2 grid along x; y has only two cells.
  const Stencil st = make_stencil(4, 2, 1, 1, Split::Quad, Order{3, 3});
  const auto kids = predict_children_weighted(coarse, st);
  for (int c = 0; c < 4; ++c) {
    const auto off = child_offset(Split::Quad, c);
    EXPECT_EQ(fine(2 + off[0], 2 + off[1]), kids[static_cast<std::size_t>(c)]);
  }
}

TEST(PredictScale, InteriorWeightedPathMatchesMidpointHelper) {
  std::mt19937_64 rng(7);
  const HpdGrid coarse = testing::random_grid(5, 5, 3, rng, 0.4);
  const Stencil st = make_stencil(5, 5, 2, 2, Split::Quad, Order{3, 5});
  std::vector<HpdMatrix> nb;
  for (int i = 0; i < st.w1; ++i) {
    for (int j = 0; j < st.w2; ++j) nb.push_back(coarse(st.start1 + i, st.start2 + j));
  }
  const auto a = predict_children_weighted(coarse, st);
  const auto b = predict_midpoints_weighted(nb, Order{3, 5});
  for (int c = 0; c < 4; ++c) EXPECT_LE(rel_diff(a[static_cast<std::size_t>(c)].matrix(), b[static_cast<std::size_t>(c)].matrix()), 1e-10);
}

TEST(Stencil, OneSidedHighOrderWindowsAreCapped) {
  // Shifted windows are kept only while their 1D absolute weight sum stays <= 2.
  const Stencil corner = make_stencil(8, 8, 0, 0, Split::Quad, Order{7, 7});
  EXPECT_EQ(corner.w1, 3);
  EXPECT_EQ(corner.w2, 3);
  const Stencil near = make_stencil(16, 16, 1, 8, Split::Quad, Order{9, 9});
  EXPECT_EQ(near.w1, 5);
  EXPECT_EQ(near.c1, 1);
  EXPECT_EQ(near.w2, 9);
  const Stencil inner = make_stencil(16, 16, 3, 8, Split::Quad, Order{7, 7});
  EXPECT_EQ(inner.w1, 7);
  EXPECT_EQ(inner.c1, 3);
  for (int k = 0; k < 16; ++k) {
    const Stencil st = make_stencil(16, 16, k, k, Split::Quad, Order{9, 9});
    for (int c = 0; c < 4; ++c) EXPECT_LE(stencil_weights(st, c).cwiseAbs().sum(), 4.0 + 1e-12);
  }
  const Stencil five = make_stencil(8, 8, 0, 7, Split::Quad, Order{5, 5});
  EXPECT_EQ(five.w1, 3);
  EXPECT_EQ(five.w2, 3);
  EXPECT_EQ(five.c2, 2);
  const Stencil five_in = make_stencil(8, 8, 1, 6, Split::Quad, Order{5, 5});
  EXPECT_EQ(five_in.w1, 5);
  EXPECT_EQ(five_in.c1, 1);
}

TEST(PredictScale, HighOrderPredictionsStayFinite) {
  std::mt19937_64 rng(8);
  const RefinementPyramid p = natural_dyadic_pyramid(4, 4);
  const HpdGrid coarse = testing::random_grid(8, 8, 3, rng, 0.5);
  const HpdGrid fine = predict_scale(coarse, p, 4, Order{9, 9});
  for (const auto& m : fine.cells()) EXPECT_TRUE(m.matrix().allFinite());
}

}  // namespace
}  // namespace hpdwav
