#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <jamison/construction.hpp>

#include "oracles.hpp"

using namespace jamison;

namespace {

const shift_construction& certified() {
  static const shift_construction c =
      build_construction(index_sequence::factorials(8), 8, 8, weight_schedule::linear(8));
  return c;
}

std::vector<double> random_thetas(std::mt19937_64& g, int L) {
  std::vector<double> t;
  for (int l = 0; l < L; ++l) t.push_back(oracle::uniform(g, 0.02, 0.98));
  return t;
}

/// Eigenvector of fiber 1 for lambda_n as a dense vector of length L.
vector chain_vector(const shift_construction& c, int n, int L) {
  vector u = vector::Zero(L);
  const auto ch = eigenvector_chain(c, n);
  for (int m = 1; m <= n; ++m) u(m - 1) = ch.coeffs[m - 1];
  return u;
}

}  // namespace

TEST(Construction, GoldenFactorialGaps) {
  const auto& c = certified();
  const std::vector<double> golden{1.0,
                                   2.2174347015209356e-12,
                                   1.2292541089267319e-24,
                                   2.2714922143305614e-37,
                                   1.5740267512503218e-50,
                                   4.362876899802036e-64,
                                   5.038747192216581e-78,
                                   2.493993942099103e-92};
  ASSERT_EQ(c.levels(), 8);
  for (int l = 1; l <= 8; ++l) EXPECT_NEAR(c.gap(l) / golden[l - 1], 1.0, 1e-6) << l;
  EXPECT_EQ(c.anchors, (std::vector<int>{0, 1, 1, 2, 1, 2, 3, 1}));
  EXPECT_TRUE(c.certified());
  ASSERT_EQ(c.budgets.size(), 7u);
  for (const auto& b : c.budgets) {
    EXPECT_TRUE(b.gap_ratio_ok);
    EXPECT_TRUE(b.eigvec_budget_ok);
    EXPECT_TRUE(b.tail_sum_ok);
  }
}

TEST(Construction, AnglesDistinctAndInsideArc) {
  const auto& c = certified();
  EXPECT_NEAR(chord_from_turns(c.theta_double(1)), 1.0 / 3.0, 1e-15);
  for (int a = 1; a <= c.levels(); ++a) {
    EXPECT_GT(c.thetas[a - 1], 0);
    EXPECT_LE(c.thetas[a - 1], c.thetas[0]);
    for (int b = a + 1; b <= c.levels(); ++b) EXPECT_NE(c.thetas[a - 1], c.thetas[b - 1]);
  }
}

TEST(Construction, GapsMatchAnchorDistance) {
  const auto& c = certified();
  for (int l = 2; l <= c.levels(); ++l) {
    const double d = static_cast<double>(precise_real(c.thetas[l - 1] - c.thetas[fiber_map(l) - 1]));
    EXPECT_NEAR(c.gap(l) / (2.0 * std::sin(std::numbers::pi * std::abs(d))), 1.0, 1e-12);
  }
}

TEST(Construction, SeparatedSequenceIsInfeasible) {
  try {
    build_construction(index_sequence::integers(100), 8, 100, weight_schedule::linear(8));
    FAIL();
  } catch (const budget_infeasible& e) {
    EXPECT_EQ(e.code(), errc::budget_infeasible);
    EXPECT_LE(e.level(), 3);
  }
}

TEST(Construction, WeightsTooShort) {
  try {
    build_construction(index_sequence::factorials(8), 8, 8, weight_schedule::linear(5));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::weight_list_too_short);
  }
}

TEST(Construction, Preconditions) {
  EXPECT_THROW(build_construction(index_sequence::factorials(8), 1, 8, weight_schedule::linear(8)), error);
  EXPECT_THROW(build_construction(index_sequence::factorials(8), 4, 9, weight_schedule::linear(8)), error);
  EXPECT_THROW(build_construction(index_sequence({1.0, 2.5}, sequence_kind::real), 3, 2, weight_schedule::linear(4)),
               error);
}

TEST(Construction, AlphaFormula) {
  const auto c = oracle::synthetic_construction({0.1, 0.13, 0.2, 0.31});
  for (int i = 1; i <= 3; ++i)
    for (int l = 1; l < 4; ++l)
      EXPECT_NEAR(c.alpha(i, l), static_cast<double>(l) / std::ldexp(1.0, i) * c.gap(l + 1) / c.gap(l), 1e-15);
}

TEST(PowerCoefficient, MatchesDensePowersOnSyntheticOperators) {
  std::mt19937_64 g(77);
  for (int trial = 0; trial < 12; ++trial) {
    const int L = 2 + trial % 7;
    const int I = 1 + trial % 3;
    const auto c = oracle::synthetic_construction(random_thetas(g, L));
    const matrix T = assemble_operator(c, L, I).dense();
    for (int n = 0; n <= 12; ++n) {
      const matrix Tn = oracle::dense_power(T, n);
      for (int i = 1; i <= I; ++i)
        for (int k = 1; k <= L; ++k)
          for (int l = 1; l <= L; ++l) {
            const cplx ref = Tn(truncated_operator::index(i, k, I), truncated_operator::index(i, l, I));
            const cplx got = power_coefficient(c, k, l, i, n);
            EXPECT_LE(std::abs(got - ref), 1e-10 * std::max(1.0, std::abs(ref))) << L << " " << n;
          }
    }
  }
}

TEST(PowerCoefficient, MatchesDensePowersOnCertifiedConstruction) {
  const auto& c = certified();
  const matrix T = assemble_operator(c, 8, 2).dense();
  for (int n : {1, 2, 5, 12}) {
    const matrix Tn = oracle::dense_power(T, n);
    for (int k = 1; k <= 8; ++k)
      for (int l = 1; l <= 8; ++l) {
        const cplx ref = Tn(truncated_operator::index(2, k, 2), truncated_operator::index(2, l, 2));
        EXPECT_LE(std::abs(power_coefficient(c, k, l, 2, n) - ref), 1e-10 * std::max(1.0, std::abs(ref)));
      }
  }
  EXPECT_THROW(power_coefficient(c, 0, 1, 1, 1), error);
  EXPECT_EQ(power_coefficient(c, 3, 1, 1, 5), cplx(0.0));
}

TEST(EigenvectorChain, FirstTwoLevels) {
  const auto& c = certified();
  const auto u1 = eigenvector_chain(c, 1);
  ASSERT_EQ(u1.coeffs.size(), 1u);
  EXPECT_EQ(u1.coeffs[0], cplx(1.0));
  const auto u2 = eigenvector_chain(c, 2);
  const cplx expect = c.lambda_difference(2, 1) / (c.schedule.fiber(1, 1) * c.gap(2));
  EXPECT_NEAR(std::abs(u2.coeffs[1] - expect), 0.0, 1e-15 * std::abs(expect));
  EXPECT_THROW(eigenvector_chain(c, 9), error);
}

TEST(EigenvectorChain, ResidualOnSyntheticOperators) {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int L = 2 + trial % 6;
    const auto c = oracle::synthetic_construction(random_thetas(g, L));
    const matrix T = assemble_operator(c, L, 1).dense();
    for (int n = 1; n <= L; ++n) {
      const vector u = chain_vector(c, n, L);
      const vector r = T * u - c.lambda(n) * u;
      EXPECT_LE(r.norm(), 1e-12 * u.norm()) << n;
    }
  }
}

TEST(EigenvectorChain, IncrementMatchesDirectDifference) {
  std::mt19937_64 g(6);
  const auto c = oracle::synthetic_construction(random_thetas(g, 7));
  for (int n = 2; n <= 7; ++n) {
    const vector d = chain_vector(c, n, 7) - chain_vector(c, fiber_map(n), 7);
    EXPECT_NEAR(eigenvector_increment(c, n).total, d.norm(), 1e-10 * std::max(1.0, d.norm()));
  }
}

TEST(EigenvectorChain, CauchyEstimateOnCertifiedConstruction) {
  const auto& c = certified();
  for (int n = 3; n <= 8; ++n) {
    const auto inc = eigenvector_increment(c, n);
    EXPECT_LE(inc.total, std::ldexp(1.0, -n)) << n;
    EXPECT_NEAR(inc.total * inc.total, inc.a_norm * inc.a_norm + inc.b_norm * inc.b_norm, 1e-30);
  }
}

TEST(TailSum, MatchesDirectSymmetricSums) {
  const auto& c = certified();
  for (int l = 2; l <= 6; ++l) {
    double worst = 0.0;
    for (std::size_t p = 0; p < c.horizon; ++p) {
      const int n = static_cast<int>(c.seq[p]);
      double s = 0.0, wprod = 1.0;
      for (int k = l - 1; k >= 1; --k) {
        wprod *= c.schedule.level(k);
        if (l - k > n) break;
        std::vector<cplx> xs;
        for (int q = k; q <= l; ++q) xs.push_back(c.lambda(q));
        s += wprod * c.gap(l) / c.gap(k) * std::abs(symmetric_sum(xs, n - (l - k)));
      }
      worst = std::max(worst, s);
    }
    EXPECT_NEAR(tail_sum_max(c, l, c.horizon), worst, 1e-9 * std::max(worst, 1e-300)) << l;
  }
}

TEST(PowerBound, CertifiedConstructionPasses) {
  const auto rep = verify_partial_power_bound(certified(), 8, 2, 8, norm_kind::two);
  ASSERT_EQ(rep.rows.size(), 8u);
  EXPECT_TRUE(rep.all_pass);
  EXPECT_FALSE(rep.anomaly);
  for (const auto& r : rep.rows) {
    EXPECT_LE(r.norm_diff, 1.0 + 1e-8);
    EXPECT_LE(r.norm_T, 2.0 + 1e-8);
    EXPECT_GE(r.analytic_bound, r.norm_diff - 1e-8);
  }
}

TEST(PowerBound, OtherNormsAgreeInOrder) {
  const auto one = verify_partial_power_bound(certified(), 8, 2, 8, norm_kind::one);
  const auto inf = verify_partial_power_bound(certified(), 8, 2, 8, norm_kind::inf);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_LE(one.rows[k].norm_diff, 1.0 + 1e-8);
    EXPECT_LE(inf.rows[k].norm_diff, 1.0 + 1e-8);
  }
}

TEST(PowerBound, DiagonalOperatorHasNoDeviation) {
  const auto c = oracle::synthetic_construction({0.1});
  const auto op = assemble_operator(c, 1, 3);
  EXPECT_EQ(op.superband.size(), 0);
  const auto rep = measure_power_deviation(op, index_sequence::factorials(5), 5, norm_kind::two);
  for (const auto& r : rep.rows) {
    EXPECT_LE(r.norm_diff, 1e-12);
    EXPECT_NEAR(r.norm_T, 1.0, 1e-12);
  }
}

TEST(PowerBound, RequiresCertifiedBudgets) {
  auto c = certified();
  c.budgets[2].tail_sum_ok = false;
  try {
    verify_partial_power_bound(c, 8, 2, 8, norm_kind::two);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::budgets_not_certified);
  }
  EXPECT_THROW(verify_partial_power_bound(certified(), 8, 2, 9, norm_kind::two), error);
}

TEST(Assemble, Structure) {
  const auto c = oracle::synthetic_construction({0.1, 0.15, 0.3});
  const auto op = assemble_operator(c, 3, 2);
  EXPECT_EQ(op.dimension(), 6);
  const matrix T = op.dense();
  EXPECT_EQ(level_bandwidth(T, 2), 1);
  for (int l = 1; l <= 3; ++l)
    for (int i = 1; i <= 2; ++i) {
      EXPECT_EQ(T(truncated_operator::index(i, l, 2), truncated_operator::index(i, l, 2)), c.lambda(l));
      if (l >= 2)
        EXPECT_EQ(T(truncated_operator::index(i, l - 1, 2), truncated_operator::index(i, l, 2)), cplx(c.alpha(i, l - 1)));
    }
  EXPECT_EQ(T(truncated_operator::index(1, 1, 2), truncated_operator::index(2, 2, 2)), cplx(0.0));
  EXPECT_LE((op.fiber_block(2) - T({1, 3, 5}, {1, 3, 5})).norm(), 0.0);
  EXPECT_THROW(assemble_operator(c, 4, 2), error);
  EXPECT_THROW(assemble_operator(c, 2, 0), error);
}

TEST(Certify, RecomputesFromAngles) {
  auto c = certified();
  c.gaps.assign(c.gaps.size(), 0.5);
  c.budgets.clear();
  certify(c);
  EXPECT_TRUE(c.certified());
  EXPECT_EQ(c.gaps, certified().gaps);
}
