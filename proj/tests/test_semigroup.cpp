#include <gtest/gtest.h>

#include <random>

#include <jamison/semigroup.hpp>

#include "oracles.hpp"

using namespace jamison;

namespace {

const shift_construction& certified() {
  static const shift_construction c =
      build_construction(index_sequence::factorials(8), 8, 8, weight_schedule::linear(8));
  return c;
}

const matrix_semigroup& certified_semigroup() {
  static const matrix_semigroup sg = principal_log(assemble_operator(certified(), 8, 2));
  return sg;
}

index_sequence half_times(const index_sequence& seq) {
  std::vector<double> t{1.0};
  for (std::size_t k = 1; k < seq.size(); ++k) t.push_back(seq[k] + 0.5);
  return index_sequence(t, sequence_kind::real);
}

double relative(const matrix& a, const matrix& b) { return spectral_norm(a - b).upper / spectral_norm(b).value; }

}  // namespace

TEST(PrincipalLog, RoundTripOnCertifiedConstruction) {
  const auto& sg = certified_semigroup();
  EXPECT_EQ(sg.method(), log_method::inverse_scaling_squaring);
  EXPECT_LE(relative(expm(sg.generator()), sg.base().dense()), 1e-10);
}

TEST(PrincipalLog, EigendecompositionRouteOnSeparatedSpectrum) {
  vector diag(3), band(2);
  diag << unimodular(0.0), unimodular(0.05), unimodular(0.1);
  band << 0.1, 0.1;
  const auto op = make_operator(diag, band, 3, 1);
  const auto sg = principal_log(op);
  EXPECT_EQ(sg.method(), log_method::eigendecomposition);
  EXPECT_LE(relative(expm(sg.generator()), op.dense()), 1e-12);
  EXPECT_LE((sg.generator() - oracle::eigen_logm(op.dense())).norm(), 1e-10);
  EXPECT_TRUE(generator_spectrum_check(sg).pass);
}

TEST(PrincipalLog, MatchesEigenOracleOnCertifiedConstruction) {
  const auto& sg = certified_semigroup();
  const matrix G = sg.generator();
  const matrix ref = oracle::eigen_logm(sg.base().dense());
  EXPECT_LE((expm(ref) - sg.base().dense()).norm(), 1e-6);
  EXPECT_LE(relative(expm(G), sg.base().dense()), 1e-10);
}

TEST(PrincipalLog, Errors) {
  vector diag(2), band(1);
  diag << unimodular(0.0), unimodular(0.3);
  band << 0.1;
  try {
    principal_log(make_operator(diag, band, 2, 1));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::spectrum_outside_domain);
  }
  diag << unimodular(0.01), unimodular(0.01);
  try {
    principal_log(make_operator(diag, band, 2, 1));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_spectrum);
  }
  band << 0.0;
  EXPECT_NO_THROW(principal_log(make_operator(diag, band, 2, 1)));
  EXPECT_THROW(make_operator(diag, band, 3, 1), error);
}

TEST(Semigroup, EvolveIdentitiesAndLaw) {
  const auto& sg = certified_semigroup();
  const matrix T = sg.base().dense();
  EXPECT_EQ(sg.evolve(0.0), matrix::Identity(T.rows(), T.cols()));
  EXPECT_LE(relative(sg.evolve(1.0), T), 1e-10);
  EXPECT_LE(relative(sg.evolve(2.0), T * T), 1e-10);
  for (auto [s, t] : {std::pair{0.3, 1.7}, std::pair{0.5, 0.5}, std::pair{2.25, 3.5}})
    EXPECT_LE(relative(sg.evolve(s) * sg.evolve(t), sg.evolve(s + t)), 1e-10);
  EXPECT_THROW(sg.evolve(std::numeric_limits<double>::infinity()), error);
}

TEST(Semigroup, LatticeMatchesPowers) {
  const auto rep = check_lattice(certified_semigroup(), certified().seq, 8);
  ASSERT_EQ(rep.rows.size(), 8u);
  EXPECT_TRUE(rep.all_pass);
  for (const auto& r : rep.rows) EXPECT_LE(r.relative_error, 1e-8) << r.k;
}

TEST(Semigroup, PerturbedGeneratorFailsLattice) {
  const auto& sg = certified_semigroup();
  std::mt19937_64 g(13);
  matrix noise = matrix::Zero(sg.generator().rows(), sg.generator().cols());
  for (Eigen::Index r = 0; r < noise.rows(); ++r)
    for (Eigen::Index c = 0; c < noise.cols(); ++c) noise(r, c) = cplx(oracle::uniform(g, -1, 1), oracle::uniform(g, -1, 1));
  const auto bad = sg.with_generator(sg.generator() + 1e-3 * noise);
  EXPECT_FALSE(check_lattice(bad, certified().seq, 8).all_pass);
}

TEST(Semigroup, GeneratorSpectrum) {
  const auto rep = generator_spectrum_check(certified_semigroup());
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.eigenvalues.size(), 16u);
  EXPECT_LE(rep.max_real_part, 1e-9);
  EXPECT_LE(rep.spectral_mapping_deviation, 1e-9);
}

TEST(Semigroup, ShiftNormBelowOneThird) {
  EXPECT_LT(shift_norm(certified_semigroup().base()), 1.0 / 3.0);
}

TEST(Semigroup, BoundedAlongHalfTimes) {
  const auto realseq = half_times(certified().seq);
  const auto rep = bounded_along(certified_semigroup(), realseq, 8);
  EXPECT_TRUE(rep.all_pass);
  EXPECT_GE(rep.M0, rep.M0_grid);
  EXPECT_GE(rep.M0_grid, 1.0 - 1e-12);
  for (const auto& r : rep.rows) {
    EXPECT_EQ(r.n_k, std::floor(r.t_k));
    EXPECT_LE(r.norm_t, rep.M0 * r.norm_n * (1 + 1e-6));
  }
  EXPECT_THROW(bounded_along(certified_semigroup(), index_sequence({1.0, 2.5}, sequence_kind::real), 3), error);
}
