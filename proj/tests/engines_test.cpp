#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "ctmlab/engines.hpp"
#include "support/reference.hpp"

namespace {

using ctmlab::ExperimentConfig;
using ctmlab::PValueSequence;

PValueSequence pvalues(std::vector<double> p) {
  PValueSequence out;
  out.taus = p;
  out.pvalues = std::move(p);
  return out;
}

std::vector<double> random_pvalues(std::uint64_t seed, std::size_t n) {
  ctmlab::RandomStream s(seed, 9);
  std::vector<double> p(n);
  for (double& v : p) v = s.uniform();
  return p;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// ----- Sleeper/Chooser -----

TEST(SleeperChooser, HandComputedTwoSteps) {
  const std::vector<double> p{0.3, 0.3};
  const double f_sum = 1.0 + 2.0 + 0.5 + 1.0;  // f_{1/3,1/3}, f_{1/3,2/3}, f_{2/3,1/3}, f_{2/3,2/3} at 0.3
  const double expected = 0.5 + 0.5 / 4 * f_sum;
  ASSERT_DOUBLE_EQ(expected, 1.0625);
  ASSERT_NEAR(ctmlab::testing::naive_sleeper_chooser(p, 0.5, 3)[1], expected, 1e-15);
  ASSERT_NEAR(ctmlab::testing::markov_mixture(p, 0.5, 3), expected, 1e-15);

  const auto t = ctmlab::sleeper_chooser(pvalues(p), 0.5, 3);
  EXPECT_NEAR(std::pow(10.0, t.at(2)), expected, 1e-14);
}

TEST(SleeperChooser, FirstValueIsOneAndSleeperIsFloor) {
  for (double R : {0.001, 0.1, 0.7}) {
    for (std::size_t G : {2u, 5u, 100u}) {
      const auto p = random_pvalues(G, 200);
      const auto t = ctmlab::sleeper_chooser(pvalues(p), R, G);
      EXPECT_NEAR(t.at(1), 0.0, 1e-15);
      for (std::size_t n = 1; n <= t.size(); ++n) {
        ASSERT_GE(t.at(n), double(n - 1) * std::log10(1 - R) - 1e-12);
      }
    }
  }
}

TEST(SleeperChooser, RejectsBadParameters) {
  EXPECT_THROW(ctmlab::SleeperChooser(0.0, 10), ctmlab::ParameterError);
  EXPECT_THROW(ctmlab::SleeperChooser(1.0, 10), ctmlab::ParameterError);
  EXPECT_THROW(ctmlab::SleeperChooser(0.1, 1), ctmlab::ParameterError);
}

TEST(SleeperChooser, SharingConservesCapital) {
  ctmlab::SleeperChooser engine(0.3, 7);
  for (double p : random_pvalues(5, 100)) {
    engine.bet(p);
    const double before = engine.stored_total();
    engine.share();
    ASSERT_LE(rel_diff(engine.stored_total(), before), 1e-12);
  }
}

TEST(SleeperChooser, SleepingAccountDecaysGeometrically) {
  const double R = 0.01;
  ctmlab::SleeperChooser engine(R, 10);
  const auto p = random_pvalues(8, 3000);
  for (std::size_t n = 1; n <= p.size(); ++n) {
    engine.step(p[n - 1]);
    const double log10_sleeping = std::log10(engine.sleeping()) + engine.log10_offset();
    ASSERT_NEAR(log10_sleeping, double(n) * std::log10(1 - R), 1e-9);
  }
  for (double v : engine.active()) EXPECT_GE(v, 0.0);
}

TEST(SleeperChooser, MatchesPlainTranscription) {
  for (std::size_t G : {2u, 4u, 11u}) {
    const auto p = random_pvalues(100 + G, 150);
    const auto ref = ctmlab::testing::naive_sleeper_chooser(p, 0.05, G);
    const auto t = ctmlab::sleeper_chooser(pvalues(p), 0.05, G);
    for (std::size_t n = 1; n <= p.size(); ++n) ASSERT_LE(rel_diff(std::pow(10.0, t.at(n)), ref[n - 1]), 1e-12);
  }
}

// Constant p = 0.05 with G = 10 lets account (0.1, 0.9) grow by 9x per step,
// crossing the 1e100 rescale threshold well before double overflow.
TEST(SleeperChooser, RescalingIsTransparent) {
  const std::vector<double> p(300, 0.05);
  const auto ref = ctmlab::testing::naive_sleeper_chooser(p, 0.2, 10);
  ctmlab::SleeperChooser engine(0.2, 10);
  for (std::size_t n = 1; n <= p.size(); ++n) {
    const double v = engine.step(p[n - 1]);
    ASSERT_NEAR(v, std::log10(ref[n - 1]), 1e-10);
  }
  EXPECT_GT(engine.log10_offset(), 100.0);
}

TEST(SleeperChooser, EqualsMarkovChainMixture) {
  for (std::size_t G : {2u, 3u}) {
    for (double R : {0.1, 0.5}) {
      for (std::size_t N = 1; N <= 8; ++N) {
        const auto p = random_pvalues(1000 * G + N, N);
        const auto t = ctmlab::sleeper_chooser(pvalues(p), R, G);
        ASSERT_LE(rel_diff(std::pow(10.0, t.at(N)), ctmlab::testing::markov_mixture(p, R, G)), 1e-10)
            << "G=" << G << " R=" << R << " N=" << N;
      }
    }
  }
}

// ----- Simple Jumper -----

TEST(SimpleJumper, NeutralPValues) {
  const auto t = ctmlab::simple_jumper(pvalues(std::vector<double>(500, 0.5)), 0.01);
  for (double v : t.log10_values) ASSERT_NEAR(v, 0.0, 1e-13);
}

TEST(SimpleJumper, FirstValueIsOne) {
  for (double p : {0.0, 0.01, 0.3, 0.99, 1.0}) {
    EXPECT_NEAR(ctmlab::simple_jumper(pvalues({p}), 0.2).at(1), 0.0, 1e-15);
  }
}

TEST(SimpleJumper, FixedMixtureWithoutJumps) {
  ctmlab::SimpleJumper engine(0.0);
  engine.step(0.1);
  const double s2 = std::pow(10.0, engine.step(0.1));
  EXPECT_NEAR(s2, (1.4 * 1.4 + 1.0 + 0.6 * 0.6) / 3.0, 1e-14);
  EXPECT_NEAR(s2, 1.10667, 5e-6);
}

TEST(SimpleJumper, RejectsBadRate) {
  EXPECT_THROW(ctmlab::simple_jumper(pvalues({0.5}), 0.0), ctmlab::ParameterError);
  EXPECT_THROW(ctmlab::simple_jumper(pvalues({0.5}), 1.0), ctmlab::ParameterError);
}

// Formulation that jumps before betting: jump with the previous total, then
// bet. Must give the same trajectory as bet -> emit -> jump.
TEST(SimpleJumper, JumpBeforeBetFormulationAgrees) {
  const double J = 0.05;
  const auto p = random_pvalues(77, 400);
  double c[3] = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  double total = 1.0;
  const auto t = ctmlab::simple_jumper(pvalues(p), J);
  for (std::size_t n = 1; n <= p.size(); ++n) {
    for (double& ce : c) ce = (1 - J) * ce + J * total / 3;
    const double eps[3] = {-1, 0, 1};
    total = 0;
    for (int e = 0; e < 3; ++e) total += c[e] *= 1 + eps[e] * (p[n - 1] - 0.5);
    ASSERT_NEAR(t.at(n), std::log10(total), 1e-11);
  }
}

// ----- optimal / pseudo conformal processes -----

TEST(ConformalMartingales, NoBettingBeforeChange) {
  ExperimentConfig c;
  c.seed = 2;
  const auto seq = ctmlab::generate_sequence(c);
  const auto pv = ctmlab::pvalue_sequence(seq, c.seed);
  const auto opt = ctmlab::optimal_ctm(pv, c);
  const auto pseudo = ctmlab::pseudo_ctm(seq, pv, c);
  for (std::size_t n = 1; n <= c.n_pre; ++n) {
    ASSERT_EQ(opt.at(n), 0.0);
    ASSERT_EQ(pseudo.at(n), 0.0);
  }
  for (double v : opt.log10_values) ASSERT_TRUE(std::isfinite(v));
  for (double v : pseudo.log10_values) ASSERT_TRUE(std::isfinite(v));
}

TEST(ConformalMartingales, NoChangeMeansNoEvidence) {
  ExperimentConfig c;
  c.pi0 = c.pi1 = 0.25;
  const auto seq = ctmlab::generate_sequence(c);
  const auto opt = ctmlab::optimal_ctm(ctmlab::pvalue_sequence(seq, c.seed), c);
  for (double v : opt.log10_values) ASSERT_NEAR(v, 0.0, 1e-10);
}

TEST(ConformalMartingales, PseudoSingleStep) {
  ExperimentConfig c;
  c.n_total = 10;
  c.n_pre = 9;
  const auto seq = ctmlab::make_sequence({1, 1, 0, 0, 1, 0, 1, 0, 0, 1});
  ASSERT_EQ(seq.k(10), 5u);
  std::vector<double> p(10, 0.5);
  p[9] = 0.3;
  const auto t = ctmlab::pseudo_ctm(seq, pvalues(p), c);
  EXPECT_EQ(t.at(9), 0.0);
  EXPECT_NEAR(t.at(10), std::log10(0.8), 1e-15);
  EXPECT_THROW(ctmlab::pseudo_ctm(seq, pvalues({0.5}), c), ctmlab::ContractError);
}

}  // namespace
