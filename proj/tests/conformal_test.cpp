#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "ctmlab/conformal.hpp"
#include "support/reference.hpp"

namespace {

TEST(Conformal, ClosedFormExamples) {
  EXPECT_DOUBLE_EQ(ctmlab::smoothed_pvalue(1, 1, 1, 0.37), 0.37);
  EXPECT_DOUBLE_EQ(ctmlab::smoothed_pvalue(3, 10, 1, 0.5), 0.15);
  EXPECT_DOUBLE_EQ(ctmlab::smoothed_pvalue(3, 10, 0, 0.0), 0.3);
}

TEST(Conformal, ContractViolations) {
  EXPECT_THROW(ctmlab::smoothed_pvalue(0, 0, 0, 0.5), ctmlab::ContractError);
  EXPECT_THROW(ctmlab::smoothed_pvalue(4, 3, 1, 0.5), ctmlab::ContractError);
  EXPECT_THROW(ctmlab::smoothed_pvalue(0, 3, 1, 0.5), ctmlab::ContractError);
  EXPECT_THROW(ctmlab::smoothed_pvalue(3, 3, 0, 0.5), ctmlab::ContractError);
  EXPECT_THROW(ctmlab::smoothed_pvalue(1, 3, 2, 0.5), ctmlab::ContractError);
  EXPECT_THROW(ctmlab::smoothed_pvalue(1, 3, 1, 1.5), ctmlab::ContractError);
}

TEST(Conformal, ConstantSequencesGiveTau) {
  for (std::uint8_t bit : {0, 1}) {
    const auto seq = ctmlab::make_sequence(std::vector<std::uint8_t>(50, bit));
    ctmlab::RandomStream s(3, ctmlab::Substream::tie_breaking);
    const auto pv = ctmlab::pvalue_sequence(seq, s);
    for (std::size_t i = 0; i < pv.size(); ++i) EXPECT_DOUBLE_EQ(pv.pvalues[i], pv.taus[i]);
  }
}

TEST(Conformal, RangeProperty) {
  ctmlab::ExperimentConfig c;
  c.seed = 11;
  const auto seq = ctmlab::generate_sequence(c);
  const auto pv = ctmlab::pvalue_sequence(seq, c.seed);
  for (std::size_t n = 1; n <= seq.size(); ++n) {
    const double ratio = double(seq.k(n)) / double(n);
    const double p = pv.pvalues[n - 1];
    if (seq.x(n) == 1) {
      ASSERT_GE(p, 0.0);
      ASSERT_LE(p, ratio);
    } else {
      ASSERT_GE(p, ratio);
      ASSERT_LE(p, 1.0);
    }
  }
}

// Exhaustive: every binary sequence of length <= 10, shared taus.
TEST(Conformal, ClosedFormMatchesEnumeration) {
  ctmlab::RandomStream s(99, ctmlab::Substream::tie_breaking);
  std::vector<double> taus(10);
  for (double& t : taus) t = s.uniform();
  taus[0] = 0.0;
  taus[1] = 1.0;
  for (std::size_t len = 1; len <= 10; ++len) {
    for (std::uint32_t bits = 0; bits < (1u << len); ++bits) {
      std::vector<std::uint8_t> x(len);
      for (std::size_t i = 0; i < len; ++i) x[i] = (bits >> i) & 1u;
      const auto seq = ctmlab::make_sequence(x);
      for (std::size_t n = 1; n <= len; ++n) {
        ASSERT_EQ(ctmlab::smoothed_pvalue(seq.k(n), n, seq.x(n), taus[n - 1]),
                  ctmlab::testing::brute_force_pvalue(x, n, taus[n - 1]));
      }
    }
  }
}

TEST(Conformal, UniformAndUncorrelatedUnderIid) {
  for (double pi : {0.1, 0.25, 0.5}) {
    std::vector<double> pooled;
    double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
    std::size_t pairs = 0;
    for (std::uint32_t r = 0; r < 50; ++r) {
      ctmlab::ExperimentConfig c;
      c.pi0 = c.pi1 = pi;
      c.n_total = c.n_pre = 400;
      ctmlab::RandomStream data(5, ctmlab::Substream::observations, r);
      ctmlab::RandomStream tau(5, ctmlab::Substream::tie_breaking, r);
      const auto pv = ctmlab::pvalue_sequence(ctmlab::generate_sequence(c, data), tau);
      pooled.insert(pooled.end(), pv.pvalues.begin(), pv.pvalues.end());
      for (std::size_t i = 0; i + 1 < pv.size(); ++i) {
        const double a = pv.pvalues[i], b = pv.pvalues[i + 1];
        sx += a, sy += b, sxy += a * b, sxx += a * a, syy += b * b;
        ++pairs;
      }
    }
    EXPECT_GT(ctmlab::testing::ks_uniform(pooled).pvalue, 0.01) << "pi=" << pi;
    const double m = double(pairs);
    const double corr = (sxy / m - sx / m * sy / m) /
                        std::sqrt((sxx / m - sx / m * sx / m) * (syy / m - sy / m * sy / m));
    EXPECT_LT(std::abs(corr), 3.0 / std::sqrt(m)) << "pi=" << pi;
  }
}

TEST(Conformal, KsDetectsNonUniformSample) {
  std::vector<double> skewed;
  for (int i = 0; i < 2000; ++i) skewed.push_back(std::pow((i + 0.5) / 2000.0, 1.2));
  EXPECT_LT(ctmlab::testing::ks_uniform(skewed).pvalue, 0.01);
}

}  // namespace
