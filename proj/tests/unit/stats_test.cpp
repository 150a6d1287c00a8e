#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "vqc/errors.hpp"
#include "vqc/rng.hpp"
#include "vqc/stats/correlation.hpp"
#include "vqc/stats/kernel_ridge.hpp"
#include "vqc/stats/kfold.hpp"
#include "vqc/stats/logistic.hpp"
#include "vqc/stats/moments.hpp"
#include "vqc/stats/wilcoxon.hpp"

using namespace vqc;
using namespace vqc::stats;

namespace {

std::vector<double> iota_vec(int n, double start = 1.0) {
  std::vector<double> v(n);
  std::iota(v.begin(), v.end(), start);
  return v;
}

std::vector<double> normals(Rng& rng, int n, double sigma = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal(0.0, sigma);
  return v;
}

// Textbook Spearman on distinct values: 1 - 6 sum d^2 / (n (n^2 - 1)).
double spearman_by_hand(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const double n = static_cast<double>(x.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

// Two-sided exact p by enumerating every sign pattern of the ranks.
double wilcoxon_enumerated(const std::vector<double>& d) {
  std::vector<double> mag;
  for (double v : d) mag.push_back(std::abs(v));
  const auto r = average_ranks(mag);
  double w = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > 0) w += r[i];
  const double total = std::accumulate(r.begin(), r.end(), 0.0);
  const double centre = total / 2.0;
  const std::size_t n = d.size();
  int extreme = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) s += r[i];
    if (std::abs(s - centre) >= std::abs(w - centre) - 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(std::size_t{1} << n);
}

}  // namespace

TEST(Ranks, TiesShareAveragePosition) {
  const std::vector<double> x{10, 20, 20, 30};
  EXPECT_EQ(average_ranks(x), (std::vector<double>{1, 2.5, 2.5, 4}));
}

TEST(Srocc, IdentityAndReversal) {
  const auto x = iota_vec(10);
  auto y = x;
  EXPECT_DOUBLE_EQ(*srocc(x, y), 1.0);
  std::reverse(y.begin(), y.end());
  EXPECT_DOUBLE_EQ(*srocc(x, y), -1.0);
}

TEST(Srocc, HandEvaluatedExample) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  const std::vector<double> y{1, 3, 2, 5, 4};
  EXPECT_EQ(*srocc(x, y), 0.8);
  EXPECT_DOUBLE_EQ(spearman_by_hand(x, y), 0.8);
}

TEST(Srocc, ConstantInputIsUndefined) {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> c{4, 4, 4};
  EXPECT_FALSE(srocc(x, c).has_value());
  EXPECT_THROW((void)srocc(x, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST(Srocc, InvariantUnderMonotoneTransforms) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = normals(rng, 40);
    auto y = normals(rng, 40);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += 0.5 * x[i];
    const double base = *srocc(x, y);
    std::vector<double> tx(x.size()), ty(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      tx[i] = std::exp(x[i]);
      ty[i] = y[i] * y[i] * y[i] - 7.0;
    }
    EXPECT_NEAR(*srocc(tx, ty), base, 1e-12);
    EXPECT_NEAR(spearman_by_hand(x, y), base, 1e-12);
  }
}

TEST(Plcc, AffineInvariance) {
  const auto x = iota_vec(10);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] + 1.0;
  EXPECT_NEAR(*plcc(x, y), 1.0, 1e-15);
  EXPECT_NEAR(*plcc(x, x), 1.0, 1e-15);

  Rng rng(5);
  const auto a = normals(rng, 30);
  const auto b = normals(rng, 30);
  std::vector<double> b2(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) b2[i] = 3.5 * b[i] - 20.0;
  EXPECT_NEAR(*plcc(a, b2), *plcc(a, b), 1e-12);
}

TEST(Rmse, ArithmeticAndZeroIffEqual) {
  EXPECT_NEAR(rmse(std::vector<double>{0, 0}, std::vector<double>{3, 4}), std::sqrt(12.5), 1e-12);
  const auto x = iota_vec(5);
  EXPECT_EQ(rmse(x, x), 0.0);
  auto y = x;
  y[2] += 1e-9;
  EXPECT_GT(rmse(x, y), 0.0);
}

TEST(Moments, KurtosisHandValues) {
  EXPECT_DOUBLE_EQ(*kurtosis_beta2(std::vector<double>{-1, 1, -1, 1}), 1.0);
  const auto k = kurtosis_beta2(std::vector<double>{0, 0, 0, 1});
  ASSERT_TRUE(k.has_value());
  EXPECT_TRUE(std::isfinite(*k));
  // m2 = 3/16, m4 = 21/256 -> 21/256 / (9/256) = 7/3
  EXPECT_NEAR(*k, 7.0 / 3.0, 1e-12);
  EXPECT_FALSE(kurtosis_beta2(std::vector<double>{2, 2, 2}).has_value());
}

TEST(Moments, NormalKurtosisIsThree) {
  Rng rng(2024);
  const auto x = normals(rng, 1'000'000);
  EXPECT_NEAR(*kurtosis_beta2(x), 3.0, 0.1);
}

TEST(Moments, MeanStdMedian) {
  const std::vector<double> x{70, 75, 80};
  EXPECT_DOUBLE_EQ(mean(x), 75.0);
  EXPECT_DOUBLE_EQ(sample_std(x), 5.0);
  EXPECT_DOUBLE_EQ(median(std::vector<double>{4, 1, 3, 2}), 2.5);
}

TEST(Wilcoxon, AllPositiveFiveIsExactlyTwoOver32) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b(5, 0.0);
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_TRUE(r.exact);
  EXPECT_DOUBLE_EQ(r.p_value, 2.0 / 32.0);
  EXPECT_DOUBLE_EQ(r.w_plus, 15.0);
}

TEST(Wilcoxon, NoDifferencesGivesOne) {
  const std::vector<double> a{3, 1, 4, 1, 5};
  EXPECT_DOUBLE_EQ(wilcoxon_signed_rank(a, a).p_value, 1.0);
}

TEST(Wilcoxon, SymmetricPatternIsNotSignificant) {
  const std::vector<double> d{1, -1, 2, -2, 3, -3, 4, -4};
  const std::vector<double> z(d.size(), 0.0);
  EXPECT_GT(wilcoxon_signed_rank(d, z).p_value, 0.5);
}

TEST(Wilcoxon, ExactMatchesEnumerationWithTies) {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> d;
    for (int i = 0; i < 12; ++i) {
      double v = static_cast<double>(rng.uniform_int(-4, 4));
      if (v == 0.0) v = 1.0;
      d.push_back(v);
    }
    const std::vector<double> z(d.size(), 0.0);
    const auto r = wilcoxon_signed_rank(d, z, WilcoxonMethod::exact);
    EXPECT_NEAR(r.p_value, wilcoxon_enumerated(d), 1e-12);
  }
}

TEST(Wilcoxon, ExactAndNormalAgreeAt25) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(25), b(25);
    const double shift = rng.uniform(-0.6, 0.6);
    for (int i = 0; i < 25; ++i) {
      a[i] = rng.normal(shift, 1.0);
      b[i] = rng.normal(0.0, 1.0);
    }
    const auto ex = wilcoxon_signed_rank(a, b, WilcoxonMethod::exact);
    const auto no = wilcoxon_signed_rank(a, b, WilcoxonMethod::normal);
    EXPECT_NEAR(ex.p_value, no.p_value, 0.02) << "trial " << trial;
  }
}

TEST(Logistic, RecoversPlantedParameters) {
  const Logistic4Params truth{80.0, 20.0, 0.5, 0.1};
  std::vector<double> q;
  for (int i = 0; i <= 40; ++i) q.push_back(i / 40.0);
  const auto mos = truth.apply(q);
  const auto fit = fit_logistic4(q, mos);
  EXPECT_FALSE(fit.degenerate);
  EXPECT_NEAR(fit.params.beta1, 80.0, 1e-3);
  EXPECT_NEAR(fit.params.beta2, 20.0, 1e-3);
  EXPECT_NEAR(fit.params.beta3, 0.5, 1e-3);
  EXPECT_NEAR(std::abs(fit.params.beta4), 0.1, 1e-3);
}

TEST(Logistic, ConstantMosIsDegenerate) {
  const auto q = iota_vec(10);
  const std::vector<double> mos(10, 50.0);
  EXPECT_TRUE(fit_logistic4(q, mos).degenerate);
  EXPECT_THROW((void)fit_logistic4(iota_vec(4), iota_vec(4)), std::invalid_argument);
}

TEST(Logistic, MappingDoesNotHurtFittedData) {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> q(60), mos(60);
    for (int i = 0; i < 60; ++i) {
      q[i] = rng.uniform(0.0, 10.0);
      mos[i] = 100.0 / (1.0 + std::exp(-(q[i] - 5.0))) + rng.normal(0.0, 4.0);
    }
    const auto fit = fit_logistic4(q, mos);
    const auto mapped = fit.params.apply(q);
    EXPECT_GE(*plcc(mapped, mos), *plcc(q, mos) - 1e-9);
    EXPECT_LE(fit.sse, fit.initial_sse + 1e-9);
  }
}

TEST(KernelRidge, RepresentsFeatureColumn) {
  Eigen::MatrixXd x(30, 1);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    x(i, 0) = i / 29.0;
    y(i) = x(i, 0);
  }
  const auto model = kernel_fit(x, y, {1.0, 1e-9});
  const auto p = kernel_predict(model, x);
  EXPECT_LT((p - y).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(KernelRidge, HugePenaltyPredictsTargetMean) {
  Rng rng(8);
  Eigen::MatrixXd x(25, 3);
  Eigen::VectorXd y(25);
  for (int i = 0; i < 25; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.uniform();
    y(i) = rng.uniform(0.0, 100.0);
  }
  const auto model = kernel_fit(x, y, {1.0, 1e12});
  Eigen::MatrixXd probe(4, 3);
  probe.setRandom();
  const auto p = kernel_predict(model, probe);
  EXPECT_LT((p.array() - y.mean()).abs().maxCoeff(), 1e-6);
}

TEST(KernelRidge, DuplicatedPointsPredictIdentically) {
  Eigen::MatrixXd x(5, 2);
  x << 0.1, 0.2, 0.5, 0.5, 0.1, 0.2, 0.9, 0.3, 0.4, 0.8;
  Eigen::VectorXd y(5);
  y << 10, 30, 14, 70, 50;
  const auto model = kernel_fit(x, y, {2.0, 0.1});
  const auto p = kernel_predict(model, x);
  EXPECT_DOUBLE_EQ(p(0), p(2));
  EXPECT_THROW((void)kernel_fit(x, y, {2.0, 0.0}), DataError);
}

TEST(KernelRidge, ScalerUsesTrainingRangeOnly) {
  Eigen::MatrixXd train(3, 2);
  train << 0, 5, 10, 5, 5, 5;
  const auto s = MinMaxScaler::fit(train);
  Eigen::MatrixXd test(1, 2);
  test << 20, 7;
  const auto t = s.transform(test);
  EXPECT_DOUBLE_EQ(t(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(t(0, 1), 0.0);
}

TEST(KernelRidge, SelectHyperIsDeterministicAndOnGrid) {
  Rng rng(4);
  Eigen::MatrixXd x(40, 2);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = rng.uniform();
    x(i, 1) = rng.uniform();
    y(i) = 50.0 * x(i, 0) + 10.0 * std::sin(6.0 * x(i, 1));
  }
  const auto a = select_hyper(x, y, Rng(1));
  const auto b = select_hyper(x, y, Rng(1));
  EXPECT_EQ(a.gamma, b.gamma);
  EXPECT_EQ(a.lambda, b.lambda);
  const auto grid = default_grid();
  EXPECT_NE(std::find(grid.begin(), grid.end(), a.gamma), grid.end());
  EXPECT_NE(std::find(grid.begin(), grid.end(), a.lambda), grid.end());
}

TEST(Kfold, TenIntoFivePairs) {
  const auto folds = kfold_split(10, 5, Rng(1));
  ASSERT_EQ(folds.size(), 5u);
  for (const auto& f : folds) EXPECT_EQ(f.size(), 2u);
}

TEST(Kfold, BalancedSizesFor553) {
  const auto folds = kfold_split(553, 5, Rng(9));
  std::vector<std::size_t> sizes;
  for (const auto& f : folds) sizes.push_back(f.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{111, 111, 111, 110, 110}));
}

TEST(Kfold, PartitionProperty) {
  Rng rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const auto k = static_cast<std::size_t>(rng.uniform_int(2, 10));
    const auto n = static_cast<std::size_t>(rng.uniform_int(static_cast<long>(k), 300));
    const auto folds = kfold_split(n, k, rng.derive(trial));
    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& f : folds) {
      total += f.size();
      seen.insert(f.begin(), f.end());
    }
    EXPECT_EQ(total, n);
    EXPECT_EQ(seen.size(), n);
    EXPECT_EQ(*seen.rbegin(), n - 1);
    EXPECT_EQ(complement(folds, 0).size(), n - folds[0].size());
  }
  EXPECT_THROW((void)kfold_split(3, 5, Rng(1)), std::invalid_argument);
  EXPECT_THROW((void)kfold_split(10, 1, Rng(1)), std::invalid_argument);
}

TEST(Kfold, TrainTestSplitSizes) {
  const auto s = train_test_split(585, 0.2, Rng(3));
  EXPECT_EQ(s.test.size(), 117u);
  EXPECT_EQ(s.train.size(), 468u);
  std::set<std::size_t> all(s.train.begin(), s.train.end());
  all.insert(s.test.begin(), s.test.end());
  EXPECT_EQ(all.size(), 585u);
}
