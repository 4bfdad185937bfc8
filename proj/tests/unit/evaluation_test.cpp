#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "solarmend/evaluation.hpp"
#include "tempdir.hpp"

using namespace solarmend;
using solarmend::testing::TempDir;

namespace {

TEST(Score, HandExamples) {
  const std::vector<std::uint8_t> keep{0, 0, 1}, obs{1, 1, 1};
  Scores s = score({1.0, 2.0, 9.0}, {0.5, 2.5, 0.0}, keep, obs);
  EXPECT_EQ(s.n, 2u);
  EXPECT_DOUBLE_EQ(s.mae, 0.5);
  EXPECT_DOUBLE_EQ(s.rmse, 0.5);
  s = score({1.0, 2.0, 9.0}, {0.0, 2.0, 0.0}, keep, obs);
  EXPECT_DOUBLE_EQ(s.mae, 0.5);
  EXPECT_NEAR(s.rmse, 0.70711, 1e-5);
}

TEST(Score, RestrictedToCorruptedObservedEntries) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t N = 20 + rng.below(80);
    std::vector<double> imp(N), tru(N);
    std::vector<std::uint8_t> keep(N), obs(N);
    for (std::size_t k = 0; k < N; ++k) {
      imp[k] = rng.uniform();
      tru[k] = rng.uniform();
      keep[k] = rng.uniform() < 0.5;
      obs[k] = rng.uniform() < 0.8;
    }
    keep[0] = 0;
    obs[0] = 1;
    const Scores a = score(imp, tru, keep, obs);
    for (std::size_t k = 0; k < N; ++k) {
      if (!keep[k] && obs[k]) continue;
      imp[k] += rng.uniform(-100, 100);
      tru[k] = rng.uniform(-100, 100);
    }
    const Scores b = score(imp, tru, keep, obs);
    EXPECT_EQ(a.mae, b.mae);
    EXPECT_EQ(a.rmse, b.rmse);
    EXPECT_EQ(a.n, b.n);
  }
}

TEST(Score, MaeNeverExceedsRmse) {
  Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t N = 1 + rng.below(50);
    std::vector<double> imp(N), tru(N);
    for (std::size_t k = 0; k < N; ++k) {
      imp[k] = rng.normal();
      tru[k] = rng.normal();
    }
    const Scores s = score(imp, tru, std::vector<std::uint8_t>(N, 0), std::vector<std::uint8_t>(N, 1));
    EXPECT_LE(s.mae, s.rmse * (1 + 1e-15));
  }
}

TEST(Score, ScaleEquivariant) {
  const std::vector<double> a{0.1, 0.5, 0.9}, b{0.2, 0.1, 0.4};
  const std::vector<std::uint8_t> keep(3, 0), obs(3, 1);
  const Scores s = score(a, b, keep, obs);
  const Scores t = score({0.4, 2.0, 3.6}, {0.8, 0.4, 1.6}, keep, obs);
  EXPECT_NEAR(t.mae, 4 * s.mae, 1e-14);
  EXPECT_NEAR(t.rmse, 4 * s.rmse, 1e-14);
}

TEST(Score, Errors) {
  EXPECT_THROW(score({1.0}, {1.0}, {1}, {1}), DataError);
  EXPECT_THROW(score({1.0}, {1.0}, {0}, {0}), DataError);
  EXPECT_THROW(score({1.0, 2.0}, {1.0}, {0}, {1}), DimensionError);
}

std::vector<double> sinusoid(std::size_t period, std::size_t cycles, double offset, double trend_slope = 0.0) {
  std::vector<double> y(period * cycles);
  for (std::size_t t = 0; t < y.size(); ++t)
    y[t] = std::sin(2 * std::numbers::pi * t / period) + offset + trend_slope * t;
  return y;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= a.size();
  mb /= b.size();
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(Stl, ConstantSeries) {
  StlOptions o;
  o.period = 24;
  const auto d = stl_decompose(std::vector<double>(24 * 5, 3.25), o);
  for (std::size_t t = 0; t < d.trend.size(); ++t) {
    EXPECT_NEAR(d.seasonal[t], 0.0, 1e-8);
    EXPECT_NEAR(d.trend[t], 3.25, 1e-8);
    EXPECT_NEAR(d.remainder[t], 0.0, 1e-8);
  }
}

TEST(Stl, RecoversSinusoid) {
  const std::vector<double> y = sinusoid(kStepsPerDay, 20, 5.0);
  const auto d = stl_decompose(y);
  std::vector<double> pure(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) pure[t] = y[t] - 5.0;
  EXPECT_GT(correlation(d.seasonal, pure), 0.99);
  double mt = 0;
  for (double v : d.trend) mt += v;
  EXPECT_LT(std::abs(mt / d.trend.size() - 5.0), 0.05);
}

TEST(Stl, SeparatesLinearTrend) {
  const std::vector<double> y = sinusoid(48, 12, 1.0, 0.01);
  StlOptions o;
  o.period = 48;
  const auto d = stl_decompose(y, o);
  for (std::size_t t = 48; t + 48 < y.size(); ++t) EXPECT_NEAR(d.trend[t], 1.0 + 0.01 * t, 0.05) << t;
}

TEST(Stl, AdditiveAndCentred) {
  Rng rng(3);
  for (std::size_t np : {7u, 24u, 288u}) {
    std::vector<double> y = sinusoid(np, 6, 2.0);
    for (auto& v : y) v += 0.3 * rng.normal();
    StlOptions o;
    o.period = np;
    const auto d = stl_decompose(y, o);
    ASSERT_EQ(d.period, np);
    for (std::size_t t = 0; t < y.size(); ++t) {
      EXPECT_EQ(d.remainder[t], y[t] - d.trend[t] - d.seasonal[t]);
      EXPECT_NEAR(d.trend[t] + d.seasonal[t] + d.remainder[t], y[t], 1e-14);
    }
    for (std::size_t start = 0; start + np <= y.size(); start += np) {
      double m = 0;
      for (std::size_t t = start; t < start + np; ++t) m += d.seasonal[t];
      EXPECT_LT(std::abs(m / np), 1e-6);
    }
  }
}

TEST(Stl, Errors) {
  StlOptions o;
  o.period = 10;
  EXPECT_THROW(stl_decompose(std::vector<double>(19, 1.0), o), DataError);
  o.period = 1;
  EXPECT_THROW(stl_decompose(std::vector<double>(19, 1.0), o), Error);
}

TEST(Quantile, HandComputation) {
  const std::vector<double> s{1, 2, 3, 4, 100};
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.25), 2.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.75), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile_sorted({1, 2, 3, 4}, 0.25), 1.75);
  // fence [2 - 3, 4 + 3] flags only 100
  EXPECT_DOUBLE_EQ(outlier_fraction({100, 1, 3, 2, 4}), 0.2);
  EXPECT_EQ(outlier_fraction(std::vector<double>(10, 0.7)), 0.0);
  EXPECT_THROW(outlier_fraction({1, 2, 3}), DataError);
  EXPECT_THROW(quantile_sorted({}, 0.5), DataError);
}

TEST(Outliers, PlantedSpikesAreFlagged) {
  Rng rng(4);
  std::vector<double> x(999);
  for (auto& v : x) v = rng.normal();
  x.insert(x.end(), 100, 50.0);
  const double f = outlier_fraction(x);
  EXPECT_GE(f, 100.0 / 1099.0);
  EXPECT_LT(f, 120.0 / 1099.0);
}

PvFleetSeries fleet(std::size_t days, std::uint64_t seed) {
  SynthOptions o;
  o.n_sites = 2;
  o.inverters_per_site = 2;
  o.n_days = days;
  o.seed = seed;
  return generate_synthetic_fleet(o);
}

TEST(DomainMetrics, IdentityIsZero) {
  const PvFleetSeries s = fleet(4, 1);
  const DomainMetrics m = domain_metrics(s, s);
  for (std::size_t i = 0; i < s.nodes(); ++i) {
    EXPECT_EQ(m.od[i], 0.0);
    EXPECT_EQ(m.sd[i], 0.0);
  }
}

TEST(DomainMetrics, ConstantShiftLeavesSeasonalityUnchanged) {
  const PvFleetSeries s = fleet(6, 2);
  PvFleetSeries shifted = s;
  for (auto& v : shifted.values.storage()) v += 0.3;
  const DomainMetrics m = domain_metrics(shifted, s);
  for (double sd : m.sd) EXPECT_NEAR(sd, 0.0, 1e-3);
}

TEST(DomainMetrics, SmoothingPlantedSpikesLowersOutliers) {
  PvFleetSeries truth = fleet(6, 3);
  Rng rng(5);
  PvFleetSeries smoothed = truth;
  for (std::size_t i = 0; i < truth.nodes(); ++i)
    for (int k = 0; k < 40; ++k) {
      const std::size_t t = rng.below(truth.steps());
      truth.value(t, i) += 0.8;  // spike in the truth, absent from the imputation
    }
  const DomainMetrics m = domain_metrics(smoothed, truth);
  for (double od : m.od) EXPECT_LT(od, 0.0);
  EXPECT_THROW(domain_metrics(slice_days(truth, 0, 3), truth), DimensionError);
}

TEST(DomainMetrics, DampedSeasonalityIsNegative) {
  const PvFleetSeries truth = fleet(6, 4);
  PvFleetSeries flat = truth;
  for (auto& v : flat.values.storage()) v *= 0.5;
  for (double sd : domain_metrics(flat, truth).sd) EXPECT_LT(sd, 0.0);
}

TEST(Report, FleetAndPerInverterCounts) {
  const PvFleetSeries truth = fleet(3, 6);
  const Corruption c = corrupt(truth, {MissingType::MCAR, 0.3, 9});
  PvFleetSeries imputed = c.series;
  for (std::size_t k = 0; k < imputed.values.size(); ++k)
    if (!c.mask.keep[k]) imputed.values[k] = 0.5;
  const EvalReport r = evaluate_run(imputed, truth, c.mask, {kStepsPerDay, "const"});
  std::size_t n = 0;
  for (const auto& s : r.inverters) n += s.n;
  EXPECT_EQ(n, r.n);
  EXPECT_EQ(r.n, c.mask.corrupted());
  EXPECT_EQ(r.scenario, "mcar-30");
  EXPECT_EQ(r.method, "const");
  const Scores direct = score(imputed, truth, c.mask);
  EXPECT_EQ(r.rmse, direct.rmse);
  const EvalReport again = evaluate_run(imputed, truth, c.mask, {kStepsPerDay, "const"});
  EXPECT_EQ(to_json(again).dump(), to_json(r).dump());
}

TEST(Report, WritersAndNulls) {
  const PvFleetSeries truth = fleet(2, 7);
  MissingMask mask;
  mask.provenance = {MissingType::BM, 12, 1};
  mask.keep.assign(truth.observed.size(), 1);
  mask.keep[truth.index(10, 0)] = 0;  // only inverter 0 is scored
  PvFleetSeries imputed = truth;
  imputed.value(10, 0) += 0.25;
  const EvalReport r = evaluate_run(imputed, truth, mask);
  const auto j = to_json(r);
  EXPECT_TRUE(j["inverters"][1]["mae"].is_null());
  EXPECT_DOUBLE_EQ(j["mae"].get<double>(), 0.25);
  EXPECT_EQ(j["per_inverter_od"].size(), truth.nodes());
  TempDir dir;
  write_report_json(dir / "r.json", r);
  write_report_csv(dir / "r.csv", r);
  EXPECT_EQ(nlohmann::json::parse(solarmend::testing::slurp(dir / "r.json")), j);
  const std::string csv = solarmend::testing::slurp(dir / "r.csv");
  EXPECT_EQ(csv.rfind("method,scenario,inverter_id,n,mae,rmse,od,sd\n", 0), 0u);
  EXPECT_NE(csv.find(",bm-1h,fleet,1,0.25,0.25,"), std::string::npos) << csv;
}

}  // namespace
