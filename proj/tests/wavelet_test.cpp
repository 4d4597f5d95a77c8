#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "cyclesync/rng.hpp"
#include "cyclesync/wavelet.hpp"

using namespace cyclesync;

namespace {

Eigen::VectorXd random_series(std::uint64_t seed, int t) {
  Rng rng = Rng::derive(seed, 0, 0);
  Eigen::VectorXd x(t);
  for (int i = 0; i < t; ++i) x(i) = rng.normal();
  return x;
}

double rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  double denom = std::max(want.norm(), 1e-300);
  return (got - want).norm() / denom;
}

Eigen::VectorXd mra_sum(const MraStack<double>& stack) {
  Eigen::VectorXd acc = stack.smooth;
  for (const auto& d : stack.details) acc += d;
  return acc;
}

double variance(const Eigen::VectorXd& x) {
  double mean = x.mean();
  return (x.array() - mean).square().sum() / double(x.size() - 1);
}

}  // namespace

TEST_CASE("filter banks satisfy the canonical checksums") {
  for (const char* name : {"LA8", "Haar"}) {
    FilterBank<double> bank = FilterBank<double>::by_name(name);
    CHECK_NOTHROW(bank.validate());
    CHECK(std::abs(bank.g.sum() - std::numbers::sqrt2) <= 1e-12);
    CHECK(std::abs(bank.g.squaredNorm() - 1.0) <= 1e-12);
    const Eigen::Index L = bank.g.size();
    for (Eigen::Index n = 1; 2 * n < L; ++n) {
      double dot = 0;
      for (Eigen::Index l = 0; l + 2 * n < L; ++l) dot += bank.g[l] * bank.g[l + 2 * n];
      CHECK(std::abs(dot) <= 1e-10);
    }
    for (Eigen::Index l = 0; l < L; ++l)
      CHECK(bank.h[l] == ((l % 2) ? -1.0 : 1.0) * bank.g[L - 1 - l]);
  }
  CHECK(FilterBank<double>::la8().g.size() == 8);
  CHECK(FilterBank<double>::haar().g.size() == 2);
  CHECK_THROWS_AS(FilterBank<double>::by_name("DB4"), error);
}

TEST_CASE("drift_adjust matches the displayed formula") {
  Eigen::Vector3d x(1.0, 3.0, 2.0);
  Eigen::VectorXd out = drift_adjust(x);
  CHECK(out(0) == 1.0);
  CHECK(out(1) == 2.5);
  CHECK(out(2) == 1.0);

  // a straight line collapses to its intercept value
  Eigen::VectorXd line(10);
  for (int t = 0; t < 10; ++t) line(t) = 4.0 + 0.7 * (t + 1);
  Eigen::VectorXd flat = drift_adjust(line);
  for (int t = 0; t < 10; ++t) CHECK(flat(t) == doctest::Approx(4.7).epsilon(1e-14));

  // endpoints always pin to X(1)
  Eigen::VectorXd r = random_series(3, 40);
  Eigen::VectorXd adj = drift_adjust(r);
  CHECK(adj(0) == r(0));
  CHECK(adj(39) == doctest::Approx(r(0)).epsilon(1e-14));

  CHECK_THROWS_AS(drift_adjust(Eigen::VectorXd::Ones(1)), error);
}

TEST_CASE("extend_reflect builds rev-x, x, rev-x, x") {
  Eigen::Vector3d x(1.0, 2.0, 3.0);
  Eigen::VectorXd e = extend_reflect(x);
  REQUIRE(e.size() == 12);
  std::vector<double> want = {3, 2, 1, 1, 2, 3, 3, 2, 1, 1, 2, 3};
  for (int i = 0; i < 12; ++i) CHECK(e(i) == want[std::size_t(i)]);

  Eigen::VectorXd c = Eigen::VectorXd::Constant(5, 4.25);
  Eigen::VectorXd ec = extend_reflect(c);
  for (int i = 0; i < 20; ++i) CHECK(ec(i) == 4.25);
}

TEST_CASE("additive reconstruction under both boundaries") {
  for (const char* name : {"LA8", "Haar"}) {
    FilterBank<double> bank = FilterBank<double>::by_name(name);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      Eigen::VectorXd x = random_series(seed, 86);

      MraStack<double> per = modwt_mra(x, bank, 5, Boundary::periodic);
      CHECK(rel_err(mra_sum(per), x) <= 1e-10);

      // reflect boundary reconstructs the series handed to it
      MraStack<double> ref = modwt_mra(x, bank, 5, Boundary::reflect);
      CHECK(rel_err(mra_sum(ref), x) <= 1e-8);
    }
  }
}

TEST_CASE("modwt coefficients preserve energy under periodic boundary") {
  FilterBank<double> bank = FilterBank<double>::la8();
  Eigen::VectorXd x = random_series(21, 128);
  ModwtCoeffs<double> c = modwt_forward(x, bank, 5);
  double energy = c.v.squaredNorm();
  for (const auto& w : c.w) energy += w.squaredNorm();
  CHECK(energy == doctest::Approx(x.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("haar level-1 coefficients have the closed form") {
  FilterBank<double> bank = FilterBank<double>::haar();
  Eigen::VectorXd x = random_series(5, 32);
  ModwtCoeffs<double> c = modwt_forward(x, bank, 1);
  const int m = 32;
  for (int t = 0; t < m; ++t) {
    int prev = (t - 1 + m) % m;
    CHECK(c.w[0](t) == doctest::Approx((x(t) - x(prev)) / 2.0).epsilon(1e-14));
    CHECK(c.v(t) == doctest::Approx((x(t) + x(prev)) / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("level-1 coefficients equal a naive circular convolution") {
  FilterBank<double> bank = FilterBank<double>::la8();
  Eigen::VectorXd x = random_series(6, 50);
  ModwtCoeffs<double> c = modwt_forward(x, bank, 2);
  const int m = 50;
  const double s2 = std::numbers::sqrt2;
  for (int t = 0; t < m; ++t) {
    double w = 0, v = 0;
    for (int l = 0; l < 8; ++l) {
      int idx = ((t - l) % m + m) % m;
      w += bank.h(l) / s2 * x(idx);
      v += bank.g(l) / s2 * x(idx);
    }
    CHECK(c.w[0](t) == doctest::Approx(w).epsilon(1e-12));
  }
  // level 2 uses stride 2 on the level-1 scaling output
  Eigen::VectorXd v1(m);
  for (int t = 0; t < m; ++t) {
    double v = 0;
    for (int l = 0; l < 8; ++l) v += bank.g(l) / s2 * x((((t - l) % m) + m) % m);
    v1(t) = v;
  }
  for (int t = 0; t < m; ++t) {
    double w = 0;
    for (int l = 0; l < 8; ++l) w += bank.h(l) / s2 * v1((((t - 2 * l) % m) + m) % m);
    CHECK(c.w[1](t) == doctest::Approx(w).epsilon(1e-12));
  }
}

TEST_CASE("mra is shift covariant under periodic boundary") {
  FilterBank<double> bank = FilterBank<double>::la8();
  Eigen::VectorXd x = random_series(7, 64);
  const int shift = 11;
  Eigen::VectorXd xs(64);
  for (int t = 0; t < 64; ++t) xs((t + shift) % 64) = x(t);

  MraStack<double> a = modwt_mra(x, bank, 4, Boundary::periodic);
  MraStack<double> b = modwt_mra(xs, bank, 4, Boundary::periodic);
  for (int j = 0; j < 4; ++j)
    for (int t = 0; t < 64; ++t)
      CHECK(b.details[std::size_t(j)]((t + shift) % 64) ==
            doctest::Approx(a.details[std::size_t(j)](t)).epsilon(1e-10));
  for (int t = 0; t < 64; ++t)
    CHECK(b.smooth((t + shift) % 64) == doctest::Approx(a.smooth(t)).epsilon(1e-10));
}

TEST_CASE("mra is linear") {
  FilterBank<double> bank = FilterBank<double>::la8();
  Eigen::VectorXd x = random_series(8, 60);
  Eigen::VectorXd y = random_series(9, 60);
  const double a = 2.5, b = -1.25;
  MraStack<double> mx = modwt_mra(x, bank, 5, Boundary::periodic);
  MraStack<double> my = modwt_mra(y, bank, 5, Boundary::periodic);
  MraStack<double> mz = modwt_mra(Eigen::VectorXd(a * x + b * y), bank, 5, Boundary::periodic);
  for (int j = 0; j < 5; ++j) {
    Eigen::VectorXd want = a * mx.details[std::size_t(j)] + b * my.details[std::size_t(j)];
    CHECK(rel_err(mz.details[std::size_t(j)], want) <= 1e-10);
  }
}

TEST_CASE("nyquist oscillation lands in haar D1 and constants in the smooth") {
  FilterBank<double> bank = FilterBank<double>::haar();
  Eigen::VectorXd alt(32);
  for (int t = 0; t < 32; ++t) alt(t) = (t % 2 == 0) ? 1.0 : -1.0;
  MraStack<double> m = modwt_mra(alt, bank, 1, Boundary::periodic);
  CHECK(rel_err(m.details[0], alt) <= 1e-12);
  CHECK(m.smooth.norm() <= 1e-12);

  Eigen::VectorXd c = Eigen::VectorXd::Constant(32, 3.5);
  MraStack<double> mc = modwt_mra(c, FilterBank<double>::la8(), 4, Boundary::periodic);
  for (const auto& d : mc.details) CHECK(d.norm() <= 1e-12);
  for (int t = 0; t < 32; ++t) CHECK(mc.smooth(t) == doctest::Approx(3.5).epsilon(1e-13));
}

TEST_CASE("band placement follows the quarterly frequency table") {
  FilterBank<double> bank = FilterBank<double>::la8();
  const int t = 256;

  auto share = [&](int period, int level) {
    Eigen::VectorXd x(t);
    for (int i = 0; i < t; ++i) x(i) = std::sin(2.0 * std::numbers::pi * i / period);
    MraStack<double> m = modwt_mra(x, bank, 5, Boundary::periodic);
    double total = 0.0;
    for (const auto& d : m.details) total += variance(d);
    total += variance(m.smooth);
    return variance(m.details[std::size_t(level - 1)]) / total;
  };

  CHECK(share(12, 3) >= 0.70);  // 3-year cycle -> D3 (2-4Y band)
  CHECK(share(24, 4) >= 0.70);  // 6-year cycle -> D4 (4-8Y band)
}

TEST_CASE("white-noise mra variance shares match the impulse-response prediction") {
  FilterBank<double> bank = FilterBank<double>::la8();
  const int m = 16384;
  const int levels = 5;

  // circulant row norms from the impulse response predict the white-noise
  // variance share of each mra component
  Eigen::VectorXd impulse = Eigen::VectorXd::Zero(m);
  impulse(0) = 1.0;
  MraStack<double> imp = modwt_mra(impulse, bank, levels, Boundary::periodic);

  Eigen::VectorXd x = random_series(99, m);
  MraStack<double> got = modwt_mra(x, bank, levels, Boundary::periodic);
  const double total = variance(x);

  double predicted_sum = 0.0;
  for (int j = 0; j < levels; ++j) {
    const double predicted = imp.details[std::size_t(j)].squaredNorm();
    predicted_sum += predicted;
    const double empirical = variance(got.details[std::size_t(j)]) / total;
    CHECK(empirical == doctest::Approx(predicted).epsilon(0.12));
  }
  predicted_sum += imp.smooth.squaredNorm();
  // the mra components are additive but not orthogonal, so their variance
  // shares fall short of 1 by the band-overlap deficit; only the coefficient
  // split below is exact
  CHECK(predicted_sum > 0.70);
  CHECK(predicted_sum < 1.0 + 1e-9);

  // in the coefficient domain the split is exact, not approximate
  ModwtCoeffs<double> coeffs = modwt_forward(x, bank, levels);
  double energy = coeffs.v.squaredNorm();
  for (const auto& w : coeffs.w) energy += w.squaredNorm();
  CHECK(energy == doctest::Approx(x.squaredNorm()).epsilon(1e-10));
}

TEST_CASE("filter longer than the series is flagged, not fatal") {
  FilterBank<double> bank = FilterBank<double>::la8();
  Eigen::VectorXd x = random_series(14, 6);
  MraStack<double> m = modwt_mra(x, bank, 1, Boundary::reflect);
  CHECK(m.filter_longer_than_series);
  CHECK(rel_err(mra_sum(m), x) <= 1e-8);

  MraStack<double> ok = modwt_mra(random_series(15, 86), bank, 5, Boundary::reflect);
  CHECK_FALSE(ok.filter_longer_than_series);
}

TEST_CASE("bad levels are rejected") {
  FilterBank<double> bank = FilterBank<double>::haar();
  Eigen::VectorXd x = random_series(16, 32);
  CHECK_THROWS_WITH_AS(modwt_mra(x, bank, 0, Boundary::periodic), doctest::Contains("bad_level"),
                       error);
}

TEST_CASE("extract_cycles equals the per-row manual pipeline") {
  Panel panel;
  panel.ids = {IndicatorId{"AA", "1"}, IndicatorId{"BB", "2"}, IndicatorId{"CC", "3"}};
  for (int i = 0; i < 40; ++i) panel.quarters.push_back(QuarterIndex{2000 + i / 4, i % 4 + 1, i});
  panel.values.resize(3, 40);
  for (int i = 0; i < 3; ++i)
    panel.values.row(i) = random_series(100 + std::uint64_t(i), 40).transpose();

  WaveletConfig cfg;
  CyclePanel cycles = extract_cycles(panel, cfg);
  FilterBank<double> bank = FilterBank<double>::la8();
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd adj = drift_adjust(panel.values.row(i).transpose());
    MraStack<double> m = modwt_mra(adj, bank, 5, Boundary::reflect);
    Eigen::VectorXd want = m.details[2] + m.details[3];
    CHECK(rel_err(cycles.cycles.row(i).transpose(), want) == 0.0);
  }

  // thread count cannot change the result
  CyclePanel threaded = extract_cycles(panel, cfg, ThreadPool(3));
  CHECK((threaded.cycles - cycles.cycles).norm() == 0.0);

  // wider band includes D5
  WaveletConfig wide;
  wide.cycle_levels = {3, 4, 5};
  CyclePanel wide_cycles = extract_cycles(panel, wide);
  Eigen::VectorXd adj0 = drift_adjust(panel.values.row(0).transpose());
  MraStack<double> m0 = modwt_mra(adj0, bank, 5, Boundary::reflect);
  CHECK(rel_err(wide_cycles.cycles.row(0).transpose(),
                Eigen::VectorXd(m0.details[2] + m0.details[3] + m0.details[4])) == 0.0);

  WaveletConfig bad;
  bad.cycle_levels = {6};
  CHECK_THROWS_WITH_AS(extract_cycles(panel, bad), doctest::Contains("bad_level"), error);
}

TEST_CASE("reflect truncation matches decomposing the extension directly") {
  FilterBank<double> bank = FilterBank<double>::la8();
  Eigen::VectorXd x = random_series(17, 30);
  MraStack<double> viaflag = modwt_mra(x, bank, 3, Boundary::reflect);
  MraStack<double> manual = modwt_mra(extend_reflect(x), bank, 3, Boundary::periodic);
  for (int j = 0; j < 3; ++j)
    CHECK((viaflag.details[std::size_t(j)] - manual.details[std::size_t(j)].segment(30, 30))
              .norm() == 0.0);
  CHECK((viaflag.smooth - manual.smooth.segment(30, 30)).norm() == 0.0);
}
