#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cyclesync/rng.hpp"
#include "cyclesync/sync.hpp"

using namespace cyclesync;

namespace {

CyclePanel make_cycles(const Eigen::MatrixXd& rows) {
  CyclePanel out;
  for (int i = 0; i < rows.rows(); ++i) {
    char sector = char('A' + i);
    out.ids.push_back(IndicatorId{"R" + std::to_string(i), std::string(1, sector)});
  }
  for (int t = 0; t < rows.cols(); ++t)
    out.quarters.push_back(QuarterIndex{2000 + t / 4, t % 4 + 1, t});
  out.cycles = rows;
  out.cycle_levels = {3, 4};
  return out;
}

// brute-force Eqs. 5-6: explicit per-pair, per-quarter loop
double naive_phi(const Eigen::MatrixXd& rows, int i, int j, int begin, int end, double eps) {
  double acc = 0.0;
  for (int t = begin; t < end; ++t) {
    double x = rows(i, t), y = rows(j, t);
    double s;
    if (std::abs(x) <= eps || std::abs(y) <= eps) s = 0.0;
    else if ((x > 0 && y > 0) || (x < 0 && y < 0)) s = 1.0;
    else s = -1.0;
    acc += s;
  }
  return acc / double(end - begin);
}

}  // namespace

TEST_CASE("synchronicity_at covers all sign combinations") {
  const double eps = 1e-12;
  CHECK(synchronicity_at(2.0, 0.5, eps) == 1.0);
  CHECK(synchronicity_at(-2.0, -0.5, eps) == 1.0);
  CHECK(synchronicity_at(2.0, -0.5, eps) == -1.0);
  CHECK(synchronicity_at(-2.0, 0.5, eps) == -1.0);
  CHECK(synchronicity_at(2.0, 0.0, eps) == 0.0);
  CHECK(synchronicity_at(0.0, -3.0, eps) == 0.0);
  CHECK(synchronicity_at(0.0, 0.0, eps) == 0.0);
  CHECK(synchronicity_at(2.0, 0.5e-12, eps) == 0.0);   // inside the zero band
  CHECK(synchronicity_at(2.0, 1.5e-12, eps) == 1.0);   // just outside
}

TEST_CASE("through_cycle_synchronicity matches hand cases") {
  Eigen::VectorXd c1(4), c2(4);
  c1 << 1, 1, -1, -1;
  c2 << 1, -1, -1, 1;
  Window full{0, 4};
  CHECK(through_cycle_synchronicity(c1, c2, full, 1e-12) == 0.0);
  CHECK(through_cycle_synchronicity(c1, c1, full, 1e-12) == 1.0);
  CHECK(through_cycle_synchronicity(c1, Eigen::VectorXd(-c1), full, 1e-12) == -1.0);
  CHECK_THROWS_WITH_AS(through_cycle_synchronicity(c1, c2, Window{2, 2}, 1e-12),
                       doctest::Contains("empty_window"), error);
}

TEST_CASE("phi matrix equals the brute-force double loop exactly") {
  Rng rng = Rng::derive(404, 0, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 5, t = 86;
    Eigen::MatrixXd rows(n, t);
    for (int i = 0; i < n; ++i)
      for (int q = 0; q < t; ++q) {
        std::uint64_t pick = rng.uniform_below(16);
        rows(i, q) = pick == 0 ? 0.0 : (pick % 2 == 0 ? 1.0 : -1.0) * (double(pick) / 4.0);
      }
    Window w{0, t};
    Eigen::MatrixXd phi = phi_matrix(rows, w, 1e-12);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double want = i == j ? 1.0 : naive_phi(rows, i, j, 0, t, 1e-12);
        CHECK(phi(i, j) == want);  // integer sums: no roundoff at all
      }
    }
  }
}

TEST_CASE("dissimilarity matrix hits its bounds on anti-phase blocks") {
  Eigen::MatrixXd rows(4, 16);
  for (int t = 0; t < 16; ++t) {
    double v = std::sin(2.0 * std::numbers::pi * t / 8.0 + 0.3);
    rows(0, t) = v;
    rows(1, t) = 2.0 * v;
    rows(2, t) = -v;
    rows(3, t) = -0.5 * v;
  }
  CyclePanel cycles = make_cycles(rows);
  SyncConfig cfg;
  DissimilarityMatrix dm = sync_dissimilarity_matrix(cycles, cfg, Window{0, 16});
  for (int i = 0; i < 4; ++i) CHECK(dm.d(i, i) == 0.0);
  CHECK(dm.d(0, 1) == 0.0);
  CHECK(dm.d(2, 3) == 0.0);
  CHECK(dm.d(0, 2) == 2.0);
  CHECK(dm.d(1, 3) == 2.0);
  CHECK(dm.d(0, 3) == dm.d(3, 0));
}

TEST_CASE("a zero series is neutral to everyone") {
  Eigen::MatrixXd rows(3, 16);
  for (int t = 0; t < 16; ++t) {
    rows(0, t) = std::cos(0.7 * t) + 1.5;
    rows(1, t) = 0.0;
    rows(2, t) = -(std::cos(0.7 * t) + 1.5);
  }
  CyclePanel cycles = make_cycles(rows);
  DissimilarityMatrix dm = sync_dissimilarity_matrix(cycles, SyncConfig{}, Window{0, 16});
  CHECK(dm.d(0, 1) == 1.0);  // phi = 0
  CHECK(dm.d(1, 2) == 1.0);
  CHECK(dm.d(0, 2) == 2.0);  // phi = -1
}

TEST_CASE("amplitude scaling and sign flips act as expected") {
  Rng rng = Rng::derive(77, 0, 0);
  Eigen::MatrixXd rows(2, 40);
  for (int i = 0; i < 2; ++i)
    for (int t = 0; t < 40; ++t) rows(i, t) = rng.normal();
  Window w{0, 40};
  Eigen::MatrixXd phi = phi_matrix(rows, w, 1e-12);

  Eigen::MatrixXd scaled = rows;
  scaled.row(0) *= 57.5;
  CHECK(phi_matrix(scaled, w, 1e-12)(0, 1) == phi(0, 1));

  Eigen::MatrixXd flipped = rows;
  flipped.row(1) *= -1.0;
  CHECK(phi_matrix(flipped, w, 1e-12)(0, 1) == -phi(0, 1));
}

TEST_CASE("length-weighted window phis recombine to the full-sample value") {
  Rng rng = Rng::derive(88, 0, 0);
  const int t = 64;
  Eigen::MatrixXd rows(3, t);
  for (int i = 0; i < 3; ++i)
    for (int q = 0; q < t; ++q) rows(i, q) = rng.normal();
  // power-of-two window lengths keep the FP recombination exact
  Eigen::MatrixXd p1 = phi_matrix(rows, Window{0, 32}, 1e-12);
  Eigen::MatrixXd p2 = phi_matrix(rows, Window{32, 64}, 1e-12);
  Eigen::MatrixXd full = phi_matrix(rows, Window{0, 64}, 1e-12);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(0.5 * (p1(i, j) + p2(i, j)) == full(i, j));
}

TEST_CASE("sync config validates windows") {
  SyncConfig cfg;
  auto full = cfg.resolve(20);
  REQUIRE(full.size() == 1);
  CHECK(full[0].begin == 0);
  CHECK(full[0].end == 20);

  cfg.windows = {Window{0, 10}, Window{10, 20}};
  CHECK(cfg.resolve(20).size() == 2);

  cfg.windows = {Window{0, 3}};
  CHECK_THROWS_WITH_AS(cfg.resolve(20), doctest::Contains("empty_window"), error);
  cfg.windows = {Window{0, 24}};
  CHECK_THROWS_AS(cfg.resolve(20), error);
}

TEST_CASE("proximity of synchronization matches a spreadsheet evaluation") {
  Eigen::MatrixXd rows(4, 6);
  rows << 1.0, 2.0, -1.0, 0.5, 1.5, -2.0,
          1.1, 1.9, -0.9, 0.6, 1.4, -2.1,
          0.9, 2.2, -1.2, 0.4, 1.6, -1.8,
          5.0, -3.0, 2.0, -4.0, 0.5, 3.0;  // the outlier
  CyclePanel cycles = make_cycles(rows);
  std::vector<std::string> group = {"R0:A", "R1:B", "R2:C", "R3:D"};

  // direct evaluation with independent arithmetic
  auto spread = [&](const std::vector<int>& members, int t) {
    double mean = 0.0;
    for (int m : members) mean += rows(m, t);
    mean /= double(members.size());
    double ss = 0.0;
    for (int m : members) ss += (rows(m, t) - mean) * (rows(m, t) - mean);
    return std::sqrt(ss);
  };
  auto gamma_direct = [&](int self) {
    std::vector<int> all = {0, 1, 2, 3};
    std::vector<int> loo;
    for (int m : all)
      if (m != self) loo.push_back(m);
    std::vector<double> diffs;
    for (int t = 0; t < 6; ++t)
      diffs.push_back(std::log(spread(loo, t)) - std::log(spread(all, t)));
    std::sort(diffs.begin(), diffs.end());
    return 0.5 * (diffs[2] + diffs[3]);
  };

  for (int self = 0; self < 4; ++self) {
    double got = proximity_of_sync(cycles, group, group[std::size_t(self)]);
    CHECK(got == doctest::Approx(gamma_direct(self)).epsilon(1e-12));
  }

  // leave-one-out spread never exceeds the full spread, so every gamma is
  // <= 0; the outlier's is far below the conformers'
  double g_outlier = proximity_of_sync(cycles, group, "R3:D");
  double g_conformer = proximity_of_sync(cycles, group, "R1:B");
  CHECK(g_conformer <= 0.0);
  CHECK(g_outlier < -0.5);
  CHECK(g_outlier < g_conformer);
}

TEST_CASE("proximity guards degenerate inputs") {
  Eigen::MatrixXd identical = Eigen::MatrixXd::Ones(3, 6);
  CyclePanel cycles = make_cycles(identical);
  std::vector<std::string> group = {"R0:A", "R1:B", "R2:C"};
  CHECK_THROWS_WITH_AS(proximity_of_sync(cycles, group, "R0:A"),
                       doctest::Contains("all_degenerate"), error);

  CHECK_THROWS_WITH_AS(proximity_of_sync(cycles, {"R0:A", "R1:B"}, "R0:A"),
                       doctest::Contains("group_too_small"), error);
  CHECK_THROWS_WITH_AS(proximity_of_sync(cycles, group, "R9:Z"),
                       doctest::Contains("unknown_indicator"), error);
}

TEST_CASE("group spread has no 1/n and the even median averages the middle pair") {
  Eigen::Vector3d col(1.0, 2.0, 3.0);
  CHECK(detail::group_spread(col) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  std::vector<double> v = {4.0, 1.0, 3.0, 2.0};
  CHECK(detail::median_inplace(v) == 2.5);
  std::vector<double> odd = {5.0, 1.0, 3.0};
  CHECK(detail::median_inplace(odd) == 3.0);
}
