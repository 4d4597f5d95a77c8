#include "cyclesync/softcluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cyclesync/error.hpp"
#include "cyclesync/rng.hpp"

namespace cyclesync {

void SoftClusterConfig::validate() const {
  require(omega1 >= 1, errc::bad_config, "omega1 must be >= 1");
  require(omega2 >= 1, errc::bad_config, "omega2 must be >= 1");
  require(omega3 >= 1 && resolved_omega6() >= 1, errc::bad_config,
          "omega3 and omega6 must be >= 1");
  require(omega4 >= 0.0 && omega4 <= 1.0, errc::bad_config, "omega4 must lie in [0,1]");
  require(omega5 >= 0.0 && omega5 <= 1.0, errc::bad_config, "omega5 must lie in [0,1]");
  require(kappa >= -1.0 && kappa < 1.0, errc::bad_config, "kappa must lie in [-1,1)");
}

namespace {

struct CanonicalCycles {
  std::vector<IndicatorId> ids;
  Eigen::MatrixXd cycles;  // rows in canonical order
};

CanonicalCycles canonicalize(const CyclePanel& cycles) {
  std::vector<int> perm = canonical_order(cycles.ids);
  CanonicalCycles out;
  out.ids.reserve(cycles.ids.size());
  out.cycles.resize(cycles.cycles.rows(), cycles.cycles.cols());
  for (std::size_t r = 0; r < perm.size(); ++r) {
    out.ids.push_back(cycles.ids[static_cast<std::size_t>(perm[r])]);
    out.cycles.row(static_cast<Eigen::Index>(r)) = cycles.cycles.row(perm[r]);
  }
  return out;
}

// Unique sorted sample of N indices drawn with replacement; resamples with the
// next substream while fewer than k distinct ids come up.
std::vector<int> draw_sample(std::uint64_t seed, long b, int n, int k, long& resamples) {
  for (long attempt = 0;; ++attempt) {
    require(attempt < 100000, errc::internal, "bootstrap resampling did not terminate");
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(attempt));
    std::vector<int> draw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      draw[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    std::sort(draw.begin(), draw.end());
    draw.erase(std::unique(draw.begin(), draw.end()), draw.end());
    if (static_cast<int>(draw.size()) >= k) return draw;
    ++resamples;
  }
}

}  // namespace

CoClusterStats bootstrap_cocluster(const CyclePanel& cycles, const SoftClusterConfig& cfg,
                                   const SyncConfig& sync_cfg, const ThreadPool& pool) {
  cfg.validate();
  CanonicalCycles canon = canonicalize(cycles);
  const int n = static_cast<int>(canon.ids.size());
  require(n >= std::max(2, cfg.omega3), errc::bad_config,
          "need at least max(2, omega3) indicators, got " + std::to_string(n));
  const auto windows = sync_cfg.resolve(static_cast<int>(canon.cycles.cols()));
  require(static_cast<int>(windows.size()) == cfg.omega2, errc::bad_config,
          "omega2=" + std::to_string(cfg.omega2) + " does not match " +
              std::to_string(windows.size()) + " sync windows");

  // Per-window dissimilarities, computed once and sliced per iteration.
  std::vector<Eigen::MatrixXd> dw;
  dw.reserve(windows.size());
  for (const auto& w : windows) {
    Eigen::MatrixXd phi = phi_matrix(canon.cycles, w, sync_cfg.zero_epsilon);
    Eigen::MatrixXd d = Eigen::MatrixXd::Ones(n, n) - phi;
    d.diagonal().setZero();
    dw.push_back(std::move(d));
  }

  using CountMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
  const int workers = pool.size();
  std::vector<CountMatrix> co_m(static_cast<std::size_t>(workers), CountMatrix::Zero(n, n));
  std::vector<CountMatrix> co_s(static_cast<std::size_t>(workers), CountMatrix::Zero(n, n));
  std::vector<long> degen(static_cast<std::size_t>(workers), 0);

  pool.parallel_for(cfg.omega1, [&](std::int64_t b0, int worker) {
    const long b = static_cast<long>(b0) + 1;
    std::vector<int> sample = draw_sample(cfg.seed, b, n, cfg.omega3,
                                          degen[static_cast<std::size_t>(worker)]);
    const int m = static_cast<int>(sample.size());
    Eigen::MatrixXd sub(m, m);
    CountMatrix& cm = co_m[static_cast<std::size_t>(worker)];
    CountMatrix& cs = co_s[static_cast<std::size_t>(worker)];
    for (const auto& d : dw) {
      for (int a = 0; a < m; ++a)
        for (int c = 0; c < m; ++c)
          sub(a, c) = d(sample[static_cast<std::size_t>(a)], sample[static_cast<std::size_t>(c)]);
      Clustering clus = ward_cluster(sub, cfg.omega3, cfg.ward).second;
      for (int a = 0; a < m; ++a) {
        const int ia = sample[static_cast<std::size_t>(a)];
        for (int c = a; c < m; ++c) {
          const int ic = sample[static_cast<std::size_t>(c)];
          cs(ia, ic) += 1;
          if (clus.assignment[static_cast<std::size_t>(a)] ==
              clus.assignment[static_cast<std::size_t>(c)])
            cm(ia, ic) += 1;
        }
      }
    }
  });

  CoClusterStats stats;
  stats.ids = std::move(canon.ids);
  for (int w = 1; w < workers; ++w) {
    co_m[0] += co_m[static_cast<std::size_t>(w)];
    co_s[0] += co_s[static_cast<std::size_t>(w)];
    degen[0] += degen[static_cast<std::size_t>(w)];
  }
  stats.degenerate_resamples = degen[0];
  stats.co_sampled = CountMatrix::Zero(n, n);
  stats.p = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const long long s = co_s[0](i, j);
      stats.co_sampled(i, j) = s;
      stats.co_sampled(j, i) = s;
      double p = 0.0;
      if (i == j) {
        p = 1.0;
      } else if (s > 0) {
        p = static_cast<double>(co_m[0](i, j)) / static_cast<double>(s);
      } else {
        stats.never_cosampled = true;
      }
      stats.p(i, j) = p;
      stats.p(j, i) = p;
    }
  }
  return stats;
}

ThresholdResult threshold_dropout(const CoClusterStats& stats, double omega4, double omega5) {
  const int n = static_cast<int>(stats.p.rows());
  ThresholdResult res;
  res.likelihoods.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      if (stats.p(i, j) > omega4) acc += stats.p(i, j);
    res.likelihoods[static_cast<std::size_t>(i)] = acc;
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return res.likelihoods[static_cast<std::size_t>(a)] < res.likelihoods[static_cast<std::size_t>(b)];
  });
  // The 1e-9 nudge keeps floor() at the exact-arithmetic value for fractions
  // like 0.3 * 30 that land just below an integer in binary.
  const int ndrop = std::min(n, static_cast<int>(std::floor(omega5 * n + 1e-9)));
  res.dropped.assign(order.begin(), order.begin() + ndrop);
  res.retained.assign(order.begin() + ndrop, order.end());
  std::sort(res.retained.begin(), res.retained.end());
  return res;
}

SoftClusterResult soft_cluster_from_stats(const CyclePanel& cycles, const CoClusterStats& stats,
                                          const SoftClusterConfig& cfg,
                                          const SyncConfig& sync_cfg) {
  cfg.validate();
  CanonicalCycles canon = canonicalize(cycles);
  const int n = static_cast<int>(stats.p.rows());
  require(static_cast<int>(canon.ids.size()) == n, errc::bad_config,
          "cycle panel and stats disagree on N");
  const int k_final = cfg.resolved_omega6();

  SoftClusterResult res;
  res.ids = stats.ids;
  res.stats = stats;

  ThresholdResult thr = threshold_dropout(stats, cfg.omega4, cfg.omega5);
  res.likelihoods = thr.likelihoods;
  require(!thr.retained.empty(), errc::everything_removed, "drop-out removed every indicator");
  require(static_cast<int>(thr.retained.size()) >= k_final, errc::bad_k,
          "omega6=" + std::to_string(k_final) + " exceeds " +
              std::to_string(thr.retained.size()) + " retained indicators");

  const int m = static_cast<int>(thr.retained.size());
  Eigen::MatrixXd d(m, m);
  for (int a = 0; a < m; ++a) {
    for (int c = 0; c < m; ++c) {
      d(a, c) = a == c ? 0.0
                       : 1.0 - stats.p(thr.retained[static_cast<std::size_t>(a)],
                                       thr.retained[static_cast<std::size_t>(c)]);
    }
  }
  Clustering pre = ward_cluster(d, k_final, cfg.ward).second;
  CleanupResult clean = silhouette_cleanup(d, pre, cfg.kappa);

  // Silhouettes of the final clustering on the cleaned submatrix.
  const int mk = static_cast<int>(clean.retained.size());
  Eigen::MatrixXd dk(mk, mk);
  for (int a = 0; a < mk; ++a)
    for (int c = 0; c < mk; ++c)
      dk(a, c) = d(clean.retained[static_cast<std::size_t>(a)],
                   clean.retained[static_cast<std::size_t>(c)]);
  res.silhouettes = silhouette(dk, clean.clustering);
  res.retained_clustering = clean.clustering;

  // Through-cycle synchronicity over the full sample ranks the clusters.
  const Window full{0, static_cast<int>(canon.cycles.cols())};
  Eigen::MatrixXd phi = phi_matrix(canon.cycles, full, sync_cfg.zero_epsilon);
  const int k = clean.clustering.k;
  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  for (int a = 0; a < mk; ++a) {
    int global = thr.retained[static_cast<std::size_t>(clean.retained[static_cast<std::size_t>(a)])];
    members[static_cast<std::size_t>(clean.clustering.assignment[static_cast<std::size_t>(a)] - 1)]
        .push_back(global);
  }
  res.cluster_phibar.assign(static_cast<std::size_t>(k), 0.0);
  for (int c = 0; c < k; ++c) {
    const auto& mem = members[static_cast<std::size_t>(c)];
    if (mem.size() < 2) continue;  // singleton convention: phibar 0
    double acc = 0.0;
    long cnt = 0;
    for (std::size_t a = 0; a < mem.size(); ++a)
      for (std::size_t b = a + 1; b < mem.size(); ++b) {
        acc += phi(mem[a], mem[b]);
        ++cnt;
      }
    res.cluster_phibar[static_cast<std::size_t>(c)] = acc / static_cast<double>(cnt);
  }
  std::vector<int> rank(static_cast<std::size_t>(k));
  std::iota(rank.begin(), rank.end(), 0);
  std::sort(rank.begin(), rank.end(), [&](int a, int b) {
    double pa = res.cluster_phibar[static_cast<std::size_t>(a)];
    double pb = res.cluster_phibar[static_cast<std::size_t>(b)];
    if (pa != pb) return pa > pb;
    return a < b;
  });
  res.cluster_names.assign(static_cast<std::size_t>(k), "");
  for (int r = 0; r < k; ++r) {
    std::string name;
    if (r == 0)
      name = "Synchronous";
    else if (r == k - 1)
      name = "Asynchronous";
    else
      name = "Rank" + std::to_string(r + 1);
    res.cluster_names[static_cast<std::size_t>(rank[static_cast<std::size_t>(r)])] = name;
  }

  res.labels.assign(static_cast<std::size_t>(n), "Dropped");
  for (int a = 0; a < mk; ++a) {
    int global = thr.retained[static_cast<std::size_t>(clean.retained[static_cast<std::size_t>(a)])];
    res.retained.push_back(global);
    res.labels[static_cast<std::size_t>(global)] = res.cluster_names[static_cast<std::size_t>(
        clean.clustering.assignment[static_cast<std::size_t>(a)] - 1)];
  }
  res.dropout = thr.dropped;
  for (int pos : clean.removed)
    res.dropout.push_back(thr.retained[static_cast<std::size_t>(pos)]);
  return res;
}

SoftClusterResult soft_cluster(const CyclePanel& cycles, const SoftClusterConfig& cfg,
                               const SyncConfig& sync_cfg, const ThreadPool& pool) {
  CoClusterStats stats = bootstrap_cocluster(cycles, cfg, sync_cfg, pool);
  return soft_cluster_from_stats(cycles, stats, cfg, sync_cfg);
}

GridReport grid_search(const CyclePanel& cycles, const std::vector<int>& omega3_grid,
                       const std::vector<double>& omega4_grid,
                       const std::vector<double>& omega5_grid, const SoftClusterConfig& base,
                       const SyncConfig& sync_cfg, const ThreadPool& pool) {
  require(!omega3_grid.empty() && !omega4_grid.empty() && !omega5_grid.empty(), errc::bad_config,
          "grid axes must be non-empty");
  GridReport report;
  report.cells.resize(omega3_grid.size() * omega4_grid.size() * omega5_grid.size());
  const std::size_t per3 = omega4_grid.size() * omega5_grid.size();
  for (std::size_t i3 = 0; i3 < omega3_grid.size(); ++i3) {
    SoftClusterConfig cfg = base;
    cfg.omega3 = omega3_grid[i3];
    cfg.omega6 = 0;  // omega6 follows omega3 in the grid
    CoClusterStats stats = bootstrap_cocluster(cycles, cfg, sync_cfg, pool);
    pool.parallel_for(static_cast<std::int64_t>(per3), [&](std::int64_t cell, int) {
      const std::size_t i4 = static_cast<std::size_t>(cell) / omega5_grid.size();
      const std::size_t i5 = static_cast<std::size_t>(cell) % omega5_grid.size();
      SoftClusterConfig cellcfg = cfg;
      cellcfg.omega4 = omega4_grid[i4];
      cellcfg.omega5 = omega5_grid[i5];
      GridCell& out = report.cells[i3 * per3 + static_cast<std::size_t>(cell)];
      out.omega3 = cellcfg.omega3;
      out.omega4 = cellcfg.omega4;
      out.omega5 = cellcfg.omega5;
      try {
        // Pre-cleanup silhouette: clustering straight after the cut.
        ThresholdResult thr = threshold_dropout(stats, cellcfg.omega4, cellcfg.omega5);
        require(!thr.retained.empty(), errc::everything_removed,
                "drop-out removed every indicator");
        require(static_cast<int>(thr.retained.size()) >= cellcfg.resolved_omega6(), errc::bad_k,
                "omega6 exceeds retained count");
        const int m = static_cast<int>(thr.retained.size());
        Eigen::MatrixXd d(m, m);
        for (int a = 0; a < m; ++a)
          for (int c = 0; c < m; ++c)
            d(a, c) = a == c ? 0.0
                             : 1.0 - stats.p(thr.retained[static_cast<std::size_t>(a)],
                                             thr.retained[static_cast<std::size_t>(c)]);
        Clustering pre = ward_cluster(d, cellcfg.resolved_omega6(), cellcfg.ward).second;
        SilhouetteReport pre_rep = silhouette(d, pre);
        out.avg_sil_pre =
            std::accumulate(pre_rep.per_cluster.begin(), pre_rep.per_cluster.end(), 0.0) /
            static_cast<double>(pre_rep.per_cluster.size());
        out.min_sil_pre = *std::min_element(pre_rep.per_cluster.begin(), pre_rep.per_cluster.end());

        SoftClusterResult res = soft_cluster_from_stats(cycles, stats, cellcfg, sync_cfg);
        out.avg_sil_post =
            std::accumulate(res.silhouettes.per_cluster.begin(), res.silhouettes.per_cluster.end(),
                            0.0) /
            static_cast<double>(res.silhouettes.per_cluster.size());
        out.min_sil_post =
            *std::min_element(res.silhouettes.per_cluster.begin(), res.silhouettes.per_cluster.end());
        for (const auto& lab : res.labels) {
          if (lab == "Synchronous")
            ++out.size_sync;
          else if (lab == "Asynchronous")
            ++out.size_async;
          else if (lab == "Dropped")
            ++out.size_drop;
        }
        out.ok = true;
      } catch (const error& e) {
        out.ok = false;
        out.error = errc_name(e.code());
      }
    });
  }
  return report;
}

}  // namespace cyclesync
