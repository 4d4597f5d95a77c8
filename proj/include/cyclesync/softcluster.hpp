#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "cyclesync/hcluster.hpp"
#include "cyclesync/parallel.hpp"
#include "cyclesync/sync.hpp"
#include "cyclesync/wavelet.hpp"

namespace cyclesync {

struct SoftClusterConfig {
  long omega1 = 1000;       // bootstrap draws
  int omega2 = 1;           // window count; must match the sync window list
  int omega3 = 2;           // clusters per bootstrap run
  double omega4 = 0.8;      // probability threshold
  double omega5 = 0.45;     // drop-out fraction
  int omega6 = 0;           // final cluster count; 0 means omega3
  double kappa = 0.0;       // cleanup threshold
  std::uint64_t seed = 1;
  WardVariant ward = WardVariant::d2;

  int resolved_omega6() const { return omega6 > 0 ? omega6 : omega3; }
  void validate() const;
};

struct CoClusterStats {
  std::vector<IndicatorId> ids;  // canonical (key-sorted) order
  Eigen::MatrixXd p;             // co-clustering probabilities, unit diagonal
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> co_sampled;
  long degenerate_resamples = 0;
  bool never_cosampled = false;  // some off-diagonal pair never co-sampled
};

struct ThresholdResult {
  std::vector<double> likelihoods;  // L_i in stats id order
  std::vector<int> dropped;         // positions, ascending-L drop order
  std::vector<int> retained;        // positions, ascending
};

struct SoftClusterResult {
  std::vector<IndicatorId> ids;             // canonical order
  std::vector<std::string> labels;          // per id
  std::vector<double> likelihoods;          // per id
  std::vector<int> retained;                // canonical positions kept after cleanup
  Clustering retained_clustering;           // over retained
  SilhouetteReport silhouettes;             // on the final clustering
  std::vector<std::string> cluster_names;   // per final cluster 1..k
  std::vector<double> cluster_phibar;       // mean within-cluster phi, per cluster
  std::vector<int> dropout;                 // threshold drops then cleanup removals
  CoClusterStats stats;
};

struct GridCell {
  int omega3 = 0;
  double omega4 = 0.0;
  double omega5 = 0.0;
  bool ok = false;
  std::string error;  // errc name when failed
  double avg_sil_pre = 0.0, min_sil_pre = 0.0;
  double avg_sil_post = 0.0, min_sil_post = 0.0;
  int size_sync = 0, size_async = 0, size_drop = 0;
};

struct GridReport {
  std::vector<GridCell> cells;
};

CoClusterStats bootstrap_cocluster(const CyclePanel& cycles, const SoftClusterConfig& cfg,
                                   const SyncConfig& sync_cfg,
                                   const ThreadPool& pool = ThreadPool(1));

ThresholdResult threshold_dropout(const CoClusterStats& stats, double omega4, double omega5);

// Steps 4-5 plus labeling, from precomputed stats; shared by soft_cluster and
// grid_search so a single-cell grid equals the direct call.
SoftClusterResult soft_cluster_from_stats(const CyclePanel& cycles, const CoClusterStats& stats,
                                          const SoftClusterConfig& cfg,
                                          const SyncConfig& sync_cfg);

SoftClusterResult soft_cluster(const CyclePanel& cycles, const SoftClusterConfig& cfg,
                               const SyncConfig& sync_cfg, const ThreadPool& pool = ThreadPool(1));

GridReport grid_search(const CyclePanel& cycles, const std::vector<int>& omega3_grid,
                       const std::vector<double>& omega4_grid,
                       const std::vector<double>& omega5_grid, const SoftClusterConfig& base,
                       const SyncConfig& sync_cfg, const ThreadPool& pool = ThreadPool(1));

}  // namespace cyclesync
