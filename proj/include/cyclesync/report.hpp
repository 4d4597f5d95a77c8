#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cyclesync/bbq.hpp"
#include "cyclesync/hcluster.hpp"
#include "cyclesync/softcluster.hpp"
#include "cyclesync/sync.hpp"
#include "cyclesync/wavelet.hpp"

namespace cyclesync {

struct PcSummary {
  Eigen::VectorXd component;     // length T, unit variance, oriented
  double explained_fraction = 0.0;
  int n_members = 0;
  std::vector<std::string> dropped_members;  // zero-variance ids, excluded
};

// First principal component of the standardized member cycles; the eigenproblem
// runs on the smaller of the N x N / T x T Gram matrices via power iteration.
PcSummary first_pc(const CyclePanel& cycles, const std::vector<std::string>& members);

struct CompositionTable {
  std::vector<std::string> regions;  // sorted
  std::vector<std::string> sectors;  // sorted
  // cell(r, s): "+" Synchronous, "-" Asynchronous, "" Dropped or absent,
  // "o" intermediate rank labels when omega6 > 2
  std::vector<std::vector<std::string>> cells;
  std::vector<std::array<int, 3>> region_asd;  // per region: {A, S, D}
  std::vector<std::array<int, 3>> sector_asd;  // per sector: {A, S, D}
};

CompositionTable composition_table(const SoftClusterResult& result);

struct CountryCount {
  std::string region;
  int sync_count = 0;
  double gamma_sum = std::numeric_limits<double>::quiet_NaN();  // NaN when count 0 or undefined
};

std::vector<CountryCount> country_counts(const SoftClusterResult& result,
                                         const CyclePanel& cycles);

// ---- CSV / JSON emission; all floats at 17 significant digits, NaN as NA ----

std::string num_or_na(double v);

void write_panel(const std::filesystem::path& path, const Panel& panel);
void write_cycles(const std::filesystem::path& path, const CyclePanel& cycles);
void write_mra(const std::filesystem::path& path, const MraStack<double>& stack,
               const std::vector<QuarterIndex>& quarters);
void write_dissimilarity(const std::filesystem::path& path, const DissimilarityMatrix& dm);
void write_assignments(const std::filesystem::path& path, const SoftClusterResult& result);
void write_probabilities(const std::filesystem::path& path, const CoClusterStats& stats);
void write_grid(const std::filesystem::path& path, const GridReport& report);
void write_turning_points(const std::filesystem::path& path,
                          const std::vector<IndicatorId>& ids,
                          const std::vector<PhaseChronology>& chrons,
                          const std::vector<QuarterIndex>& quarters);
void write_phase_stats(const std::filesystem::path& path, const std::vector<IndicatorId>& ids,
                       const std::vector<PhaseStats>& stats, const std::vector<double>& sync_ref,
                       const std::vector<double>& gamma);
void write_pc(const std::filesystem::path& path, const std::vector<QuarterIndex>& quarters,
              const PcSummary& pc);
void write_composition(const std::filesystem::path& path, const CompositionTable& table);
void write_country_counts(const std::filesystem::path& path,
                          const std::vector<CountryCount>& counts);
void write_dendrogram_json(const std::filesystem::path& path, const Dendrogram& dendro,
                           const std::vector<IndicatorId>& ids);

}  // namespace cyclesync
