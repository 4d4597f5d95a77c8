#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace cyclesync {

struct IndicatorId {
  std::string region;
  std::string sector;

  std::string key() const { return region + ":" + sector; }
  static IndicatorId parse(const std::string& key, const std::string& where);
};

struct QuarterIndex {
  int year = 0;
  int quarter = 1;  // 1..4
  int ordinal = 0;  // offset from the first sample quarter

  std::string str() const;
  static QuarterIndex parse(const std::string& text, const std::string& where);
  // year*4 + quarter-1; consecutive quarters differ by exactly 1.
  long serial() const { return static_cast<long>(year) * 4 + quarter - 1; }
};

struct Panel {
  std::vector<IndicatorId> ids;       // length N
  std::vector<QuarterIndex> quarters; // length T
  Eigen::MatrixXd values;             // N x T

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index t() const { return values.cols(); }
};

Panel load_panel(const std::filesystem::path& path);

// Kept rows in their original relative order.
Panel subset(const Panel& panel, const std::vector<std::string>& keep_keys);

// Permutation sorting ids lexicographically by key; the order used whenever
// results must not depend on input row order.
std::vector<int> canonical_order(const std::vector<IndicatorId>& ids);

}  // namespace cyclesync
