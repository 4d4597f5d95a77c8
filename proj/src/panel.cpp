#include "cyclesync/panel.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "cyclesync/csv.hpp"
#include "cyclesync/error.hpp"

namespace cyclesync {

IndicatorId IndicatorId::parse(const std::string& key, const std::string& where) {
  std::size_t pos = key.find(':');
  require(pos != std::string::npos, errc::missing_value,
          "indicator header '" + key + "' lacks ':' at " + where);
  IndicatorId id{key.substr(0, pos), key.substr(pos + 1)};
  require(!id.region.empty() && !id.sector.empty(), errc::missing_value,
          "indicator header '" + key + "' has an empty part at " + where);
  require(id.sector.find(':') == std::string::npos, errc::missing_value,
          "indicator header '" + key + "' has more than one ':' at " + where);
  return id;
}

std::string QuarterIndex::str() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-Q%d", year, quarter);
  return buf;
}

QuarterIndex QuarterIndex::parse(const std::string& text, const std::string& where) {
  std::string s = csv::strip(text);
  bool ok = s.size() == 7 && s[4] == '-' && s[5] == 'Q' && s[6] >= '1' && s[6] <= '4' &&
            std::all_of(s.begin(), s.begin() + 4, [](unsigned char c) { return std::isdigit(c); });
  require(ok, errc::missing_value, "period '" + s + "' is not YYYY-Qn at " + where);
  QuarterIndex q;
  q.year = std::stoi(s.substr(0, 4));
  q.quarter = s[6] - '0';
  return q;
}

Panel load_panel(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot open '" + path.string() + "'");

  std::string line;
  require(static_cast<bool>(std::getline(in, line)), errc::io_error,
          "empty file '" + path.string() + "'");
  auto header = csv::split(line);
  require(csv::strip(header[0]) == "period", errc::missing_value,
          "first header cell must be 'period', got '" + csv::strip(header[0]) + "'");

  Panel panel;
  std::unordered_set<std::string> seen;
  for (std::size_t c = 1; c < header.size(); ++c) {
    std::string key = csv::strip(header[c]);
    auto id = IndicatorId::parse(key, "header column " + std::to_string(c + 1));
    require(seen.insert(id.key()).second, errc::duplicate_indicator,
            "indicator '" + id.key() + "' appears twice");
    panel.ids.push_back(std::move(id));
  }
  require(panel.ids.size() >= 2, errc::too_short_sample,
          "need at least 2 indicator columns, got " + std::to_string(panel.ids.size()));

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (csv::strip(line).empty()) continue;
    auto cells = csv::split(line);
    std::string where = "row " + std::to_string(lineno);
    require(cells.size() == header.size(), errc::missing_value,
            where + " has " + std::to_string(cells.size()) + " cells, expected " +
                std::to_string(header.size()));
    QuarterIndex q = QuarterIndex::parse(cells[0], where);
    if (!panel.quarters.empty()) {
      require(q.serial() == panel.quarters.back().serial() + 1, errc::non_consecutive_quarters,
              "quarter " + q.str() + " does not follow " + panel.quarters.back().str());
    }
    q.ordinal = static_cast<int>(panel.quarters.size());
    panel.quarters.push_back(q);
    std::vector<double> row(panel.ids.size());
    for (std::size_t c = 1; c < cells.size(); ++c)
      row[c - 1] = csv::parse_double(cells[c], q.str() + " " + panel.ids[c - 1].key() + " (" +
                                                   where + " column " + std::to_string(c + 1) +
                                                   ")");
    rows.push_back(std::move(row));
  }
  require(rows.size() >= 16, errc::too_short_sample,
          "panel has " + std::to_string(rows.size()) + " quarters, need at least 16");

  panel.values.resize(static_cast<Eigen::Index>(panel.ids.size()),
                      static_cast<Eigen::Index>(rows.size()));
  for (std::size_t t = 0; t < rows.size(); ++t)
    for (std::size_t i = 0; i < panel.ids.size(); ++i)
      panel.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = rows[t][i];
  return panel;
}

Panel subset(const Panel& panel, const std::vector<std::string>& keep_keys) {
  require(!keep_keys.empty(), errc::unknown_indicator, "empty keep set");
  std::unordered_map<std::string, int> pos;
  for (std::size_t i = 0; i < panel.ids.size(); ++i)
    pos.emplace(panel.ids[i].key(), static_cast<int>(i));
  std::unordered_set<std::string> keep;
  for (const auto& k : keep_keys) {
    require(pos.count(k) != 0, errc::unknown_indicator, "indicator '" + k + "' not in panel");
    keep.insert(k);
  }
  Panel out;
  out.quarters = panel.quarters;
  std::vector<int> take;
  for (std::size_t i = 0; i < panel.ids.size(); ++i)
    if (keep.count(panel.ids[i].key())) take.push_back(static_cast<int>(i));
  out.values.resize(static_cast<Eigen::Index>(take.size()), panel.values.cols());
  for (std::size_t r = 0; r < take.size(); ++r) {
    out.ids.push_back(panel.ids[static_cast<std::size_t>(take[r])]);
    out.values.row(static_cast<Eigen::Index>(r)) = panel.values.row(take[r]);
  }
  return out;
}

std::vector<int> canonical_order(const std::vector<IndicatorId>& ids) {
  std::vector<int> perm(ids.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    return ids[static_cast<std::size_t>(a)].key() < ids[static_cast<std::size_t>(b)].key();
  });
  return perm;
}

}  // namespace cyclesync
