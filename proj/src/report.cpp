#include "cyclesync/report.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "cyclesync/csv.hpp"
#include "cyclesync/rng.hpp"
#include "cyclesync/stats.hpp"

namespace cyclesync {

namespace {

Eigen::VectorXd power_leading(const Eigen::MatrixXd& g, double tol, double* lambda) {
  const Eigen::Index n = g.rows();
  Eigen::VectorXd u = Eigen::VectorXd::Ones(n) / std::sqrt(double(n));
  for (int restart = 0; restart < 8; ++restart) {
    bool annihilated = false;
    for (int it = 0; it < 100000; ++it) {
      Eigen::VectorXd next = g * u;
      const double nrm = next.norm();
      if (nrm < 1e-300) {
        // start vector lies in the null space (standardized rows can sum to
        // zero without rounding noise); retry from a seeded random direction
        annihilated = true;
        break;
      }
      next /= nrm;
      if ((next - u).norm() < tol) {
        *lambda = next.dot(g * next);
        return next;
      }
      u = next;
    }
    if (!annihilated) break;
    Rng rng = Rng::derive(0x70636c65, std::uint64_t(restart), 0);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.normal();
    const double nrm = u.norm();
    if (nrm > 0.0) u /= nrm;
  }
  *lambda = u.dot(g * u);
  return u;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

PcSummary first_pc(const CyclePanel& cycles, const std::vector<std::string>& members) {
  std::map<std::string, int> row_of;
  for (int i = 0; i < int(cycles.ids.size()); ++i) row_of.emplace(cycles.ids[i].key(), i);

  PcSummary out;
  std::vector<int> rows;
  for (const auto& key : members) {
    auto it = row_of.find(key);
    require(it != row_of.end(), errc::unknown_indicator, "indicator " + key + " not in panel");
    const double sd = sample_sd(cycles.cycles.row(it->second));
    if (sd == 0.0) {
      out.dropped_members.push_back(key);
    } else {
      rows.push_back(it->second);
    }
  }
  require(rows.size() >= 2, errc::group_too_small,
          "first_pc needs at least 2 members with variance, got " + std::to_string(rows.size()));

  const Eigen::Index t = cycles.cycles.cols();
  const Eigen::Index m = Eigen::Index(rows.size());
  Eigen::MatrixXd z(m, t);
  for (Eigen::Index i = 0; i < m; ++i) z.row(i) = standardize(cycles.cycles.row(rows[size_t(i)]));

  double lambda = 0.0;
  Eigen::VectorXd comp;
  if (m <= t) {
    const Eigen::MatrixXd gram = z * z.transpose() / double(t - 1);
    const Eigen::VectorXd w = power_leading(gram, 1e-10, &lambda);
    comp = z.transpose() * w;
  } else {
    const Eigen::MatrixXd gram = z.transpose() * z / double(t - 1);
    comp = power_leading(gram, 1e-10, &lambda);
  }
  out.explained_fraction = lambda / double(m);
  out.n_members = int(m);

  const double sd = sample_sd(comp);
  if (sd > 0.0) comp /= sd;
  const Eigen::VectorXd mean_series = z.colwise().mean();
  if (comp.dot(mean_series) < 0.0) comp = -comp;
  out.component = comp;
  return out;
}

CompositionTable composition_table(const SoftClusterResult& result) {
  std::set<std::string> rset, sset;
  for (const auto& id : result.ids) {
    rset.insert(id.region);
    sset.insert(id.sector);
  }
  CompositionTable table;
  table.regions.assign(rset.begin(), rset.end());
  table.sectors.assign(sset.begin(), sset.end());
  std::map<std::string, int> ri, si;
  for (int i = 0; i < int(table.regions.size()); ++i) ri[table.regions[i]] = i;
  for (int i = 0; i < int(table.sectors.size()); ++i) si[table.sectors[i]] = i;

  table.cells.assign(table.regions.size(),
                     std::vector<std::string>(table.sectors.size(), ""));
  table.region_asd.assign(table.regions.size(), {0, 0, 0});
  table.sector_asd.assign(table.sectors.size(), {0, 0, 0});

  for (size_t i = 0; i < result.ids.size(); ++i) {
    const int r = ri[result.ids[i].region];
    const int s = si[result.ids[i].sector];
    const std::string& label = result.labels[i];
    int slot;  // 0=A 1=S 2=D
    if (label == "Synchronous") {
      table.cells[size_t(r)][size_t(s)] = "+";
      slot = 1;
    } else if (label == "Asynchronous") {
      table.cells[size_t(r)][size_t(s)] = "-";
      slot = 0;
    } else if (label == "Dropped") {
      slot = 2;
    } else {
      table.cells[size_t(r)][size_t(s)] = "o";  // intermediate rank when omega6 > 2
      continue;
    }
    table.region_asd[size_t(r)][size_t(slot)] += 1;
    table.sector_asd[size_t(s)][size_t(slot)] += 1;
  }
  return table;
}

std::vector<CountryCount> country_counts(const SoftClusterResult& result,
                                         const CyclePanel& cycles) {
  std::vector<std::string> sync_keys;
  for (size_t i = 0; i < result.ids.size(); ++i)
    if (result.labels[i] == "Synchronous") sync_keys.push_back(result.ids[i].key());

  std::map<std::string, CountryCount> by_region;
  for (const auto& id : result.ids) {
    auto& c = by_region[id.region];
    c.region = id.region;
  }
  const bool gamma_ok = sync_keys.size() >= 3;
  for (size_t i = 0; i < result.ids.size(); ++i) {
    if (result.labels[i] != "Synchronous") continue;
    auto& c = by_region[result.ids[i].region];
    c.sync_count += 1;
    if (!gamma_ok) continue;
    const double g = proximity_of_sync(cycles, sync_keys, result.ids[i].key());
    c.gamma_sum = (std::isnan(c.gamma_sum) ? g : c.gamma_sum + g);
  }
  std::vector<CountryCount> out;
  out.reserve(by_region.size());
  for (auto& [_, c] : by_region) out.push_back(std::move(c));
  return out;
}

std::string num_or_na(double v) { return std::isnan(v) ? "NA" : csv::g17(v); }

void write_panel(const std::filesystem::path& path, const Panel& panel) {
  auto out = open_out(path);
  out << "period";
  for (const auto& id : panel.ids) out << "," << id.key();
  out << "\n";
  for (int t = 0; t < panel.t(); ++t) {
    out << panel.quarters[size_t(t)].str();
    for (int i = 0; i < panel.n(); ++i) out << "," << csv::g17(panel.values(i, t));
    out << "\n";
  }
}

void write_cycles(const std::filesystem::path& path, const CyclePanel& cycles) {
  auto out = open_out(path);
  out << "period";
  for (const auto& id : cycles.ids) out << "," << id.key();
  out << "\n";
  for (Eigen::Index t = 0; t < cycles.cycles.cols(); ++t) {
    out << cycles.quarters[size_t(t)].str();
    for (Eigen::Index i = 0; i < cycles.cycles.rows(); ++i)
      out << "," << csv::g17(cycles.cycles(i, t));
    out << "\n";
  }
}

void write_mra(const std::filesystem::path& path, const MraStack<double>& stack,
               const std::vector<QuarterIndex>& quarters) {
  auto out = open_out(path);
  out << "period";
  for (size_t j = 0; j < stack.details.size(); ++j) out << ",D" << (j + 1);
  out << ",S" << stack.details.size() << "\n";
  const Eigen::Index t = stack.smooth.size();
  for (Eigen::Index i = 0; i < t; ++i) {
    out << quarters[size_t(i)].str();
    for (const auto& d : stack.details) out << "," << csv::g17(d(i));
    out << "," << csv::g17(stack.smooth(i)) << "\n";
  }
}

void write_dissimilarity(const std::filesystem::path& path, const DissimilarityMatrix& dm) {
  auto out = open_out(path);
  out << "indicator";
  for (const auto& id : dm.ids) out << "," << id.key();
  out << "\n";
  for (Eigen::Index i = 0; i < dm.d.rows(); ++i) {
    out << dm.ids[size_t(i)].key();
    for (Eigen::Index j = 0; j < dm.d.cols(); ++j) out << "," << csv::g17(dm.d(i, j));
    out << "\n";
  }
}

void write_assignments(const std::filesystem::path& path, const SoftClusterResult& result) {
  auto out = open_out(path);
  out << "indicator,region,sector,label,L,silhouette\n";
  std::map<int, double> sil;
  for (size_t i = 0; i < result.retained.size(); ++i)
    sil[result.retained[i]] = result.silhouettes.per_id[i];
  for (size_t i = 0; i < result.ids.size(); ++i) {
    const auto& id = result.ids[i];
    auto it = sil.find(int(i));
    out << id.key() << "," << id.region << "," << id.sector << "," << result.labels[i] << ","
        << csv::g17(result.likelihoods[i]) << ","
        << (it == sil.end() ? "NA" : csv::g17(it->second)) << "\n";
  }
}

void write_probabilities(const std::filesystem::path& path, const CoClusterStats& stats) {
  auto out = open_out(path);
  out << "indicator";
  for (const auto& id : stats.ids) out << "," << id.key();
  out << "\n";
  for (Eigen::Index i = 0; i < stats.p.rows(); ++i) {
    out << stats.ids[size_t(i)].key();
    for (Eigen::Index j = 0; j < stats.p.cols(); ++j) out << "," << csv::g17(stats.p(i, j));
    out << "\n";
  }
}

void write_grid(const std::filesystem::path& path, const GridReport& report) {
  auto out = open_out(path);
  out << "omega3,omega4,omega5,avg_sil_pre,min_sil_pre,avg_sil_post,min_sil_post,"
         "size_sync,size_async,size_drop,error\n";
  for (const auto& cell : report.cells) {
    out << cell.omega3 << "," << csv::g17(cell.omega4) << "," << csv::g17(cell.omega5) << ",";
    if (cell.ok) {
      out << num_or_na(cell.avg_sil_pre) << "," << num_or_na(cell.min_sil_pre) << ","
          << num_or_na(cell.avg_sil_post) << "," << num_or_na(cell.min_sil_post) << ","
          << cell.size_sync << "," << cell.size_async << "," << cell.size_drop << ",\n";
    } else {
      out << "NA,NA,NA,NA,NA,NA,NA," << cell.error << "\n";
    }
  }
}

void write_turning_points(const std::filesystem::path& path,
                          const std::vector<IndicatorId>& ids,
                          const std::vector<PhaseChronology>& chrons,
                          const std::vector<QuarterIndex>& quarters) {
  auto out = open_out(path);
  out << "indicator,quarter,kind,value\n";
  for (size_t i = 0; i < ids.size(); ++i) {
    for (const auto& tp : chrons[i].turning_points) {
      out << ids[i].key() << "," << quarters[size_t(tp.t)].str() << ","
          << (tp.kind == TurnKind::peak ? "peak" : "trough") << "," << csv::g17(tp.value)
          << "\n";
    }
  }
}

void write_phase_stats(const std::filesystem::path& path, const std::vector<IndicatorId>& ids,
                       const std::vector<PhaseStats>& stats, const std::vector<double>& sync_ref,
                       const std::vector<double>& gamma) {
  auto out = open_out(path);
  out << "indicator,amp_exp,amp_con,dur_exp,dur_con,cycle_len,scale,sync_ref,gamma\n";
  for (size_t i = 0; i < ids.size(); ++i) {
    const auto& s = stats[i];
    out << ids[i].key() << "," << num_or_na(s.mean_amp_expansion) << ","
        << num_or_na(s.mean_amp_contraction) << "," << num_or_na(s.mean_dur_expansion) << ","
        << num_or_na(s.mean_dur_contraction) << "," << num_or_na(s.cycle_length) << ","
        << num_or_na(s.scale) << "," << num_or_na(sync_ref[i]) << "," << num_or_na(gamma[i])
        << "\n";
  }
}

void write_pc(const std::filesystem::path& path, const std::vector<QuarterIndex>& quarters,
              const PcSummary& pc) {
  auto out = open_out(path);
  out << "period,component\n";
  for (Eigen::Index t = 0; t < pc.component.size(); ++t)
    out << quarters[size_t(t)].str() << "," << csv::g17(pc.component(t)) << "\n";
}

void write_composition(const std::filesystem::path& path, const CompositionTable& table) {
  auto out = open_out(path);
  out << "region";
  for (const auto& s : table.sectors) out << "," << s;
  out << ",A,S,D\n";
  for (size_t r = 0; r < table.regions.size(); ++r) {
    out << table.regions[r];
    for (size_t s = 0; s < table.sectors.size(); ++s) out << "," << table.cells[r][s];
    out << "," << table.region_asd[r][0] << "," << table.region_asd[r][1] << ","
        << table.region_asd[r][2] << "\n";
  }
  const char* margin[3] = {"A", "S", "D"};
  for (int k = 0; k < 3; ++k) {
    out << margin[k];
    for (size_t s = 0; s < table.sectors.size(); ++s)
      out << "," << table.sector_asd[s][size_t(k)];
    out << ",,,\n";
  }
}

void write_country_counts(const std::filesystem::path& path,
                          const std::vector<CountryCount>& counts) {
  auto out = open_out(path);
  out << "region,sync_count,gamma_sum\n";
  for (const auto& c : counts)
    out << c.region << "," << c.sync_count << "," << num_or_na(c.gamma_sum) << "\n";
}

namespace {

void node_json(std::ostream& out, int node, const Dendrogram& dendro,
               const std::vector<IndicatorId>& ids) {
  if (node < dendro.n_leaves) {
    out << "{\"leaf\":\"" << ids[size_t(node)].key() << "\"}";
    return;
  }
  const auto& m = dendro.merges[size_t(node - dendro.n_leaves)];
  out << "{\"height\":" << csv::g17(m.height) << ",\"children\":[";
  node_json(out, m.left, dendro, ids);
  out << ",";
  node_json(out, m.right, dendro, ids);
  out << "]}";
}

}  // namespace

void write_dendrogram_json(const std::filesystem::path& path, const Dendrogram& dendro,
                           const std::vector<IndicatorId>& ids) {
  auto out = open_out(path);
  if (dendro.merges.empty()) {
    out << "{\"leaf\":\"" << (ids.empty() ? "" : ids[0].key()) << "\"}\n";
    return;
  }
  node_json(out, dendro.n_leaves + int(dendro.merges.size()) - 1, dendro, ids);
  out << "\n";
}

}  // namespace cyclesync
