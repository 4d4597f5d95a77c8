#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cyclesync/error.hpp"
#include "cyclesync/stats.hpp"
#include "cyclesync/sync.hpp"
#include "cyclesync/wavelet.hpp"

namespace cyclesync {

enum class TurnKind { peak, trough };

struct TurningPoint {
  int t = 0;
  TurnKind kind = TurnKind::peak;
  double value = 0.0;
};

enum class PhaseKind { expansion, contraction };

struct Phase {
  PhaseKind kind = PhaseKind::expansion;
  int start = 0;
  int end = 0;
  int duration = 0;      // end - start, quarters
  double amplitude = 0;  // |c(end) - c(start)|
  bool complete = true;  // false only for the open segment after the last point
};

struct PhaseChronology {
  std::vector<TurningPoint> turning_points;
  std::vector<Phase> phases;
};

struct PhaseStats {
  double mean_amp_expansion = std::numeric_limits<double>::quiet_NaN();
  double mean_amp_contraction = std::numeric_limits<double>::quiet_NaN();
  double mean_dur_expansion = std::numeric_limits<double>::quiet_NaN();
  double mean_dur_contraction = std::numeric_limits<double>::quiet_NaN();
  double cycle_length = std::numeric_limits<double>::quiet_NaN();
  double scale = std::numeric_limits<double>::quiet_NaN();  // sd of the raw cycle
  int n_expansions = 0;
  int n_contractions = 0;
};

namespace detail {

// Candidate extrema: strict against earlier neighbours, weak against later, so
// a plateau dates at its earliest quarter.
template <typename Derived>
std::vector<TurningPoint> bbq_candidates(const Eigen::MatrixBase<Derived>& c, int k) {
  std::vector<TurningPoint> out;
  const int T = static_cast<int>(c.size());
  for (int t = k; t + k < T; ++t) {
    bool peak = true, trough = true;
    for (int d = 1; d <= k; ++d) {
      if (!(c[t] > c[t - d] && c[t] >= c[t + d])) peak = false;
      if (!(c[t] < c[t - d] && c[t] <= c[t + d])) trough = false;
    }
    if (peak)
      out.push_back({t, TurnKind::peak, static_cast<double>(c[t])});
    else if (trough)
      out.push_back({t, TurnKind::trough, static_cast<double>(c[t])});
  }
  return out;
}

// Higher peak wins, lower trough wins, earlier quarter on ties.
inline bool prefer_first(const TurningPoint& a, const TurningPoint& b) {
  if (a.value != b.value)
    return a.kind == TurnKind::peak ? a.value > b.value : a.value < b.value;
  return true;
}

// One censoring pass; returns true if it deleted something.
inline bool censor_once(std::vector<TurningPoint>& tp) {
  // rule 1: alternation
  for (std::size_t i = 0; i + 1 < tp.size(); ++i) {
    if (tp[i].kind == tp[i + 1].kind) {
      tp.erase(tp.begin() + static_cast<std::ptrdiff_t>(prefer_first(tp[i], tp[i + 1]) ? i + 1 : i));
      return true;
    }
  }
  // rule 2: minimum phase of 4 quarters
  for (std::size_t i = 0; i + 1 < tp.size(); ++i) {
    if (tp[i + 1].t - tp[i].t < 4) {
      tp.erase(tp.begin() + static_cast<std::ptrdiff_t>(i),
               tp.begin() + static_cast<std::ptrdiff_t>(i + 2));
      return true;
    }
  }
  // rule 3: minimum full cycle of 8 quarters between same-kind points; drop
  // the intermediate point together with the weaker endpoint
  for (std::size_t i = 0; i + 2 < tp.size(); ++i) {
    if (tp[i + 2].t - tp[i].t < 8) {
      std::size_t weaker = prefer_first(tp[i], tp[i + 2]) ? i + 2 : i;
      tp.erase(tp.begin() + static_cast<std::ptrdiff_t>(weaker));
      tp.erase(tp.begin() + static_cast<std::ptrdiff_t>(i + 1));
      return true;
    }
  }
  return false;
}

}  // namespace detail

template <typename Derived>
PhaseChronology bbq_date(const Eigen::MatrixBase<Derived>& cycle, int k = 2) {
  const int T = static_cast<int>(cycle.size());
  require(k >= 1, errc::bad_config, "bbq window k must be >= 1");
  require(T >= 2 * k + 1, errc::too_short, "series too short for the bbq window");

  PhaseChronology chron;
  chron.turning_points = detail::bbq_candidates(cycle, k);
  while (detail::censor_once(chron.turning_points)) {
  }

  const auto& tp = chron.turning_points;
  for (std::size_t i = 0; i + 1 < tp.size(); ++i) {
    Phase ph;
    ph.kind = tp[i].kind == TurnKind::trough ? PhaseKind::expansion : PhaseKind::contraction;
    ph.start = tp[i].t;
    ph.end = tp[i + 1].t;
    ph.duration = ph.end - ph.start;
    ph.amplitude = std::abs(tp[i + 1].value - tp[i].value);
    chron.phases.push_back(ph);
  }
  if (!tp.empty() && tp.back().t < T - 1) {
    Phase ph;
    ph.kind = tp.back().kind == TurnKind::trough ? PhaseKind::expansion : PhaseKind::contraction;
    ph.start = tp.back().t;
    ph.end = T - 1;
    ph.duration = ph.end - ph.start;
    ph.amplitude = std::abs(static_cast<double>(cycle[T - 1]) - tp.back().value);
    ph.complete = false;
    chron.phases.push_back(ph);
  }
  return chron;
}

// Means over complete phases of a chronology dated on the standardized cycle;
// scale carries the raw spread separately.
template <typename Derived>
PhaseStats phase_stats(const PhaseChronology& chron, const Eigen::MatrixBase<Derived>& raw_cycle) {
  PhaseStats st;
  st.scale = static_cast<double>(sample_sd(raw_cycle));
  double amp_e = 0, amp_c = 0, dur_e = 0, dur_c = 0;
  for (const Phase& ph : chron.phases) {
    if (!ph.complete) continue;
    if (ph.kind == PhaseKind::expansion) {
      amp_e += ph.amplitude;
      dur_e += ph.duration;
      ++st.n_expansions;
    } else {
      amp_c += ph.amplitude;
      dur_c += ph.duration;
      ++st.n_contractions;
    }
  }
  if (st.n_expansions > 0) {
    st.mean_amp_expansion = amp_e / st.n_expansions;
    st.mean_dur_expansion = dur_e / st.n_expansions;
  }
  if (st.n_contractions > 0) {
    st.mean_amp_contraction = amp_c / st.n_contractions;
    st.mean_dur_contraction = dur_c / st.n_contractions;
  }
  st.cycle_length = st.mean_dur_expansion + st.mean_dur_contraction;
  return st;
}

// Cross-sectional median cycle, then phi of every indicator against it.
inline std::vector<double> reference_synchronicity(const CyclePanel& cycles, double eps = 1e-12) {
  const Eigen::Index n = cycles.cycles.rows();
  const Eigen::Index T = cycles.cycles.cols();
  require(n >= 2, errc::bad_config, "need at least 2 indicators");
  Eigen::VectorXd ref(T);
  std::vector<double> col(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = cycles.cycles(i, t);
    std::sort(col.begin(), col.end());
    ref[t] = n % 2 == 1 ? col[static_cast<std::size_t>(n / 2)]
                        : 0.5 * (col[static_cast<std::size_t>(n / 2 - 1)] +
                                 col[static_cast<std::size_t>(n / 2)]);
  }
  const Window full{0, static_cast<int>(T)};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        through_cycle_synchronicity(cycles.cycles.row(i).transpose(), ref, full, eps);
  return out;
}

}  // namespace cyclesync
