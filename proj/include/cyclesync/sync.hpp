#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cyclesync/error.hpp"
#include "cyclesync/wavelet.hpp"

namespace cyclesync {

// Half-open ordinal range [begin, end).
struct Window {
  int begin = 0;
  int end = 0;

  int length() const { return end - begin; }
};

struct SyncConfig {
  double zero_epsilon = 1e-12;
  std::vector<Window> windows;  // empty means one full-sample window

  std::vector<Window> resolve(int T) const {
    std::vector<Window> out = windows;
    if (out.empty()) out.push_back(Window{0, T});
    for (const auto& w : out) {
      require(w.begin >= 0 && w.end <= T && w.length() >= 4, errc::empty_window,
              "window [" + std::to_string(w.begin) + "," + std::to_string(w.end) +
                  ") invalid for T=" + std::to_string(T) + " (need >= 4 quarters)");
    }
    return out;
  }
};

enum class DissimilarityKind { synchronicity, probability };

struct DissimilarityMatrix {
  std::vector<IndicatorId> ids;
  Eigen::MatrixXd d;
  DissimilarityKind kind = DissimilarityKind::synchronicity;
};

// Eq. 5 with the zero convention: exact zeros (within eps) give 0.
template <typename Scalar>
Scalar synchronicity_at(Scalar ci, Scalar cj, Scalar eps) {
  if (std::abs(ci) <= eps || std::abs(cj) <= eps) return Scalar(0);
  return (ci > Scalar(0)) == (cj > Scalar(0)) ? Scalar(1) : Scalar(-1);
}

// Rows of {-1, 0, +1} signs.
template <typename Derived>
Eigen::MatrixX<typename Derived::Scalar> sign_matrix(const Eigen::MatrixBase<Derived>& cycles,
                                                     typename Derived::Scalar eps) {
  using Scalar = typename Derived::Scalar;
  Eigen::MatrixX<Scalar> s(cycles.rows(), cycles.cols());
  for (Eigen::Index i = 0; i < cycles.rows(); ++i)
    for (Eigen::Index t = 0; t < cycles.cols(); ++t) {
      Scalar c = cycles(i, t);
      s(i, t) = std::abs(c) <= eps ? Scalar(0) : (c > Scalar(0) ? Scalar(1) : Scalar(-1));
    }
  return s;
}

// Eq. 6: mean of Eq. 5 over the window.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar through_cycle_synchronicity(const Eigen::MatrixBase<DerivedA>& ci,
                                                      const Eigen::MatrixBase<DerivedB>& cj,
                                                      const Window& window,
                                                      typename DerivedA::Scalar eps) {
  using Scalar = typename DerivedA::Scalar;
  require(ci.size() == cj.size(), errc::bad_config, "cycle lengths differ");
  require(window.begin >= 0 && window.end <= ci.size() && window.length() > 0, errc::empty_window,
          "window outside series range");
  Scalar acc = 0;
  for (int t = window.begin; t < window.end; ++t)
    acc += synchronicity_at(ci[t], cj[t], eps);
  return acc / Scalar(window.length());
}

// Phi over a window for all pairs at once; the sign GEMM accumulates exact
// integers, so this equals the pairwise Eq. 5/6 evaluation with no roundoff.
template <typename Derived>
Eigen::MatrixX<typename Derived::Scalar> phi_matrix(const Eigen::MatrixBase<Derived>& cycles,
                                                    const Window& window,
                                                    typename Derived::Scalar eps) {
  using Scalar = typename Derived::Scalar;
  require(window.length() > 0, errc::empty_window, "empty window");
  Eigen::MatrixX<Scalar> s = sign_matrix(cycles.middleCols(window.begin, window.length()), eps);
  Eigen::MatrixX<Scalar> phi = (s * s.transpose()) / Scalar(window.length());
  for (Eigen::Index i = 0; i < phi.rows(); ++i) phi(i, i) = Scalar(1);
  return phi;
}

// Eq. 9/10: d = 1 - phi off the diagonal.
inline DissimilarityMatrix sync_dissimilarity_matrix(const CyclePanel& cycles,
                                                     const SyncConfig& cfg, const Window& window) {
  require(cycles.cycles.rows() >= 2, errc::bad_config, "need at least 2 indicators");
  DissimilarityMatrix out;
  out.ids = cycles.ids;
  out.kind = DissimilarityKind::synchronicity;
  Eigen::MatrixXd phi = phi_matrix(cycles.cycles, window, cfg.zero_epsilon);
  out.d = Eigen::MatrixXd::Ones(phi.rows(), phi.cols()) - phi;
  for (Eigen::Index i = 0; i < out.d.rows(); ++i) out.d(i, i) = 0.0;
  return out;
}

namespace detail {

// Root of the sum of squared deviations, exactly as displayed beneath Eq. 7
// (no 1/n normalization).
template <typename Derived>
typename Derived::Scalar group_spread(const Eigen::MatrixBase<Derived>& column) {
  using Scalar = typename Derived::Scalar;
  Scalar mean = column.mean();
  return std::sqrt((column.array() - mean).square().sum());
}

inline double median_inplace(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Eqs. 7-8: gamma_i = median_t [log s_{-i}(t) - log s(t)].
inline double proximity_of_sync(const CyclePanel& cycles, const std::vector<std::string>& group,
                                const std::string& id, double eps = 1e-12) {
  require(group.size() >= 3, errc::group_too_small,
          "proximity needs a group of at least 3, got " + std::to_string(group.size()));
  std::vector<Eigen::Index> rows;
  Eigen::Index self = -1;
  for (const auto& key : group) {
    Eigen::Index r = -1;
    for (std::size_t j = 0; j < cycles.ids.size(); ++j)
      if (cycles.ids[j].key() == key) r = static_cast<Eigen::Index>(j);
    require(r >= 0, errc::unknown_indicator, "indicator '" + key + "' not in cycle panel");
    if (key == id) self = static_cast<Eigen::Index>(rows.size());
    rows.push_back(r);
  }
  require(self >= 0, errc::unknown_indicator, "indicator '" + id + "' not in group");

  const Eigen::Index T = cycles.cycles.cols();
  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd sub(m, T);
  for (Eigen::Index r = 0; r < m; ++r) sub.row(r) = cycles.cycles.row(rows[static_cast<std::size_t>(r)]);
  Eigen::MatrixXd loo(m - 1, T);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (r == self) continue;
    loo.row(k++) = sub.row(r);
  }

  std::vector<double> diffs;
  for (Eigen::Index t = 0; t < T; ++t) {
    double s_all = detail::group_spread(sub.col(t));
    double s_loo = detail::group_spread(loo.col(t));
    if (s_all < eps || s_loo < eps) continue;
    diffs.push_back(std::log(s_loo) - std::log(s_all));
  }
  require(!diffs.empty(), errc::all_degenerate, "every time point degenerate for '" + id + "'");
  return detail::median_inplace(diffs);
}

}  // namespace cyclesync
