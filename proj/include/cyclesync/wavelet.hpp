#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "cyclesync/error.hpp"
#include "cyclesync/panel.hpp"
#include "cyclesync/parallel.hpp"

namespace cyclesync {

enum class Boundary { reflect, periodic };

template <typename Scalar>
struct FilterBank {
  std::string name;
  Eigen::VectorX<Scalar> g;  // scaling
  Eigen::VectorX<Scalar> h;  // wavelet, quadrature mirror of g

  static FilterBank la8() {
    // Daubechies least-asymmetric 8-tap scaling coefficients (Percival & Walden
    // tabulation order).
    Eigen::VectorX<Scalar> g(8);
    g << Scalar(-0.075765714789273325), Scalar(-0.029635527645998951),
        Scalar(0.49761866763201545), Scalar(0.80373875180591614),
        Scalar(0.29785779560527736), Scalar(-0.099219543576847216),
        Scalar(-0.012603967262037833), Scalar(0.032223100604042702);
    return make("LA8", g);
  }

  static FilterBank haar() {
    Eigen::VectorX<Scalar> g(2);
    g << std::numbers::sqrt2_v<Scalar> / Scalar(2), std::numbers::sqrt2_v<Scalar> / Scalar(2);
    return make("Haar", g);
  }

  static FilterBank by_name(const std::string& name) {
    if (name == "LA8" || name == "la8") return la8();
    if (name == "Haar" || name == "haar") return haar();
    fail(errc::bad_config, "unknown filter bank '" + name + "'");
  }

  void validate() const {
    const Scalar tol_sum = Scalar(1e-12), tol_orth = Scalar(1e-10);
    require(std::abs(g.sum() - std::numbers::sqrt2_v<Scalar>) <= tol_sum, errc::bad_config,
            name + ": scaling coefficients do not sum to sqrt(2)");
    require(std::abs(g.squaredNorm() - Scalar(1)) <= tol_sum, errc::bad_config,
            name + ": scaling coefficients do not have unit energy");
    const Eigen::Index L = g.size();
    for (Eigen::Index n = 1; 2 * n < L; ++n) {
      Scalar dot = 0;
      for (Eigen::Index l = 0; l + 2 * n < L; ++l) dot += g[l] * g[l + 2 * n];
      require(std::abs(dot) <= tol_orth, errc::bad_config,
              name + ": even-shift orthogonality fails at shift " + std::to_string(2 * n));
    }
    for (Eigen::Index l = 0; l < L; ++l) {
      Scalar expect = ((l % 2) ? Scalar(-1) : Scalar(1)) * g[L - 1 - l];
      require(h[l] == expect, errc::bad_config, name + ": wavelet filter is not the QMF of g");
    }
  }

 private:
  static FilterBank make(std::string name, Eigen::VectorX<Scalar> g) {
    FilterBank b;
    b.name = std::move(name);
    const Eigen::Index L = g.size();
    b.h.resize(L);
    for (Eigen::Index l = 0; l < L; ++l)
      b.h[l] = ((l % 2) ? Scalar(-1) : Scalar(1)) * g[L - 1 - l];
    b.g = std::move(g);
    return b;
  }
};

template <typename Scalar>
struct MraStack {
  std::vector<Eigen::VectorX<Scalar>> details;  // D_1..D_J
  Eigen::VectorX<Scalar> smooth;                // S_J
  Boundary boundary = Boundary::reflect;
  bool filter_longer_than_series = false;

  int levels() const { return static_cast<int>(details.size()); }
};

// out(t) = X(t) - (t-1)(X(T)-X(1))/(T-1), t = 1..T.
template <typename Derived>
Eigen::VectorX<typename Derived::Scalar> drift_adjust(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index T = x.size();
  require(T >= 2, errc::too_short, "drift_adjust needs at least 2 samples");
  const Scalar slope = (x[T - 1] - x[0]) / Scalar(T - 1);
  Eigen::VectorX<Scalar> out(T);
  for (Eigen::Index t = 0; t < T; ++t) out[t] = x[t] - Scalar(t) * slope;
  return out;
}

// reverse(x) ++ x ++ reverse(x) ++ x; the analysis block is positions T..2T-1.
template <typename Derived>
Eigen::VectorX<typename Derived::Scalar> extend_reflect(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index T = x.size();
  require(T >= 2, errc::too_short, "extend_reflect needs at least 2 samples");
  Eigen::VectorX<Scalar> out(4 * T);
  for (Eigen::Index t = 0; t < T; ++t) {
    out[t] = x[T - 1 - t];
    out[T + t] = x[t];
    out[2 * T + t] = x[T - 1 - t];
    out[3 * T + t] = x[t];
  }
  return out;
}

template <typename Scalar>
struct ModwtCoeffs {
  std::vector<Eigen::VectorX<Scalar>> w;  // W_1..W_J
  Eigen::VectorX<Scalar> v;               // V_J
};

namespace detail {

// One pyramid stage: circular filtering with the rescaled filters g/sqrt(2),
// h/sqrt(2) and stride 2^(j-1).
template <typename Scalar>
void pyramid_down(const Eigen::VectorX<Scalar>& v, const FilterBank<Scalar>& bank, int j,
                  Eigen::VectorX<Scalar>& w_out, Eigen::VectorX<Scalar>& v_out) {
  const Eigen::Index M = v.size();
  const Eigen::Index L = bank.g.size();
  const Eigen::Index stride = Eigen::Index(1) << (j - 1);
  const Eigen::VectorX<Scalar> gt = bank.g / std::numbers::sqrt2_v<Scalar>;
  const Eigen::VectorX<Scalar> ht = bank.h / std::numbers::sqrt2_v<Scalar>;
  w_out.resize(M);
  v_out.resize(M);
  for (Eigen::Index t = 0; t < M; ++t) {
    Scalar aw = 0, av = 0;
    Eigen::Index idx = t;
    for (Eigen::Index l = 0; l < L; ++l) {
      aw += ht[l] * v[idx];
      av += gt[l] * v[idx];
      idx -= stride;
      if (idx < 0) idx += M;
    }
    w_out[t] = aw;
    v_out[t] = av;
  }
}

template <typename Scalar>
Eigen::VectorX<Scalar> pyramid_up(const Eigen::VectorX<Scalar>& w, const Eigen::VectorX<Scalar>& v,
                                  const FilterBank<Scalar>& bank, int j) {
  const Eigen::Index M = v.size();
  const Eigen::Index L = bank.g.size();
  const Eigen::Index stride = Eigen::Index(1) << (j - 1);
  const Eigen::VectorX<Scalar> gt = bank.g / std::numbers::sqrt2_v<Scalar>;
  const Eigen::VectorX<Scalar> ht = bank.h / std::numbers::sqrt2_v<Scalar>;
  Eigen::VectorX<Scalar> out(M);
  for (Eigen::Index t = 0; t < M; ++t) {
    Scalar acc = 0;
    Eigen::Index idx = t;
    for (Eigen::Index l = 0; l < L; ++l) {
      acc += ht[l] * w[idx] + gt[l] * v[idx];
      idx += stride;
      if (idx >= M) idx -= M;
    }
    out[t] = acc;
  }
  return out;
}

}  // namespace detail

template <typename Derived, typename Scalar = typename Derived::Scalar>
ModwtCoeffs<Scalar> modwt_forward(const Eigen::MatrixBase<Derived>& series,
                                  const FilterBank<Scalar>& bank, int J) {
  require(J >= 1, errc::bad_level, "J must be >= 1, got " + std::to_string(J));
  require(series.size() >= 2, errc::too_short, "series too short for modwt");
  ModwtCoeffs<Scalar> c;
  Eigen::VectorX<Scalar> v = series;
  c.w.reserve(static_cast<std::size_t>(J));
  Eigen::VectorX<Scalar> w_next, v_next;
  for (int j = 1; j <= J; ++j) {
    detail::pyramid_down(v, bank, j, w_next, v_next);
    c.w.push_back(w_next);
    v.swap(v_next);
  }
  c.v = std::move(v);
  return c;
}

// Inverse pyramid from level `from` down to level 1, with W set only at `from`
// (detail) or V set at `from` (smooth).
template <typename Scalar>
Eigen::VectorX<Scalar> mra_component(const ModwtCoeffs<Scalar>& c, const FilterBank<Scalar>& bank,
                                     int from, bool smooth) {
  const Eigen::Index M = smooth ? c.v.size() : c.w[static_cast<std::size_t>(from - 1)].size();
  Eigen::VectorX<Scalar> zero = Eigen::VectorX<Scalar>::Zero(M);
  Eigen::VectorX<Scalar> cur =
      smooth ? detail::pyramid_up(zero, c.v, bank, from)
             : detail::pyramid_up(c.w[static_cast<std::size_t>(from - 1)], zero, bank, from);
  for (int j = from - 1; j >= 1; --j) cur = detail::pyramid_up(zero, cur, bank, j);
  return cur;
}

template <typename Derived, typename Scalar = typename Derived::Scalar>
MraStack<Scalar> modwt_mra(const Eigen::MatrixBase<Derived>& series, const FilterBank<Scalar>& bank,
                           int J, Boundary boundary) {
  require(J >= 1, errc::bad_level, "J must be >= 1, got " + std::to_string(J));
  const Eigen::Index T = series.size();
  Eigen::VectorX<Scalar> work =
      boundary == Boundary::reflect ? extend_reflect(series) : Eigen::VectorX<Scalar>(series);
  ModwtCoeffs<Scalar> coeffs = modwt_forward(work, bank, J);

  MraStack<Scalar> stack;
  stack.boundary = boundary;
  stack.filter_longer_than_series = bank.g.size() > T;
  const Eigen::Index offset = boundary == Boundary::reflect ? T : 0;
  for (int j = 1; j <= J; ++j)
    stack.details.push_back(mra_component(coeffs, bank, j, false).segment(offset, T));
  stack.smooth = mra_component(coeffs, bank, J, true).segment(offset, T);
  return stack;
}

struct CyclePanel {
  std::vector<IndicatorId> ids;
  std::vector<QuarterIndex> quarters;
  Eigen::MatrixXd cycles;          // N x T
  std::vector<int> cycle_levels;   // detail levels summed, default {3,4}
};

struct WaveletConfig {
  std::string bank = "LA8";
  int levels = 5;
  std::vector<int> cycle_levels = {3, 4};
  Boundary boundary = Boundary::reflect;
};

// Rows are drift-adjusted, decomposed, and summed over cycle_levels.
inline CyclePanel extract_cycles(const Panel& panel, const WaveletConfig& cfg,
                                 const ThreadPool& pool = ThreadPool(1)) {
  FilterBank<double> bank = FilterBank<double>::by_name(cfg.bank);
  bank.validate();
  for (int lev : cfg.cycle_levels)
    require(lev >= 1 && lev <= cfg.levels, errc::bad_level,
            "cycle level " + std::to_string(lev) + " outside 1.." + std::to_string(cfg.levels));
  CyclePanel out;
  out.ids = panel.ids;
  out.quarters = panel.quarters;
  out.cycle_levels = cfg.cycle_levels;
  out.cycles.resize(panel.n(), panel.t());
  pool.parallel_for(panel.n(), [&](std::int64_t i, int) {
    Eigen::VectorXd adjusted = drift_adjust(panel.values.row(i).transpose());
    MraStack<double> stack = modwt_mra(adjusted, bank, cfg.levels, cfg.boundary);
    Eigen::VectorXd cycle = Eigen::VectorXd::Zero(panel.t());
    for (int lev : cfg.cycle_levels) cycle += stack.details[static_cast<std::size_t>(lev - 1)];
    out.cycles.row(i) = cycle.transpose();
  });
  return out;
}

}  // namespace cyclesync
