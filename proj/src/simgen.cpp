#include "cyclesync/simgen.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "cyclesync/error.hpp"
#include "cyclesync/rng.hpp"

namespace cyclesync {

const char* truth_name(TruthLabel label) {
  switch (label) {
    case TruthLabel::sync: return "Sync";
    case TruthLabel::anti: return "Anti";
    case TruthLabel::noise: return "Noise";
  }
  return "?";
}

void PlantedDesign::validate() const {
  require(n_sync >= 0 && n_anti >= 0 && n_noise >= 0, errc::bad_design,
          "group counts must be non-negative");
  require(n_sync + n_anti + n_noise >= 2, errc::bad_design, "need at least 2 series");
  require(t >= 16, errc::bad_design, "T must be at least 16, got " + std::to_string(t));
  require(base_period >= 8 && base_period <= 32, errc::bad_design,
          "base_period must lie in the 8-32 quarter band, got " + std::to_string(base_period));
  require(noise_sd >= 0.0, errc::bad_design, "noise_sd must be non-negative");
  require(amplitude_spread >= 0.0, errc::bad_design, "amplitude_spread must be non-negative");
}

PlantedPanel generate(const PlantedDesign& design) {
  design.validate();
  const int n = design.n_sync + design.n_anti + design.n_noise;
  const int t = design.t;
  constexpr double pi = std::numbers::pi;

  Eigen::VectorXd common(t);
  for (int i = 0; i < t; ++i)
    common(i) = std::sin(2.0 * pi * double(i) / double(design.base_period) + pi / 16.0);

  PlantedPanel out;
  out.panel.values.resize(n, t);
  out.panel.ids.reserve(size_t(n));
  out.truth.reserve(size_t(n));
  out.panel.quarters.reserve(size_t(t));
  for (int i = 0; i < t; ++i)
    out.panel.quarters.push_back(QuarterIndex{2000 + i / 4, i % 4 + 1, i});

  char sector[8];
  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::derive(design.seed, 0, std::uint64_t(i));
    const double amp = 1.0 + design.amplitude_spread * rng.uniform01();
    const double drift = 0.1 + 0.4 * rng.uniform01();
    const double tamp = 2.0 + 3.0 * rng.uniform01();
    const double tphase = 2.0 * pi * rng.uniform01();

    Eigen::VectorXd row(t);
    for (int q = 0; q < t; ++q)
      row(q) = 100.0 + drift * double(q) +
               tamp * std::sin(2.0 * pi * double(q) / double(2 * t) + tphase);

    TruthLabel label;
    int within;
    if (i < design.n_sync) {
      label = TruthLabel::sync;
      within = i;
      row += amp * common;
    } else if (i < design.n_sync + design.n_anti) {
      label = TruthLabel::anti;
      within = i - design.n_sync;
      row -= amp * common;
    } else {
      label = TruthLabel::noise;
      within = i - design.n_sync - design.n_anti;
      const double scale = amp / std::sqrt(2.0);
      for (int q = 0; q < t; ++q) row(q) += scale * rng.normal();
    }
    for (int q = 0; q < t; ++q) row(q) += design.noise_sd * rng.normal();

    std::snprintf(sector, sizeof(sector), "%02d", within);
    out.panel.ids.push_back(IndicatorId{
        label == TruthLabel::sync ? "SYNC" : label == TruthLabel::anti ? "ANTI" : "NOISE",
        sector});
    out.truth.push_back(label);
    out.panel.values.row(i) = row;
  }
  return out;
}

}  // namespace cyclesync
