#pragma once

#include <cstdint>
#include <vector>

#include "cyclesync/panel.hpp"

namespace cyclesync {

enum class TruthLabel { sync, anti, noise };

const char* truth_name(TruthLabel label);

struct PlantedDesign {
  int n_sync = 10;
  int n_anti = 10;
  int n_noise = 10;
  int base_period = 16;
  double noise_sd = 0.15;
  double amplitude_spread = 0.5;
  int t = 120;
  std::uint64_t seed = 136;

  void validate() const;
};

struct PlantedPanel {
  Panel panel;
  std::vector<TruthLabel> truth;  // aligned with panel.ids
};

PlantedPanel generate(const PlantedDesign& design);

}  // namespace cyclesync
