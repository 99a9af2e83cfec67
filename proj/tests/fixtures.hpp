#pragma once

#include "sdllg/driver.hpp"

#include <string>

namespace sdllg::testing {

inline std::string config_path(const std::string& name) { return std::string(SDLLG_CONFIG_DIR) + "/" + name; }

/// The shipped default trilayer scenario.
inline SimConfig default_scenario() { return load_config(config_path("trilayer.toml")); }

/// Small trilayer in nondimensional units, for unit tests.
inline SimConfig tiny_trilayer(Resolution res = {2, 2, 5}) {
  SimConfig cfg;
  cfg.layers = {{{0.4, Region::Magnetic}, Vec3(0.0, 0.0, 1.0)},
                {{0.2, Region::Conductor}, std::nullopt},
                {{0.4, Region::Magnetic}, Vec3(1.0, 0.0, 0.3)}};
  cfg.width = 1.0;
  cfg.depth = 1.0;
  cfg.resolution = res;
  cfg.params.alpha = 0.5;
  cfg.params.D0_conductor = 2.0;
  cfg.f = SourceField::constant(SourceField::Target::AppliedF, Vec3(0.0, 0.0, 0.5));
  cfg.j = SourceField::constant(SourceField::Target::CurrentJ, Vec3(0.0, 0.0, 1.0));
  cfg.k = 0.05;
  cfg.T_final = 0.25;
  cfg.output.vtk = false;
  return cfg;
}

}  // namespace sdllg::testing
