#pragma once

#include "sdllg/config.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sdllg {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
  std::string detail;
};

/// Coarsens the configured resolution until the mesh has at most max_nodes
/// nodes while keeping every layer resolved.
SimConfig small_mesh_config(const SimConfig& cfg, Index max_nodes);

/// Diagnostics suite on a small version of the configuration: mesh
/// invariants, nodewise modulus identity, per-step energy identity, dense
/// oracle agreement, coercivity floor, pi bound and the energy telescope.
/// Runs at most `steps` time steps.
std::vector<CheckResult> run_check_suite(const SimConfig& cfg, std::uint64_t seed, int steps = 10);

}  // namespace sdllg
