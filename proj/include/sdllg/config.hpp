#pragma once

#include "sdllg/fields.hpp"
#include "sdllg/mesh.hpp"
#include "sdllg/params.hpp"
#include "sdllg/scaling.hpp"
#include "sdllg/solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace sdllg {

struct InitialM {
  enum class Kind : std::uint8_t { Uniform, Vortex, File };
  Kind kind = Kind::Uniform;
  Vec3 direction = Vec3::UnitZ();  ///< Uniform; need not be unit length
  double core_radius = 0.1;        ///< Vortex: out-of-plane core width
  std::string file;                ///< File: 3 numbers per omega node
};

struct InitialS {
  enum class Kind : std::uint8_t { Zero, Uniform };
  Kind kind = Kind::Zero;
  Vec3 value = Vec3::Zero();
};

struct LayerConfig {
  LayerSpec spec;
  std::optional<Vec3> m0;  ///< overrides the global initial m inside this layer
};

struct OutputConfig {
  std::string dir = "output";
  int every = 0;  ///< VTK cadence in steps; 0 writes only the first and last state
  bool vtk = true;
  bool ledger_csv = true;
};

/// Complete run description, in nondimensional units.
struct SimConfig {
  std::vector<LayerConfig> layers;
  double width = 1.0;
  double depth = 1.0;
  Resolution resolution;

  MaterialParams params;
  PiOperator pi;
  SourceField f = SourceField::constant(SourceField::Target::AppliedF, Vec3::Zero());
  SourceField j = SourceField::constant(SourceField::Target::CurrentJ, Vec3::Zero());

  double k = 0.01;
  double T_final = 0.0;

  InitialM m0;
  InitialS s0;
  SolverConfig solver;
  OutputConfig output;

  /// Present when the configuration was given in SI units.
  std::optional<SIParams> si;
  std::optional<NondimParams> scaling;

  /// Throws ConfigError for theta outside (1/2, 1], k <= 0, T_final that is
  /// not a nonnegative multiple of k, or invalid material parameters.
  void validate() const;

  /// N with N k = T_final.
  int num_steps() const;

  std::vector<LayerSpec> layer_specs() const;
};

/// Builds a configuration from a parsed TOML tree. Relative file paths are
/// resolved against base_dir.
SimConfig config_from_json(const nlohmann::json& doc, const std::string& base_dir = ".");

SimConfig load_config(const std::string& path);

}  // namespace sdllg
