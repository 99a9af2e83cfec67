#pragma once

#include "sdllg/config.hpp"
#include "sdllg/diagnostics.hpp"
#include "sdllg/fem.hpp"
#include "sdllg/output.hpp"
#include "sdllg/weak_residual.hpp"

#include <functional>
#include <memory>

namespace sdllg {

struct SimState {
  int step = 0;
  double t = 0.0;
  NodalField3 m;  ///< omega
  NodalField3 s;  ///< Omega
};

struct StepReport {
  NodalField3 v;
  SolveStats llg;
  SolveStats spin;
  StepIdentity identity;
  double modulus_deviation = 0.0;  ///< max_z | |m(z)|^2 - 1 - k^2 sum |v|^2 | after this step
};

TetMesh build_mesh(const SimConfig& cfg);

/// Initial magnetization on the omega nodes, normalized nodewise. A layer's
/// own m0 takes precedence over the global spec; nodes shared by two
/// magnetic layers take the lower layer's value.
NodalField3 initial_magnetization(const SimConfig& cfg, const TetMesh& mesh);
NodalField3 initial_spin(const SimConfig& cfg, const TetMesh& mesh);

/// Algorithm state plus ledger. Steps are strictly sequential; each call to
/// advance() replaces the state with a new snapshot.
class Simulation {
 public:
  explicit Simulation(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const FemSpace& space() const { return *space_; }
  const TetMesh& mesh() const { return space_->mesh(); }
  const SimState& state() const { return state_; }
  const EnergyLedger& ledger() const { return ledger_; }
  double initial_energy() const { return E0_; }

  int total_steps() const { return cfg_.num_steps(); }
  bool finished() const { return state_.step >= total_steps(); }

  /// One step: v from the tangent-plane system with f^i, pi(m^i), s^i;
  /// m^{i+1} = m^i + k v; s^{i+1} from the diffusion system with the
  /// projected m^{i+1} and j^{i+1}. SolverError carries the step index.
  StepReport advance();

  Checkpoint checkpoint() const;
  /// Replaces the state by a checkpoint of the same mesh and time step.
  void restore(const Checkpoint& cp);

 private:
  SimConfig cfg_;
  std::shared_ptr<const FemSpace> space_;
  SimState state_;
  EnergyLedger ledger_;
  std::vector<double> v_sq_sum_;
  double E0_ = 0.0;
};

struct RunOptions {
  bool keep_trajectory = false;
  std::function<void(const Simulation&, const StepReport&)> on_step;
};

struct RunResult {
  SimState final_state;
  EnergyLedger ledger;
  double E0 = 0.0;
  double max_identity_residual = 0.0;
  double max_modulus_deviation = 0.0;
  Trajectory trajectory;  ///< filled when keep_trajectory is set
};

/// Runs the simulation to T_final from its current state.
RunResult run(Simulation& sim, const RunOptions& options = {});
RunResult run(const SimConfig& cfg, const RunOptions& options = {});

struct StudyRow {
  int level = 0;
  double h = 0.0;
  double k = 0.0;
  double m_diff = 0.0;  ///< ||m_l(T) - m_{l-1}(T)||_{L2}, NaN on level 0
  double s_diff = 0.0;
  double stability1 = 0.0;
  double stability2 = 0.0;
  double E_final = 0.0;
};

struct StudyOptions {
  bool refine_space = false;  ///< also double the resolution per level
};

/// Ladder halving k (and optionally h) per level. Differences are measured on
/// the coarser mesh of each pair, whose nodes are a subset of the finer one.
std::vector<StudyRow> refinement_study(const SimConfig& base, int levels, const StudyOptions& options = {});

/// Values of a fine-mesh field at the nodes of a coarser nested mesh.
NodalField3 restrict_to_coarse(const TetMesh& coarse, const TetMesh& fine, const NodalField3& fine_field);

}  // namespace sdllg
