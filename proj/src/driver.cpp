#include "sdllg/driver.hpp"

#include "sdllg/llg_step.hpp"
#include "sdllg/spin_step.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace sdllg {

TetMesh build_mesh(const SimConfig& cfg) {
  return build_multilayer_mesh(cfg.layer_specs(), cfg.width, cfg.depth, cfg.resolution);
}

namespace {

Vec3 analytic_m0(const SimConfig& cfg, const Vec3& x) {
  switch (cfg.m0.kind) {
    case InitialM::Kind::Uniform:
      return cfg.m0.direction;
    case InitialM::Kind::Vortex: {
      const double dx = x.x() - 0.5 * cfg.width;
      const double dy = x.y() - 0.5 * cfg.depth;
      return Vec3(-dy, dx, cfg.m0.core_radius);
    }
    case InitialM::Kind::File:
      break;
  }
  return Vec3::Zero();
}

std::vector<Vec3> read_m0_file(const std::string& path, Index n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open initial magnetization file '" + path + "'");
  std::vector<Vec3> out;
  double a, b, c;
  while (in >> a >> b >> c) out.emplace_back(a, b, c);
  if (!in.eof()) throw ConfigError("malformed initial magnetization file '" + path + "'");
  if (static_cast<Index>(out.size()) != n) {
    std::ostringstream os;
    os << "initial magnetization file has " << out.size() << " vectors, mesh has " << n << " omega nodes";
    throw ConfigError(os.str());
  }
  return out;
}

}  // namespace

NodalField3 initial_magnetization(const SimConfig& cfg, const TetMesh& mesh) {
  const Index n = mesh.num_omega_nodes();
  std::vector<Vec3> file_values;
  if (cfg.m0.kind == InitialM::Kind::File) file_values = read_m0_file(cfg.m0.file, n);

  double total = 0.0;
  for (const auto& l : cfg.layers) total += l.spec.thickness;
  const double tol = 1e-9 * total;

  NodalField3 m(Support::OmegaMagnetic, n);
  for (Index i = 0; i < n; ++i) {
    const Vec3& x = mesh.nodes[mesh.omega_nodes[i]];
    Vec3 value = cfg.m0.kind == InitialM::Kind::File ? file_values[i] : analytic_m0(cfg, x);
    double z0 = 0.0;
    for (const auto& l : cfg.layers) {
      const double z1 = z0 + l.spec.thickness;
      if (l.spec.region == Region::Magnetic && x.z() >= z0 - tol && x.z() <= z1 + tol) {
        if (l.m0) value = *l.m0;
        break;
      }
      z0 = z1;
    }
    const double norm = value.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      std::ostringstream os;
      os << "initial magnetization vanishes at omega node " << i << " (" << x.transpose() << ")";
      throw ConfigError(os.str());
    }
    m.set(i, value / norm);
  }
  return m;
}

NodalField3 initial_spin(const SimConfig& cfg, const TetMesh& mesh) {
  const Vec3 v = cfg.s0.kind == InitialS::Kind::Uniform ? cfg.s0.value : Vec3::Zero();
  return nodal_interpolate(mesh, Support::OmegaAll, [&](const Vec3&) { return v; });
}

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  space_ = std::make_shared<const FemSpace>(build_mesh(cfg_));
  state_.m = initial_magnetization(cfg_, mesh());
  state_.s = initial_spin(cfg_, mesh());
  v_sq_sum_.assign(mesh().num_omega_nodes(), 0.0);
  const NodalField3 f0 = sample_source(cfg_.f, 0.0, cfg_.T_final, mesh(), Support::OmegaMagnetic);
  ledger_.rows.push_back(initial_ledger_row(*space_, state_.m, state_.s, f0, cfg_.pi, cfg_.params));
  E0_ = ledger_.rows.back().E;
}

StepReport Simulation::advance() {
  if (finished()) throw DomainError("simulation already reached T_final");
  const TetMesh& msh = mesh();
  const double k = cfg_.k;
  const int i = state_.step;
  const double t_i = i * k;
  const double t_next = (i + 1) * k;

  StepReport rep;
  const NodalField3 f_i = sample_source(cfg_.f, t_i, cfg_.T_final, msh, Support::OmegaMagnetic);
  const NodalField3 pi_m = apply_pi(cfg_.pi, state_.m);
  const NodalField3 s_omega = restrict_to_omega(msh, state_.s);

  try {
    const TangentBasis basis = build_tangent_basis(state_.m);
    const LlgSystem llg = assemble_llg_system(*space_, state_.m, basis, f_i, pi_m, s_omega, cfg_.params, k);
    rep.v = solve_v(llg, basis, cfg_.solver, &rep.llg);
  } catch (const SolverError& e) {
    std::ostringstream os;
    os << "step " << i << ": LLG solve failed: " << e.what();
    throw SolverError(os.str(), e.residual(), e.iterations());
  }

  SimState next;
  next.step = i + 1;
  next.t = t_next;
  next.m = update_m(state_.m, rep.v, k);
  rep.identity = step_identity_check(*space_, state_.m, next.m, rep.v, f_i, pi_m, s_omega, cfg_.params, k);

  const NodalField3 m_proj = nodal_projection(next.m);
  const NodalField3 j_next = sample_source(cfg_.j, t_next, cfg_.T_final, msh, Support::OmegaAll);
  try {
    next.s = solve_s(assemble_spin_system(*space_, state_.s, m_proj, j_next, cfg_.params, k), cfg_.solver, &rep.spin);
  } catch (const SolverError& e) {
    std::ostringstream os;
    os << "step " << i << ": spin diffusion solve failed: " << e.what();
    throw SolverError(os.str(), e.residual(), e.iterations());
  }
  if (!next.m.all_finite() || !next.s.all_finite()) {
    std::ostringstream os;
    os << "step " << i << ": non-finite state";
    throw SolverError(os.str(), std::numeric_limits<double>::quiet_NaN(), 0);
  }

  for (Index z = 0; z < next.m.size(); ++z) {
    v_sq_sum_[z] += rep.v[z].squaredNorm();
    rep.modulus_deviation =
        std::max(rep.modulus_deviation, std::abs(next.m[z].squaredNorm() - 1.0 - k * k * v_sq_sum_[z]));
  }

  const NodalField3 f_next = sample_source(cfg_.f, t_next, cfg_.T_final, msh, Support::OmegaMagnetic);
  StepData d{&state_.m, &next.m, &rep.v, &state_.s, &next.s, &f_i, &f_next};
  ledger_.rows.push_back(next_ledger_row(*space_, ledger_.rows.back(), d, cfg_.pi, cfg_.params, k));
  state_ = std::move(next);
  return rep;
}

Checkpoint Simulation::checkpoint() const {
  Checkpoint cp;
  cp.step = state_.step;
  cp.k = cfg_.k;
  cp.t = state_.t;
  cp.m = state_.m;
  cp.s = state_.s;
  cp.v_sq_sum = v_sq_sum_;
  cp.last_row = ledger_.rows.back();
  cp.E0 = E0_;
  return cp;
}

void Simulation::restore(const Checkpoint& cp) {
  if (cp.m.size() != mesh().num_omega_nodes() || cp.s.size() != mesh().num_nodes())
    throw ConfigError("checkpoint does not match the configured mesh");
  if (cp.k != cfg_.k) throw ConfigError("checkpoint time step differs from the configured k");
  if (cp.step < 0 || cp.step > total_steps()) throw ConfigError("checkpoint step outside the configured run");
  state_.step = static_cast<int>(cp.step);
  state_.t = cp.t;
  state_.m = cp.m;
  state_.s = cp.s;
  v_sq_sum_ = cp.v_sq_sum;
  E0_ = cp.E0;
  ledger_.rows.assign(1, cp.last_row);
  ledger_.rows.back().step = state_.step;
}

RunResult run(Simulation& sim, const RunOptions& options) {
  RunResult res;
  res.E0 = sim.initial_energy();
  if (options.keep_trajectory) {
    res.trajectory.k = sim.config().k;
    res.trajectory.m.push_back(sim.state().m);
    res.trajectory.s.push_back(sim.state().s);
  }
  while (!sim.finished()) {
    StepReport rep = sim.advance();
    res.max_identity_residual = std::max(res.max_identity_residual, rep.identity.residual);
    res.max_modulus_deviation = std::max(res.max_modulus_deviation, rep.modulus_deviation);
    if (options.on_step) options.on_step(sim, rep);
    if (options.keep_trajectory) {
      res.trajectory.m.push_back(sim.state().m);
      res.trajectory.s.push_back(sim.state().s);
      res.trajectory.v.push_back(std::move(rep.v));
    }
  }
  res.final_state = sim.state();
  res.ledger = sim.ledger();
  return res;
}

RunResult run(const SimConfig& cfg, const RunOptions& options) {
  Simulation sim(cfg);
  return run(sim, options);
}

NodalField3 restrict_to_coarse(const TetMesh& coarse, const TetMesh& fine, const NodalField3& fine_field) {
  const bool omega = fine_field.support() == Support::OmegaMagnetic;
  // Quantise coordinates relative to the fine spacing so nested nodes match.
  double scale = 0.0;
  for (const auto& x : fine.nodes) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  const double q = 1e-9 * std::max(scale, 1.0);
  auto key = [q](const Vec3& x) {
    return std::array<long long, 3>{std::llround(x.x() / q), std::llround(x.y() / q), std::llround(x.z() / q)};
  };
  std::map<std::array<long long, 3>, Index> lookup;
  for (Index z = 0; z < fine.num_nodes(); ++z) lookup.emplace(key(fine.nodes[z]), z);

  const Index n = omega ? coarse.num_omega_nodes() : coarse.num_nodes();
  NodalField3 out(fine_field.support(), n);
  for (Index i = 0; i < n; ++i) {
    const Index cz = omega ? coarse.omega_nodes[i] : i;
    const auto it = lookup.find(key(coarse.nodes[cz]));
    if (it == lookup.end()) throw GeometryError("meshes are not nested");
    const Index fz = omega ? fine.omega_index[it->second] : it->second;
    if (fz < 0) throw GeometryError("coarse omega node is not an omega node of the fine mesh");
    out.set(i, fine_field[fz]);
  }
  return out;
}

std::vector<StudyRow> refinement_study(const SimConfig& base, int levels, const StudyOptions& options) {
  if (levels < 2) throw ConfigError("a refinement study needs at least 2 levels");
  std::vector<StudyRow> rows;
  std::unique_ptr<Simulation> prev;
  RunResult prev_res;
  for (int l = 0; l < levels; ++l) {
    SimConfig cfg = base;
    const double factor = std::ldexp(1.0, l);
    cfg.k = base.k / factor;
    if (options.refine_space) {
      cfg.resolution.nx *= static_cast<int>(factor);
      cfg.resolution.ny *= static_cast<int>(factor);
      cfg.resolution.nz *= static_cast<int>(factor);
    }
    auto sim = std::make_unique<Simulation>(cfg);
    RunResult res = run(*sim);

    StudyRow row;
    row.level = l;
    row.h = mesh_size(sim->mesh()).h;
    row.k = cfg.k;
    row.stability1 = res.ledger.max_stability1();
    row.stability2 = res.ledger.max_stability2();
    row.E_final = res.ledger.rows.back().E;
    row.m_diff = row.s_diff = std::numeric_limits<double>::quiet_NaN();
    if (prev) {
      const FemSpace& coarse = prev->space();
      NodalField3 dm = restrict_to_coarse(coarse.mesh(), sim->mesh(), res.final_state.m);
      NodalField3 ds = restrict_to_coarse(coarse.mesh(), sim->mesh(), res.final_state.s);
      dm.data() -= prev_res.final_state.m.data();
      ds.data() -= prev_res.final_state.s.data();
      row.m_diff = std::sqrt(l2_norm_sq(coarse, dm));
      row.s_diff = std::sqrt(l2_norm_sq(coarse, ds));
    }
    rows.push_back(row);
    prev = std::move(sim);
    prev_res = std::move(res);
  }
  return rows;
}

}  // namespace sdllg
