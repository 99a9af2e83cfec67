#include "sdllg/check.hpp"

#include "sdllg/dense_oracle.hpp"
#include "sdllg/driver.hpp"

#include <cmath>
#include <numeric>

namespace sdllg {

SimConfig small_mesh_config(const SimConfig& cfg, Index max_nodes) {
  SimConfig out = cfg;
  auto nodes = [](const Resolution& r) {
    return static_cast<long long>(r.nx + 1) * (r.ny + 1) * (r.nz + 1);
  };
  // Smallest nz that resolves every layer on a uniform grid.
  double total = 0.0;
  for (const auto& l : cfg.layers) total += l.spec.thickness;
  int nz_min = cfg.resolution.nz;
  for (int nz = 1; nz <= cfg.resolution.nz; ++nz) {
    const double dz = total / nz;
    const bool ok = std::all_of(cfg.layers.begin(), cfg.layers.end(), [&](const LayerConfig& l) {
      const double c = l.spec.thickness / dz;
      return std::abs(c - std::round(c)) < 1e-9 * std::max(1.0, c) && std::round(c) >= 1.0;
    });
    if (ok) {
      nz_min = nz;
      break;
    }
  }
  Resolution& r = out.resolution;
  while (nodes(r) > max_nodes) {
    if (r.nx >= r.ny && r.nx > 1) {
      r.nx = std::max(1, r.nx / 2);
    } else if (r.ny > 1) {
      r.ny = std::max(1, r.ny / 2);
    } else if (r.nz > nz_min && r.nz % 2 == 0 && (r.nz / 2) % nz_min == 0) {
      r.nz /= 2;
    } else if (r.nz != nz_min) {
      r.nz = nz_min;
    } else {
      break;
    }
  }
  if (nodes(r) > max_nodes) throw ConfigError("layer stack cannot be resolved within the node limit of the check");
  return out;
}

std::vector<CheckResult> run_check_suite(const SimConfig& cfg_in, std::uint64_t seed, int steps) {
  std::vector<CheckResult> out;
  SimConfig cfg = small_mesh_config(cfg_in, kOracleMaxNodes);
  cfg.T_final = std::min(cfg.num_steps(), steps) * cfg.k;
  cfg.output.vtk = false;

  Simulation sim(cfg);
  const TetMesh& mesh = sim.mesh();

  const auto violations = validate_mesh(mesh);
  for (MeshInvariant inv : {MeshInvariant::NegativeVolume, MeshInvariant::NonConforming,
                            MeshInvariant::OmegaNotResolved, MeshInvariant::SharedFacetMisplaced,
                            MeshInvariant::OmegaNodesInconsistent}) {
    CheckResult r;
    r.name = "mesh." + to_string(inv);
    r.passed = true;
    for (const auto& v : violations)
      if (v.invariant == inv) {
        r.passed = false;
        r.value = static_cast<double>(v.entities.size());
        r.detail = v.detail;
      }
    out.push_back(r);
  }

  // Oracle comparison on the first step, before the run mutates the state.
  {
    SimConfig tight = cfg;
    tight.solver.tol = std::min(cfg.solver.tol, 1e-12);
    if (tight.num_steps() >= 1) {
      Simulation one(tight);
      const SimState s0 = one.state();
      const StepReport rep = one.advance();
      const NodalField3 f0 = sample_source(cfg.f, 0.0, cfg.T_final, mesh, Support::OmegaMagnetic);
      const NodalField3 j1 = sample_source(cfg.j, cfg.k, cfg.T_final, mesh, Support::OmegaAll);
      const OracleStep o = dense_oracle_step(mesh, s0.m, s0.s, f0, j1, cfg.pi, cfg.params, cfg.k);
      const double dv = (o.v.data() - rep.v.data()).lpNorm<Eigen::Infinity>();
      const double dm = (o.m_next.data() - one.state().m.data()).lpNorm<Eigen::Infinity>();
      const double ds = (o.s_next.data() - one.state().s.data()).lpNorm<Eigen::Infinity>();
      out.push_back({"oracle.agreement", std::max({dv, dm, ds}) <= 1e-9, std::max({dv, dm, ds}), 1e-9, ""});
    }
  }

  RunResult res = run(sim, {true, nullptr});
  out.push_back({"modulus.identity", res.max_modulus_deviation <= 1e-12, res.max_modulus_deviation, 1e-12, ""});
  out.push_back({"energy.step_identity", res.max_identity_residual <= 1e-8, res.max_identity_residual, 1e-8, ""});

  const NodalField3 mp = nodal_projection(res.final_state.m);
  const double floor = (1.0 - cfg.params.beta * cfg.params.beta_prime) * cfg.params.D_star();
  const double rq = coercivity_probe(sim.space(), mp, cfg.params, 100, seed);
  out.push_back({"spin.coercivity", rq >= floor - 1e-10, rq, floor, ""});

  const auto probes = random_unit_fields(mesh.num_omega_nodes(), 100, seed + 1);
  const double pib = verify_pi_bound(sim.space(), cfg.pi, probes);
  out.push_back({"fields.pi_bound", pib <= cfg.pi.bound() + 1e-12, pib, cfg.pi.bound(), ""});

  const EnergyMonitor mon = energy_estimate_monitor(res.ledger, res.E0, cfg.pi, cfg.k);
  if (cfg.pi.kind == PiOperator::Kind::Zero) {
    out.push_back({"energy.telescope", mon.corrected_residual <= 1e-8, mon.corrected_residual, 1e-8, ""});
  } else {
    out.push_back({"energy.telescope", mon.max_excess <= mon.slack_bound + 1e-10, mon.max_excess, mon.slack_bound,
                   "uniaxial pi: excess compared with the O(k) slack"});
  }
  return out;
}

}  // namespace sdllg
