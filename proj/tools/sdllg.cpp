// Command-line front end: run, study, check, mesh.

#include "sdllg/check.hpp"
#include "sdllg/driver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace sdllg;

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kSolver = 3, kCheckFailed = 4 };

struct Options {
  std::string config;
  std::string output;
  double tol = 0.0;
  int threads = 0;
  std::string checkpoint;
  std::uint64_t seed = 1;
  int levels = 3;
  bool refine_space = false;
};

SimConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("no configuration given");
  SimConfig cfg = load_config(o.config);
  if (!o.output.empty()) cfg.output.dir = o.output;
  if (o.tol > 0.0) cfg.solver.tol = o.tol;
  if (o.threads > 0) set_assembly_threads(o.threads);
  return cfg;
}

std::string step_path(const SimConfig& cfg, int step) {
  char name[64];
  std::snprintf(name, sizeof name, "state_%06d.vtk", step);
  return (fs::path(cfg.output.dir) / name).string();
}

int cmd_run(const Options& o) {
  const SimConfig cfg = load(o);
  fs::create_directories(cfg.output.dir);
  Simulation sim(cfg);
  if (!o.checkpoint.empty() && fs::exists(o.checkpoint)) {
    sim.restore(read_checkpoint(o.checkpoint));
    std::printf("resumed from %s at step %d\n", o.checkpoint.c_str(), sim.state().step);
  }
  auto write_state = [&](const Simulation& s) {
    if (cfg.output.vtk) write_vtk(step_path(cfg, s.state().step), s.mesh(), s.state().m, s.state().s);
  };
  write_state(sim);
  RunOptions ro;
  ro.on_step = [&](const Simulation& s, const StepReport& rep) {
    const bool last = s.finished();
    if ((cfg.output.every > 0 && s.state().step % cfg.output.every == 0) || last) {
      write_state(s);
      if (!o.checkpoint.empty()) write_checkpoint(o.checkpoint, s.checkpoint());
    }
    if (cfg.output.every > 0 && s.state().step % cfg.output.every == 0)
      std::printf("step %6d  t=%-12.6g  E=%-14.8g  iters=%d/%d  identity=%.2e\n", s.state().step, s.state().t,
                  s.ledger().rows.back().E, rep.llg.iterations, rep.spin.iterations, rep.identity.residual);
  };
  const RunResult res = run(sim, ro);
  if (cfg.output.ledger_csv) write_ledger_csv((fs::path(cfg.output.dir) / "ledger.csv").string(), res.ledger);
  std::printf("finished %d steps, t=%.6g, E=%.10g\n", res.final_state.step, res.final_state.t,
              res.ledger.rows.back().E);
  std::printf("max step identity residual %.3e, max modulus deviation %.3e\n", res.max_identity_residual,
              res.max_modulus_deviation);
  if (cfg.scaling)
    std::printf("final time %.6g s (length scale %.6g m)\n", res.final_state.t / cfg.scaling->time_scale,
                cfg.scaling->L);
  return kOk;
}

int cmd_study(const Options& o) {
  const SimConfig cfg = load(o);
  StudyOptions so;
  so.refine_space = o.refine_space;
  const auto rows = refinement_study(cfg, o.levels, so);
  fs::create_directories(cfg.output.dir);
  std::ofstream csv(fs::path(cfg.output.dir) / "study.csv");
  csv << "level,h,k,m_diff,s_diff,stability1,stability2,E_final\n";
  csv.precision(17);
  std::printf("%5s %12s %12s %14s %14s %14s %14s\n", "level", "h", "k", "|dm|", "|ds|", "stab1", "stab2");
  for (const auto& r : rows) {
    std::printf("%5d %12.5g %12.5g %14.6e %14.6e %14.6e %14.6e\n", r.level, r.h, r.k, r.m_diff, r.s_diff,
                r.stability1, r.stability2);
    csv << r.level << ',' << r.h << ',' << r.k << ',' << r.m_diff << ',' << r.s_diff << ',' << r.stability1 << ','
        << r.stability2 << ',' << r.E_final << '\n';
  }
  return kOk;
}

int cmd_check(const Options& o) {
  const SimConfig cfg = load(o);
  const auto results = run_check_suite(cfg, o.seed);
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s  %-28s value=%.3e limit=%.3e%s%s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.value,
                r.limit, r.detail.empty() ? "" : "  ", r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_mesh(const Options& o) {
  const SimConfig cfg = load(o);
  const TetMesh mesh = build_mesh(cfg);
  const MeshSize sz = mesh_size(mesh);
  std::printf("nodes %d  tets %d  omega nodes %d  boundary facets %zu  h %.6g  shape %.4g\n", mesh.num_nodes(),
              mesh.num_tets(), mesh.num_omega_nodes(), mesh.boundary_facets.size(), sz.h, sz.shape_regularity);
  const auto violations = validate_mesh(mesh);
  for (const auto& v : violations) std::printf("violation %s: %s\n", to_string(v.invariant).c_str(), v.detail.c_str());
  fs::create_directories(cfg.output.dir);
  const std::string path = (fs::path(cfg.output.dir) / "mesh.vtk").string();
  write_vtk(path, mesh, initial_magnetization(cfg, mesh), initial_spin(cfg, mesh));
  std::printf("wrote %s\n", path.c_str());
  return violations.empty() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-diffusion LLG finite element simulator"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config,--config", o.config, "configuration file (TOML)");
    sub->add_option("--output", o.output, "output directory");
    sub->add_option("--tol", o.tol, "relative residual tolerance of the linear solvers");
    sub->add_option("--threads", o.threads, "assembly threads");
    sub->add_option("--seed", o.seed, "seed for randomised diagnostics");
  };
  CLI::App* run_cmd = app.add_subcommand("run", "time-step a configuration");
  add_common(run_cmd);
  run_cmd->add_option("--checkpoint", o.checkpoint, "checkpoint file: resumed from if present, written on output");
  CLI::App* study_cmd = app.add_subcommand("study", "refinement ladder");
  add_common(study_cmd);
  study_cmd->add_option("--levels", o.levels, "number of levels")->check(CLI::PositiveNumber);
  study_cmd->add_flag("--refine-space", o.refine_space, "also halve h per level");
  CLI::App* check_cmd = app.add_subcommand("check", "diagnostics suite on a small mesh");
  add_common(check_cmd);
  CLI::App* mesh_cmd = app.add_subcommand("mesh", "emit the mesh only");
  add_common(mesh_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(o);
    if (study_cmd->parsed()) return cmd_study(o);
    if (check_cmd->parsed()) return cmd_check(o);
    if (mesh_cmd->parsed()) return cmd_mesh(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfig;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kConfig;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s (residual %.3e after %d iterations)\n", e.what(), e.residual(),
                 e.iterations());
    return kSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kOk;
}
