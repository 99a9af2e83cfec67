#include "sdllg/config.hpp"

#include "sdllg/toml_lite.hpp"

#include <cmath>
#include <filesystem>
#include <set>

namespace sdllg {

namespace {

using json = nlohmann::json;

const json& table(const json& doc, const std::string& name) {
  static const json empty = json::object();
  if (!doc.contains(name)) return empty;
  const json& t = doc.at(name);
  if (!t.is_object()) throw ConfigError("[" + name + "] must be a table");
  return t;
}

void check_keys(const json& t, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : t.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in [" + where + "]");
}

// Unit handling: in SI mode a dimensional quantity `key` needs
// `key_unit = "<unit>"`; in nondimensional mode a unit key, if present, must
// read "1".
class Units {
 public:
  explicit Units(bool si) : si_(si) {}
  bool si() const { return si_; }

  void check(const json& t, const std::string& where, const std::string& key, const std::string& expected) const {
    const std::string ukey = key + "_unit";
    if (si_ && !expected.empty()) {
      if (!t.contains(ukey)) throw ConfigError("[" + where + "] " + key + " needs " + ukey + " = \"" + expected + "\"");
      if (t.at(ukey) != expected)
        throw ConfigError("[" + where + "] " + ukey + " must be \"" + expected + "\" in SI mode");
    } else if (t.contains(ukey) && t.at(ukey) != "1") {
      throw ConfigError("[" + where + "] " + ukey + " must be \"1\" in nondimensional mode");
    }
  }

 private:
  bool si_;
};

double number(const json& t, const std::string& where, const std::string& key) {
  if (!t.contains(key)) throw ConfigError("[" + where + "] missing key '" + key + "'");
  const json& v = t.at(key);
  if (!v.is_number()) throw ConfigError("[" + where + "] " + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("[" + where + "] " + key + " must be finite");
  return x;
}

double number_or(const json& t, const std::string& where, const std::string& key, double fallback) {
  return t.contains(key) ? number(t, where, key) : fallback;
}

Vec3 vec3(const json& t, const std::string& where, const std::string& key) {
  if (!t.contains(key)) throw ConfigError("[" + where + "] missing key '" + key + "'");
  const json& v = t.at(key);
  if (!v.is_array() || v.size() != 3) throw ConfigError("[" + where + "] " + key + " must be a 3-element array");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ConfigError("[" + where + "] " + key + " must contain numbers");
    out[i] = v[i].get<double>();
  }
  if (!out.allFinite()) throw ConfigError("[" + where + "] " + key + " must be finite");
  return out;
}

std::string string_or(const json& t, const std::string& where, const std::string& key, const std::string& fallback) {
  if (!t.contains(key)) return fallback;
  if (!t.at(key).is_string()) throw ConfigError("[" + where + "] " + key + " must be a string");
  return t.at(key).get<std::string>();
}

SIParams parse_si_material(const json& mat, const Units& u) {
  const std::string w = "material";
  SIParams p;
  u.check(mat, w, "Ms", "A/m");
  p.Ms = number(mat, w, "Ms");
  u.check(mat, w, "A_exch", "J/m");
  p.A_exch = number(mat, w, "A_exch");
  u.check(mat, w, "K_ani", "J/m^3");
  p.K_ani = number_or(mat, w, "K_ani", 0.0);
  p.alpha = number(mat, w, "alpha");
  u.check(mat, w, "J_coupling", "N/A^2");
  p.J_coupling = number(mat, w, "J_coupling");
  u.check(mat, w, "D0_tilde", "m^2/s");
  p.D0_tilde = number(mat, w, "D0_tilde");
  if (mat.contains("D0_tilde_conductor")) {
    u.check(mat, w, "D0_tilde_conductor", "m^2/s");
    p.D0_tilde_conductor = number(mat, w, "D0_tilde_conductor");
  }
  u.check(mat, w, "lambda_sf", "m");
  p.lambda_sf = number(mat, w, "lambda_sf");
  u.check(mat, w, "lambda_J", "m");
  p.lambda_J = number(mat, w, "lambda_J");
  p.beta = number(mat, w, "beta");
  p.beta_prime = number(mat, w, "beta_prime");
  p.validate();
  return p;
}

SourceField parse_source(const json& t, const std::string& where, SourceField::Target target, const Units& u,
                         const std::string& si_unit, double value_factor, double time_factor) {
  if (t.empty()) return SourceField::constant(target, Vec3::Zero());
  check_keys(t, where, {"kind", "value", "from", "to", "t_ramp", "value_unit", "from_unit", "to_unit", "t_ramp_unit"});
  const std::string kind = string_or(t, where, "kind", "constant");
  if (kind == "constant") {
    u.check(t, where, "value", si_unit);
    return SourceField::constant(target, value_factor * vec3(t, where, "value"));
  }
  if (kind == "ramp") {
    u.check(t, where, "from", si_unit);
    u.check(t, where, "to", si_unit);
    u.check(t, where, "t_ramp", "s");
    return SourceField::ramp(target, value_factor * vec3(t, where, "from"), value_factor * vec3(t, where, "to"),
                             time_factor * number(t, where, "t_ramp"));
  }
  throw ConfigError("[" + where + "] kind must be \"constant\" or \"ramp\"");
}

Region parse_region(const std::string& s) {
  if (s == "magnetic") return Region::Magnetic;
  if (s == "conductor") return Region::Conductor;
  throw ConfigError("layer region must be \"magnetic\" or \"conductor\", got \"" + s + "\"");
}

}  // namespace

void SimConfig::validate() const {
  if (!(params.theta > 0.5 && params.theta <= 1.0)) throw ConfigError("theta must lie in (1/2, 1]");
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("time step k must be positive");
  if (!(T_final >= 0.0) || !std::isfinite(T_final)) throw ConfigError("T_final must be nonnegative");
  const double n = T_final / k;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n))
    throw ConfigError("T_final must be an integer multiple of k");
  params.validate();
  if (layers.empty()) throw ConfigError("at least one layer is required");
}

int SimConfig::num_steps() const { return static_cast<int>(std::llround(T_final / k)); }

std::vector<LayerSpec> SimConfig::layer_specs() const {
  std::vector<LayerSpec> out;
  for (const auto& l : layers) out.push_back(l.spec);
  return out;
}

namespace {

SimConfig build_config(const json& doc, const std::string& base_dir) {
  check_keys(doc, "root", {"simulation", "geometry", "material", "initial", "source", "solver", "output"});
  SimConfig cfg;

  const json& mat = table(doc, "material");
  const std::string units = string_or(mat, "material", "units", "nondimensional");
  if (units != "nondimensional" && units != "SI") throw ConfigError("[material] units must be \"nondimensional\" or \"SI\"");
  const Units u(units == "SI");

  // Conversion factors for lengths, times, fields and currents.
  double length_factor = 1.0, time_factor = 1.0, f_factor = 1.0, j_factor = 1.0;
  Vec3 easy_axis = Vec3::UnitZ();
  if (mat.contains("easy_axis")) easy_axis = vec3(mat, "material", "easy_axis");
  if (u.si()) {
    check_keys(mat, "material",
               {"units", "Ms", "Ms_unit", "A_exch", "A_exch_unit", "K_ani", "K_ani_unit", "alpha", "J_coupling",
                "J_coupling_unit", "D0_tilde", "D0_tilde_unit", "D0_tilde_conductor", "D0_tilde_conductor_unit",
                "lambda_sf", "lambda_sf_unit", "lambda_J", "lambda_J_unit", "beta", "beta_prime", "easy_axis", "length",
                "length_unit"});
    SIParams si = parse_si_material(mat, u);
    LengthChoice lc = LengthChoice::intrinsic();
    if (mat.contains("length") && !mat.at("length").is_string()) {
      u.check(mat, "material", "length", "m");
      lc = LengthChoice::fixed(number(mat, "material", "length"));
    } else if (string_or(mat, "material", "length", "intrinsic") != "intrinsic") {
      throw ConfigError("[material] length must be \"intrinsic\" or a number");
    }
    const NondimParams nd = nondimensionalize(si, lc);
    cfg.params = nd.to_material(cfg.params);
    length_factor = 1.0 / nd.L;
    time_factor = nd.time_scale;
    f_factor = 1.0 / si.Ms;
    j_factor = si::kMuB / (nd.L * si::kElectronCharge * si::kGamma * si::kMu0 * si.Ms * si.Ms);
    cfg.si = si;
    cfg.scaling = nd;
  } else {
    check_keys(mat, "material",
               {"units", "alpha", "c", "beta", "beta_prime", "C_exch", "C_ani", "easy_axis", "D0", "D0_conductor",
                "reaction_scale", "precession_scale"});
    MaterialParams& p = cfg.params;
    p.alpha = number_or(mat, "material", "alpha", p.alpha);
    p.c = number_or(mat, "material", "c", p.c);
    p.beta = number_or(mat, "material", "beta", p.beta);
    p.beta_prime = number_or(mat, "material", "beta_prime", p.beta_prime);
    p.C_exch = number_or(mat, "material", "C_exch", p.C_exch);
    p.C_ani = number_or(mat, "material", "C_ani", p.C_ani);
    p.D0_magnetic = number_or(mat, "material", "D0", p.D0_magnetic);
    p.D0_conductor = number_or(mat, "material", "D0_conductor", p.D0_magnetic);
    p.reaction_scale = number_or(mat, "material", "reaction_scale", p.reaction_scale);
    p.precession_scale = number_or(mat, "material", "precession_scale", p.precession_scale);
  }
  if (std::abs(easy_axis.norm() - 1.0) > 1e-12) throw ConfigError("[material] easy_axis must be a unit vector");
  cfg.params.easy_axis = easy_axis;
  cfg.pi = cfg.params.C_ani > 0.0 ? PiOperator::uniaxial(easy_axis, cfg.params.C_ani) : PiOperator::zero();

  const json& sim = table(doc, "simulation");
  check_keys(sim, "simulation", {"theta", "k", "k_unit", "T_final", "T_final_unit"});
  cfg.params.theta = number_or(sim, "simulation", "theta", cfg.params.theta);
  u.check(sim, "simulation", "k", "s");
  cfg.k = time_factor * number(sim, "simulation", "k");
  u.check(sim, "simulation", "T_final", "s");
  cfg.T_final = time_factor * number(sim, "simulation", "T_final");
  if (u.si()) {
    // Round the converted end time onto the step grid.
    const double n = std::round(cfg.T_final / cfg.k);
    if (std::abs(cfg.T_final / cfg.k - n) <= 1e-9 * std::max(1.0, n)) cfg.T_final = n * cfg.k;
  }

  const json& geo = table(doc, "geometry");
  check_keys(geo, "geometry", {"width", "width_unit", "depth", "depth_unit", "resolution", "layer"});
  u.check(geo, "geometry", "width", "m");
  cfg.width = length_factor * number_or(geo, "geometry", "width", 1.0 / length_factor);
  u.check(geo, "geometry", "depth", "m");
  cfg.depth = length_factor * number_or(geo, "geometry", "depth", 1.0 / length_factor);
  if (!geo.contains("resolution") || !geo.at("resolution").is_array() || geo.at("resolution").size() != 3)
    throw ConfigError("[geometry] resolution must be [nx, ny, nz]");
  for (const auto& r : geo.at("resolution"))
    if (!r.is_number_integer()) throw ConfigError("[geometry] resolution entries must be integers");
  cfg.resolution = {geo.at("resolution")[0].get<int>(), geo.at("resolution")[1].get<int>(),
                    geo.at("resolution")[2].get<int>()};
  if (!geo.contains("layer") || !geo.at("layer").is_array() || geo.at("layer").empty())
    throw ConfigError("[[geometry.layer]] entries are required");
  for (const auto& l : geo.at("layer")) {
    check_keys(l, "geometry.layer", {"thickness", "thickness_unit", "region", "m0"});
    u.check(l, "geometry.layer", "thickness", "m");
    LayerConfig lc;
    lc.spec.thickness = length_factor * number(l, "geometry.layer", "thickness");
    lc.spec.region = parse_region(string_or(l, "geometry.layer", "region", ""));
    if (l.contains("m0")) lc.m0 = vec3(l, "geometry.layer", "m0");
    cfg.layers.push_back(lc);
  }

  const json& init = table(doc, "initial");
  check_keys(init, "initial", {"m", "s"});
  const json& im = table(init, "m");
  check_keys(im, "initial.m", {"kind", "direction", "core_radius", "core_radius_unit", "file"});
  const std::string mk = string_or(im, "initial.m", "kind", "uniform");
  if (mk == "uniform") {
    cfg.m0.kind = InitialM::Kind::Uniform;
    if (im.contains("direction")) cfg.m0.direction = vec3(im, "initial.m", "direction");
  } else if (mk == "vortex") {
    cfg.m0.kind = InitialM::Kind::Vortex;
    u.check(im, "initial.m", "core_radius", "m");
    cfg.m0.core_radius = length_factor * number(im, "initial.m", "core_radius");
    if (!(cfg.m0.core_radius > 0.0)) throw ConfigError("[initial.m] core_radius must be positive");
  } else if (mk == "file") {
    cfg.m0.kind = InitialM::Kind::File;
    const std::filesystem::path p = string_or(im, "initial.m", "file", "");
    if (p.empty()) throw ConfigError("[initial.m] file is required for kind = \"file\"");
    cfg.m0.file = p.is_absolute() ? p.string() : (std::filesystem::path(base_dir) / p).string();
  } else {
    throw ConfigError("[initial.m] kind must be \"uniform\", \"vortex\" or \"file\"");
  }
  const json& is = table(init, "s");
  check_keys(is, "initial.s", {"kind", "value", "value_unit"});
  const std::string sk = string_or(is, "initial.s", "kind", "zero");
  if (sk == "zero") {
    cfg.s0.kind = InitialS::Kind::Zero;
  } else if (sk == "uniform") {
    cfg.s0.kind = InitialS::Kind::Uniform;
    u.check(is, "initial.s", "value", "A/m");
    cfg.s0.value = vec3(is, "initial.s", "value") * (u.si() ? 1.0 / cfg.si->Ms : 1.0);
  } else {
    throw ConfigError("[initial.s] kind must be \"zero\" or \"uniform\"");
  }

  const json& src = table(doc, "source");
  check_keys(src, "source", {"f", "j"});
  cfg.f = parse_source(table(src, "f"), "source.f", SourceField::Target::AppliedF, u, "A/m", f_factor, time_factor);
  cfg.j = parse_source(table(src, "j"), "source.j", SourceField::Target::CurrentJ, u, "A/m^2", j_factor, time_factor);

  const json& sol = table(doc, "solver");
  check_keys(sol, "solver", {"tol", "max_iter_factor"});
  cfg.solver.tol = number_or(sol, "solver", "tol", cfg.solver.tol);
  if (!(cfg.solver.tol > 0.0)) throw ConfigError("[solver] tol must be positive");
  if (sol.contains("max_iter_factor")) cfg.solver.max_iter_factor = sol.at("max_iter_factor").get<int>();

  const json& out = table(doc, "output");
  check_keys(out, "output", {"dir", "every", "vtk", "ledger_csv"});
  cfg.output.dir = string_or(out, "output", "dir", cfg.output.dir);
  if (out.contains("every")) cfg.output.every = out.at("every").get<int>();
  if (out.contains("vtk")) cfg.output.vtk = out.at("vtk").get<bool>();
  if (out.contains("ledger_csv")) cfg.output.ledger_csv = out.at("ledger_csv").get<bool>();

  cfg.validate();
  return cfg;
}

}  // namespace

SimConfig config_from_json(const json& doc, const std::string& base_dir) {
  try {
    return build_config(doc, base_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration value: ") + e.what());
  }
}

SimConfig load_config(const std::string& path) {
  const json doc = parse_toml_file(path);
  return config_from_json(doc, std::filesystem::path(path).parent_path().string());
}

}  // namespace sdllg
