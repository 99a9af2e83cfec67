#include "sdllg/scaling.hpp"

#include <cmath>
#include <sstream>

namespace sdllg {

void SIParams::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("SI parameters: " + what); };
  if (!(Ms > 0.0)) fail("Ms must be positive");
  if (!(A_exch > 0.0)) fail("A_exch must be positive");
  if (!(K_ani >= 0.0)) fail("K_ani must be nonnegative");
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (!(J_coupling >= 0.0)) fail("J_coupling must be nonnegative");
  if (!(D0_tilde > 0.0)) fail("D0_tilde must be positive");
  if (D0_tilde_conductor && !(*D0_tilde_conductor > 0.0)) fail("D0_tilde_conductor must be positive");
  if (!(lambda_sf > 0.0) || !(lambda_J > 0.0)) fail("lambda_sf and lambda_J must be positive");
  if (!(beta > 0.0 && beta < 1.0)) fail("beta must lie in (0, 1)");
  if (!(beta_prime > 0.0 && beta_prime < 1.0)) fail("beta_prime must lie in (0, 1)");
  if (!Je.allFinite() || !He.allFinite()) fail("Je and He must be finite");
}

bool NondimParams::lengths_coincide() const {
  return std::abs(reaction_scale - 1.0) <= 1e-12 && std::abs(precession_scale - 1.0) <= 1e-12;
}

MaterialParams NondimParams::to_material(MaterialParams base) const {
  base.alpha = alpha;
  base.c = c;
  base.beta = beta;
  base.beta_prime = beta_prime;
  base.C_exch = C_exch;
  base.C_ani = C_ani;
  base.D0_magnetic = D0;
  base.D0_conductor = D0_conductor;
  base.reaction_scale = reaction_scale;
  base.precession_scale = precession_scale;
  return base;
}

double intrinsic_length(double A_exch, double Ms) {
  if (!(A_exch > 0.0) || !(Ms > 0.0)) throw ConfigError("intrinsic length needs A_exch > 0 and Ms > 0");
  return std::sqrt(2.0 * A_exch / (si::kMu0 * Ms * Ms));
}

NondimParams nondimensionalize(const SIParams& p, const LengthChoice& length) {
  p.validate();
  const double L = length.explicit_length ? *length.explicit_length : intrinsic_length(p.A_exch, p.Ms);
  if (!(L > 0.0)) throw ConfigError("length scale must be positive");
  const double mu0Ms2 = si::kMu0 * p.Ms * p.Ms;
  const double rate = si::kGamma * si::kMu0 * p.Ms;

  NondimParams n;
  n.L = L;
  n.time_scale = rate;
  n.C_exch = 2.0 * p.A_exch / (mu0Ms2 * L * L);
  n.C_ani = p.K_ani / mu0Ms2;
  n.c = p.J_coupling / si::kMu0;
  n.D0 = 2.0 * p.D0_tilde / (rate * L * L);
  n.D0_conductor = 2.0 * p.D0_tilde_conductor.value_or(p.D0_tilde) / (rate * L * L);
  n.alpha = p.alpha;
  n.beta = p.beta;
  n.beta_prime = p.beta_prime;
  n.reaction_scale = (L * L) / (p.lambda_sf * p.lambda_sf);
  n.precession_scale = (L * L) / (p.lambda_J * p.lambda_J);
  n.j = si::kMuB * p.Je / (L * si::kElectronCharge * si::kGamma * mu0Ms2);
  n.f = p.He / p.Ms;
  return n;
}

double redimensionalize_time(double t_nondim, const SIParams& p) {
  if (!(p.Ms > 0.0)) throw ConfigError("Ms must be positive");
  return t_nondim / (si::kGamma * si::kMu0 * p.Ms);
}

double nondimensionalize_time(double t_seconds, const SIParams& p) {
  if (!(p.Ms > 0.0)) throw ConfigError("Ms must be positive");
  return si::kGamma * si::kMu0 * p.Ms * t_seconds;
}

}  // namespace sdllg
