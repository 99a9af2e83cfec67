#pragma once

#include "sdllg/params.hpp"
#include "sdllg/types.hpp"

#include <optional>

namespace sdllg {

namespace si {
inline constexpr double kGamma = 1.76e11;             ///< rad/(s T)
inline constexpr double kMu0 = 4.0e-7 * 3.14159265358979323846;  ///< N/A^2
inline constexpr double kMuB = 9.2741e-24;            ///< J/T
inline constexpr double kElectronCharge = -1.602e-19; ///< C
}  // namespace si

/// Material data in SI units.
struct SIParams {
  double Ms = 0.0;          ///< A/m
  double A_exch = 0.0;      ///< J/m
  double K_ani = 0.0;       ///< J/m^3
  double alpha = 0.0;
  double J_coupling = 0.0;  ///< N/A^2
  double D0_tilde = 0.0;    ///< m^2/s, magnetic layers
  std::optional<double> D0_tilde_conductor;  ///< m^2/s, defaults to D0_tilde
  double lambda_sf = 0.0;   ///< m
  double lambda_J = 0.0;    ///< m
  double beta = 0.0;
  double beta_prime = 0.0;
  Vec3 Je = Vec3::Zero();   ///< A/m^2
  Vec3 He = Vec3::Zero();   ///< A/m

  /// Throws ConfigError naming the first violated bound.
  void validate() const;
};

/// Length scale selection: the intrinsic exchange length or a given value.
struct LengthChoice {
  std::optional<double> explicit_length;  ///< m; empty means intrinsic

  static LengthChoice intrinsic() { return {}; }
  static LengthChoice fixed(double L) { return {L}; }
};

struct NondimParams {
  double C_exch = 0.0;
  double C_ani = 0.0;
  double c = 0.0;
  double D0 = 0.0;
  double D0_conductor = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double beta_prime = 0.0;
  double reaction_scale = 1.0;    ///< L^2 / lambda_sf^2
  double precession_scale = 1.0;  ///< L^2 / lambda_J^2
  Vec3 j = Vec3::Zero();
  Vec3 f = Vec3::Zero();
  double time_scale = 0.0;  ///< gamma mu0 Ms, in 1/s
  double L = 0.0;           ///< m

  /// True when lambda_sf = lambda_J = L (to relative 1e-12).
  bool lengths_coincide() const;

  /// Copies the nondimensional coefficients into a parameter set; theta and
  /// the easy axis are left at their values in `base`.
  MaterialParams to_material(MaterialParams base = {}) const;
};

/// Intrinsic exchange length sqrt(2A / (mu0 Ms^2)).
double intrinsic_length(double A_exch, double Ms);

NondimParams nondimensionalize(const SIParams& si, const LengthChoice& length = LengthChoice::intrinsic());

/// t = t' / (gamma mu0 Ms).
double redimensionalize_time(double t_nondim, const SIParams& si);
/// t' = gamma mu0 Ms t.
double nondimensionalize_time(double t_seconds, const SIParams& si);

}  // namespace sdllg
