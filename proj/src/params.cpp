#include "sdllg/params.hpp"

#include <cmath>
#include <sstream>

namespace sdllg {

void MaterialParams::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (!(c >= 0.0)) fail("coupling c must be non-negative");
  if (!(beta >= 0.0 && beta < 1.0)) fail("beta must lie in [0, 1)");
  if (!(beta_prime >= 0.0 && beta_prime < 1.0)) fail("beta_prime must lie in [0, 1)");
  if (!(beta * beta_prime < 1.0)) fail("beta * beta_prime must be < 1");
  if (!(theta > 0.5 && theta <= 1.0)) {
    std::ostringstream os;
    os << "theta must lie in (1/2, 1], got " << theta;
    fail(os.str());
  }
  if (!(C_exch > 0.0)) fail("C_exch must be positive");
  if (!(C_ani >= 0.0)) fail("C_ani must be non-negative");
  if (!easy_axis.allFinite() || std::abs(easy_axis.norm() - 1.0) > 1e-12) fail("easy axis must be a unit vector");
  if (!(D_star() > 0.0)) fail("D0 must be bounded below by a positive D_*");
  if (!(reaction_scale > 0.0) || !(precession_scale > 0.0)) fail("reaction/precession scales must be positive");
}

}  // namespace sdllg
