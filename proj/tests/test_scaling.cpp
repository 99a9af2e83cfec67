#include "sdllg/scaling.hpp"

#include <doctest.h>

#include <cmath>

using namespace sdllg;

namespace {

SIParams permalloy_like() {
  SIParams p;
  p.Ms = 8e5;
  p.A_exch = 1.3e-11;
  p.alpha = 0.02;
  p.J_coupling = 1e-3;
  p.D0_tilde = 1e-3;
  p.beta = 0.5;
  p.beta_prime = 0.6;
  p.lambda_sf = 4e-9;
  p.lambda_J = 1e-9;
  return p;
}

}  // namespace

TEST_CASE("intrinsic exchange length") {
  const double L = intrinsic_length(1.3e-11, 8e5);
  CHECK(L == doctest::Approx(5.686e-9).epsilon(1e-4));
  // Independent evaluation with the same constants.
  CHECK(L == doctest::Approx(std::sqrt(2 * 1.3e-11 / (4e-7 * M_PI * 6.4e11))).epsilon(1e-15));
  CHECK_THROWS_AS(intrinsic_length(0.0, 8e5), ConfigError);
}

TEST_CASE("intrinsic length gives unit exchange") {
  const NondimParams nd = nondimensionalize(permalloy_like());
  CHECK(nd.C_exch == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nd.C_ani == 0.0);
  const NondimParams fixed = nondimensionalize(permalloy_like(), LengthChoice::fixed(2.0 * nd.L));
  CHECK(fixed.C_exch == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("dimensionless groups") {
  SIParams p = permalloy_like();
  p.K_ani = 4e4;
  p.Je = Vec3(0, 0, 1e11);
  p.He = Vec3(8e3, 0, 0);
  const NondimParams nd = nondimensionalize(p, LengthChoice::fixed(1e-9));
  const double mu0 = 4e-7 * M_PI;
  const double rate = 1.76e11 * mu0 * 8e5;
  CHECK(nd.time_scale == doctest::Approx(rate).epsilon(1e-15));
  CHECK(nd.C_ani == doctest::Approx(4e4 / (mu0 * 6.4e11)).epsilon(1e-14));
  CHECK(nd.c == doctest::Approx(1e-3 / mu0).epsilon(1e-14));
  CHECK(nd.D0 == doctest::Approx(2e-3 / (rate * 1e-18)).epsilon(1e-14));
  CHECK(nd.D0_conductor == nd.D0);
  CHECK(nd.reaction_scale == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(nd.precession_scale == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(nd.lengths_coincide());
  CHECK(nd.f.x() == doctest::Approx(0.01).epsilon(1e-14));
  const double jz = 9.2741e-24 * 1e11 / (1e-9 * -1.602e-19 * 1.76e11 * mu0 * 6.4e11);
  CHECK(nd.j.z() == doctest::Approx(jz).epsilon(1e-13));
  CHECK(nd.j.z() < 0.0);

  p.D0_tilde_conductor = 3e-3;
  CHECK(nondimensionalize(p, LengthChoice::fixed(1e-9)).D0_conductor == doctest::Approx(3.0 * nd.D0).epsilon(1e-14));
}

TEST_CASE("invariance under consistent rescaling") {
  // Doubling Ms while quadrupling A and K leaves L, C_exch and C_ani alone.
  SIParams a = permalloy_like();
  a.K_ani = 1e4;
  SIParams b = a;
  b.Ms = 2 * a.Ms;
  b.A_exch = 4 * a.A_exch;
  b.K_ani = 4 * a.K_ani;
  const NondimParams na = nondimensionalize(a), nb = nondimensionalize(b);
  CHECK(nb.L == doctest::Approx(na.L).epsilon(1e-15));
  CHECK(nb.C_exch == doctest::Approx(na.C_exch).epsilon(1e-14));
  CHECK(nb.C_ani == doctest::Approx(na.C_ani).epsilon(1e-14));
  CHECK(nb.time_scale == doctest::Approx(2 * na.time_scale).epsilon(1e-15));
}

TEST_CASE("lengths coincide with the scale") {
  SIParams p = permalloy_like();
  p.lambda_sf = p.lambda_J = intrinsic_length(p.A_exch, p.Ms);
  CHECK(nondimensionalize(p).lengths_coincide());
}

TEST_CASE("time conversion") {
  const SIParams p = permalloy_like();
  const double unit = redimensionalize_time(1.0, p);
  CHECK(unit == doctest::Approx(5.652e-12).epsilon(1e-3));
  CHECK(unit == doctest::Approx(1.0 / (1.76e11 * 4e-7 * M_PI * 8e5)).epsilon(1e-15));
  CHECK(redimensionalize_time(0.0, p) == 0.0);
  for (double t : {1e-15, 1e-12, 7.3e-9, 1e-3}) {
    CHECK(std::abs(redimensionalize_time(nondimensionalize_time(t, p), p) / t - 1.0) <= 1e-14);
    CHECK(std::abs(nondimensionalize_time(redimensionalize_time(t * 1e12, p), p) / (t * 1e12) - 1.0) <= 1e-14);
  }
}

TEST_CASE("SI parameter validation") {
  auto bad = [](auto mutate) {
    SIParams p = permalloy_like();
    mutate(p);
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK_THROWS_AS(nondimensionalize(p), ConfigError);
  };
  bad([](SIParams& p) { p.Ms = 0.0; });
  bad([](SIParams& p) { p.A_exch = -1.0; });
  bad([](SIParams& p) { p.K_ani = -1.0; });
  bad([](SIParams& p) { p.beta = 1.0; });
  bad([](SIParams& p) { p.lambda_J = 0.0; });
  bad([](SIParams& p) { p.D0_tilde_conductor = 0.0; });
  bad([](SIParams& p) { p.Je = Vec3(NAN, 0, 0); });
  CHECK_THROWS_AS(nondimensionalize(permalloy_like(), LengthChoice::fixed(-1.0)), ConfigError);
}

TEST_CASE("material parameters from the nondimensional set") {
  const NondimParams nd = nondimensionalize(permalloy_like());
  MaterialParams base;
  base.theta = 0.7;
  base.easy_axis = Vec3::UnitX();
  const MaterialParams m = nd.to_material(base);
  CHECK(m.theta == 0.7);
  CHECK(m.easy_axis == Vec3::UnitX());
  CHECK(m.alpha == nd.alpha);
  CHECK(m.D0_magnetic == nd.D0);
  CHECK(m.precession_scale == nd.precession_scale);
}
