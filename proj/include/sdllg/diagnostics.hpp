#pragma once

#include "sdllg/fem.hpp"
#include "sdllg/fields.hpp"
#include "sdllg/params.hpp"

#include <cstdint>
#include <iosfwd>

namespace sdllg {

/// E = (C_exch/2)||grad m||^2 - (f, m) - (1/2)(pi(m), m) - c (s, m), all over
/// omega with consistent mass/stiffness. m and f live on omega, s on Omega.
double energy(const FemSpace& space, const NodalField3& m, const NodalField3& s, const NodalField3& f,
              const PiOperator& pi, const MaterialParams& params);

/// Both sides of the discrete per-step energy identity
///   alpha||v||^2 + (C/2k)(||grad m+||^2 - ||grad m||^2) + C k (theta - 1/2)||grad v||^2
///     = (pi(m), v) + (f, v) + c (s, v).
struct StepIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double scale = 0.0;     ///< sum of absolute values of all terms
  double residual = 0.0;  ///< |lhs - rhs| / scale (0 if scale is 0)
};

StepIdentity step_identity_check(const FemSpace& space, const NodalField3& m, const NodalField3& m_next,
                                 const NodalField3& v, const NodalField3& f, const NodalField3& pi_m,
                                 const NodalField3& s_omega, const MaterialParams& params, double k);

/// max over steps and nodes of | |m^{i+1}(z)|^2 - 1 - k^2 sum_{l<=i} |v^l(z)|^2 |.
/// m_traj holds m^0..m^N, v_traj holds v^0..v^{N-1}.
double nodewise_modulus_check(const std::vector<NodalField3>& m_traj, const std::vector<NodalField3>& v_traj,
                              double k);

/// One row per time level; row 0 is the initial state with zero increments.
struct LedgerRow {
  int step = 0;
  double t = 0.0;
  double E = 0.0;
  double dissipation = 0.0;   ///< alpha k ||v||^2
  double theta_term = 0.0;    ///< C k^2 (theta - 1/2) ||grad v||^2
  double f_work = 0.0;        ///< (f^{i+1} - f^i, m^{i+1})
  double s_work = 0.0;        ///< c (s^{i+1} - s^i, m^{i+1})
  double pi_mismatch = 0.0;   ///< k (pi(m) - pi_h(m), v); pi_h = pi here
  double pi_remainder = 0.0;  ///< -(k^2/2)(pi(v), v)
  double s_L2 = 0.0;          ///< ||s||^2 over Omega
  double s_H1_cumsum = 0.0;   ///< k sum ||s^{l+1}||^2_{H1}
  double s_jump_cumsum = 0.0; ///< sum ||s^{l+1} - s^l||^2
  double m_grad_L2 = 0.0;     ///< ||grad m||^2 over omega
  double v_cumsum = 0.0;      ///< k sum ||v^l||^2
  double grad_v_cumsum = 0.0; ///< (theta - 1/2) k^2 sum ||grad v^l||^2

  double stability1() const { return s_L2 + s_H1_cumsum + s_jump_cumsum; }
  double stability2() const { return m_grad_L2 + v_cumsum + grad_v_cumsum; }
};

struct EnergyLedger {
  std::vector<LedgerRow> rows;

  /// Largest value over the run of each stability sum.
  double max_stability1() const;
  double max_stability2() const;

  void write_csv(std::ostream& os) const;
};

/// Data of one completed step i -> i+1.
struct StepData {
  const NodalField3* m;       ///< m^i (omega)
  const NodalField3* m_next;  ///< m^{i+1} (omega)
  const NodalField3* v;       ///< v^i (omega)
  const NodalField3* s;       ///< s^i (Omega)
  const NodalField3* s_next;  ///< s^{i+1} (Omega)
  const NodalField3* f;       ///< f^i (omega)
  const NodalField3* f_next;  ///< f^{i+1} (omega)
};

LedgerRow initial_ledger_row(const FemSpace& space, const NodalField3& m, const NodalField3& s, const NodalField3& f,
                             const PiOperator& pi, const MaterialParams& params);

LedgerRow next_ledger_row(const FemSpace& space, const LedgerRow& prev, const StepData& d, const PiOperator& pi,
                          const MaterialParams& params, double k);

struct EnergyMonitor {
  double max_excess = 0.0;          ///< max_j positive part of E_j + sum(...) - E_0
  double max_abs_telescope = 0.0;   ///< max_j |E_j + sum(...) - E_0|
  double corrected_residual = 0.0;  ///< max_j |... - sum remainder| / max(1, |E_0|, scale)
  double slack_bound = 0.0;         ///< C_pi k * (k sum ||v^i||^2), the O(k) allowance
};

EnergyMonitor energy_estimate_monitor(const EnergyLedger& ledger, double E0, const PiOperator& pi, double k);

/// Smallest ratio a_h(z, z) / ||z||^2_{H1} over random vectors z (time term
/// excluded). m_proj lives on omega.
double coercivity_probe(const FemSpace& space, const NodalField3& m_proj, const MaterialParams& params, int samples,
                        std::uint64_t seed);

/// Largest ratio ||grad Pi phi|| / ||grad phi|| over random nodal fields with
/// moduli in [1, 2] on omega.
double projection_bound_probe(const FemSpace& space, int samples, std::uint64_t seed);

/// Random unit-modulus nodal fields on omega (probes for the pi bound).
std::vector<NodalField3> random_unit_fields(Index n, int count, std::uint64_t seed);

}  // namespace sdllg
