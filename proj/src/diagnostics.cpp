#include "sdllg/diagnostics.hpp"

#include "sdllg/spin_step.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

namespace sdllg {

double energy(const FemSpace& space, const NodalField3& m, const NodalField3& s, const NodalField3& f,
              const PiOperator& pi, const MaterialParams& params) {
  const NodalField3 s_omega = s.support() == Support::OmegaAll ? restrict_to_omega(space.mesh(), s) : s;
  const NodalField3 pim = apply_pi(pi, m);
  return 0.5 * params.C_exch * grad_norm_sq(space, m) - l2_inner(space, f, m) - 0.5 * l2_inner(space, pim, m) -
         params.c * l2_inner(space, s_omega, m);
}

StepIdentity step_identity_check(const FemSpace& space, const NodalField3& m, const NodalField3& m_next,
                                 const NodalField3& v, const NodalField3& f, const NodalField3& pi_m,
                                 const NodalField3& s_omega, const MaterialParams& params, double k) {
  const double t_diss = params.alpha * l2_norm_sq(space, v);
  const double t_exch = params.C_exch / (2.0 * k) * (grad_norm_sq(space, m_next) - grad_norm_sq(space, m));
  const double t_theta = params.C_exch * k * (params.theta - 0.5) * grad_norm_sq(space, v);
  const double r_pi = l2_inner(space, pi_m, v);
  const double r_f = l2_inner(space, f, v);
  const double r_s = params.c * l2_inner(space, s_omega, v);

  StepIdentity out;
  out.lhs = t_diss + t_exch + t_theta;
  out.rhs = r_pi + r_f + r_s;
  out.scale = std::abs(t_diss) + std::abs(t_exch) + std::abs(t_theta) + std::abs(r_pi) + std::abs(r_f) + std::abs(r_s);
  out.residual = out.scale > 0.0 ? std::abs(out.lhs - out.rhs) / out.scale : 0.0;
  return out;
}

double nodewise_modulus_check(const std::vector<NodalField3>& m_traj, const std::vector<NodalField3>& v_traj,
                              double k) {
  if (m_traj.empty()) return 0.0;
  if (m_traj.size() != v_traj.size() + 1) throw std::invalid_argument("trajectory needs N+1 m and N v snapshots");
  const Index n = m_traj.front().size();
  std::vector<double> acc(n, 0.0);
  double worst = 0.0;
  for (Index z = 0; z < n; ++z) worst = std::max(worst, std::abs(m_traj[0][z].squaredNorm() - 1.0));
  for (std::size_t i = 0; i < v_traj.size(); ++i) {
    for (Index z = 0; z < n; ++z) {
      acc[z] += v_traj[i][z].squaredNorm();
      const double expected = 1.0 + k * k * acc[z];
      worst = std::max(worst, std::abs(m_traj[i + 1][z].squaredNorm() - expected));
    }
  }
  return worst;
}

double EnergyLedger::max_stability1() const {
  double r = 0.0;
  for (const auto& row : rows) r = std::max(r, row.stability1());
  return r;
}

double EnergyLedger::max_stability2() const {
  double r = 0.0;
  for (const auto& row : rows) r = std::max(r, row.stability2());
  return r;
}

void EnergyLedger::write_csv(std::ostream& os) const {
  os << "step,t,E,dissipation,theta_term,f_work,s_work,pi_mismatch,s_L2,s_H1_cumsum,m_grad_L2\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.step << ',' << r.t << ',' << r.E << ',' << r.dissipation << ',' << r.theta_term << ',' << r.f_work << ','
       << r.s_work << ',' << r.pi_mismatch << ',' << r.s_L2 << ',' << r.s_H1_cumsum << ',' << r.m_grad_L2 << '\n';
  }
}

LedgerRow initial_ledger_row(const FemSpace& space, const NodalField3& m, const NodalField3& s, const NodalField3& f,
                             const PiOperator& pi, const MaterialParams& params) {
  LedgerRow row;
  row.E = energy(space, m, s, f, pi, params);
  row.s_L2 = l2_norm_sq(space, s);
  row.m_grad_L2 = grad_norm_sq(space, m);
  return row;
}

LedgerRow next_ledger_row(const FemSpace& space, const LedgerRow& prev, const StepData& d, const PiOperator& pi,
                          const MaterialParams& params, double k) {
  const TetMesh& mesh = space.mesh();
  LedgerRow row;
  row.step = prev.step + 1;
  row.t = row.step * k;
  row.E = energy(space, *d.m_next, *d.s_next, *d.f_next, pi, params);

  const double v2 = l2_norm_sq(space, *d.v);
  const double gv2 = grad_norm_sq(space, *d.v);
  row.dissipation = params.alpha * k * v2;
  row.theta_term = params.C_exch * k * k * (params.theta - 0.5) * gv2;

  NodalField3 df(Support::OmegaMagnetic, d.f_next->data() - d.f->data());
  row.f_work = l2_inner(space, df, *d.m_next);
  NodalField3 ds(Support::OmegaAll, d.s_next->data() - d.s->data());
  row.s_work = params.c * l2_inner(space, restrict_to_omega(mesh, ds), *d.m_next);
  row.pi_mismatch = 0.0;
  row.pi_remainder = -0.5 * k * k * l2_inner(space, apply_pi(pi, *d.v), *d.v);

  row.s_L2 = l2_norm_sq(space, *d.s_next);
  row.s_H1_cumsum = prev.s_H1_cumsum + k * h1_norm_sq(space, *d.s_next);
  row.s_jump_cumsum = prev.s_jump_cumsum + l2_norm_sq(space, ds);
  row.m_grad_L2 = grad_norm_sq(space, *d.m_next);
  row.v_cumsum = prev.v_cumsum + k * v2;
  row.grad_v_cumsum = prev.grad_v_cumsum + (params.theta - 0.5) * k * k * gv2;
  return row;
}

EnergyMonitor energy_estimate_monitor(const EnergyLedger& ledger, double E0, const PiOperator& pi, double k) {
  EnergyMonitor out;
  double work = 0.0, remainder = 0.0, scale = std::max(1.0, std::abs(E0));
  for (std::size_t j = 1; j < ledger.rows.size(); ++j) {
    const LedgerRow& r = ledger.rows[j];
    work += r.dissipation + r.f_work + r.s_work + r.theta_term + r.pi_mismatch;
    remainder += r.pi_remainder;
    scale = std::max({scale, std::abs(r.E), std::abs(work)});
    const double tel = r.E + work - E0;
    out.max_excess = std::max(out.max_excess, tel);
    out.max_abs_telescope = std::max(out.max_abs_telescope, std::abs(tel));
    out.corrected_residual = std::max(out.corrected_residual, std::abs(tel - remainder));
  }
  out.corrected_residual /= scale;
  if (!ledger.rows.empty()) out.slack_bound = pi.bound() * k * ledger.rows.back().v_cumsum;
  return out;
}

double coercivity_probe(const FemSpace& space, const NodalField3& m_proj, const MaterialParams& params, int samples,
                        std::uint64_t seed) {
  SpinFormTerms terms;
  terms.time = false;
  const SparseMatrix A = assemble_spin_form(space, m_proj, params, 1.0, terms);
  const SparseMatrix& M = space.mass(Support::OmegaAll);
  const SparseMatrix& K = space.stiffness(Support::OmegaAll);
  const SparseMatrix G = M + K;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    NodalField3 z(Support::OmegaAll, space.size(Support::OmegaAll));
    for (Eigen::Index i = 0; i < z.data().size(); ++i) z.data()[i] = normal(rng);
    const double num = z.data().dot(A * z.data());
    const double den = component_form(G, z, z);
    worst = std::min(worst, num / den);
  }
  return worst;
}

double projection_bound_probe(const FemSpace& space, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> modulus(1.0, 2.0);
  const Index n = space.size(Support::OmegaMagnetic);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    NodalField3 phi(Support::OmegaMagnetic, n);
    for (Index z = 0; z < n; ++z) {
      Vec3 d(normal(rng), normal(rng), normal(rng));
      while (d.squaredNorm() < 1e-20) d = Vec3(normal(rng), normal(rng), normal(rng));
      phi.set(z, modulus(rng) * d.normalized());
    }
    const double g = grad_norm_sq(space, phi);
    if (g == 0.0) continue;
    worst = std::max(worst, std::sqrt(grad_norm_sq(space, nodal_projection(phi)) / g));
  }
  return worst;
}

std::vector<NodalField3> random_unit_fields(Index n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<NodalField3> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    NodalField3 w(Support::OmegaMagnetic, n);
    for (Index z = 0; z < n; ++z) {
      Vec3 d(normal(rng), normal(rng), normal(rng));
      while (d.squaredNorm() < 1e-20) d = Vec3(normal(rng), normal(rng), normal(rng));
      w.set(z, d.normalized());
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace sdllg
