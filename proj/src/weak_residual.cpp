#include "sdllg/weak_residual.hpp"

#include "sdllg/quadrature.hpp"
#include "sdllg/spin_step.hpp"

#include <cmath>

namespace sdllg {

namespace {

// Test functions are written in scaled coordinates u = x / box.
SpaceTimeTest scaled(std::string name, const Vec3& box, std::function<Vec3(const Vec3&, double)> value,
                     std::function<Mat3(const Vec3&, double)> grad) {
  const Vec3 inv = box.cwiseInverse();
  SpaceTimeTest t;
  t.name = std::move(name);
  t.value = [value, inv](const Vec3& x, double tt) { return value(x.cwiseProduct(inv), tt); };
  t.grad = [grad, inv](const Vec3& x, double tt) { return Mat3(grad(x.cwiseProduct(inv), tt) * inv.asDiagonal()); };
  return t;
}

Mat3 rows(const Vec3& r0, const Vec3& r1, const Vec3& r2) {
  Mat3 m;
  m.row(0) = r0;
  m.row(1) = r1;
  m.row(2) = r2;
  return m;
}

constexpr double kGauss = 0.5773502691896257645;  // 1/sqrt(3)

}  // namespace

std::vector<SpaceTimeTest> polynomial_test_family(const Vec3& box) {
  std::vector<SpaceTimeTest> out;
  out.push_back(scaled(
      "const", box, [](const Vec3&, double t) { return Vec3(1.0 + t, 0.5, -0.25); },
      [](const Vec3&, double) { return Mat3(Mat3::Zero()); }));
  out.push_back(scaled(
      "rotate", box, [](const Vec3& u, double) { return Vec3(u.y(), u.z(), u.x()); },
      [](const Vec3&, double) { return rows({0, 1, 0}, {0, 0, 1}, {1, 0, 0}); }));
  out.push_back(scaled(
      "quadratic", box, [](const Vec3& u, double t) { return Vec3(u.x() * u.z(), t, u.y() * u.y()); },
      [](const Vec3& u, double) { return rows({u.z(), 0, u.x()}, {0, 0, 0}, {0, 2 * u.y(), 0}); }));
  out.push_back(scaled(
      "cubic", box,
      [](const Vec3& u, double t) { return Vec3(t * u.x() * u.y(), u.x() - u.z(), u.z() * u.z() * u.y()); },
      [](const Vec3& u, double t) {
        return rows({t * u.y(), t * u.x(), 0}, {1, 0, -1}, {0, u.z() * u.z(), 2 * u.z() * u.y()});
      }));
  out.push_back(scaled(
      "mixed", box, [](const Vec3& u, double t) { return Vec3(u.z(), u.x() * t, 1.0 - u.y() * u.y() * u.x()); },
      [](const Vec3& u, double t) {
        return rows({0, 0, 1}, {t, 0, 0}, {-u.y() * u.y(), -2 * u.x() * u.y(), 0});
      }));
  return out;
}

WeakResidual weak_residual_probe(const FemSpace& space, const Trajectory& traj, const SourceField& f,
                                 const SourceField& j, const PiOperator& pi, const MaterialParams& params,
                                 const std::vector<SpaceTimeTest>& tests) {
  const TetMesh& mesh = space.mesh();
  const std::size_t N = traj.v.size();
  if (traj.m.size() != N + 1 || traj.s.size() != N + 1) throw std::invalid_argument("inconsistent trajectory");
  const double k = traj.k;
  const double T = k * static_cast<double>(N);
  const QuadratureRule rule = tet_rule_grundmann_moeller(2);
  const TriangleRule frule = triangle_rule_grundmann_moeller(2);
  const std::size_t nt = tests.size();

  WeakResidual out;
  out.llg.assign(nt, 0.0);
  out.diffusion.assign(nt, 0.0);

  for (std::size_t i = 0; i < N; ++i) {
    const double t0 = static_cast<double>(i) * k;
    const double t1 = static_cast<double>(i + 1) * k;
    const std::array<double, 2> tq = {0.5 * (t0 + t1) - 0.5 * k * kGauss, 0.5 * (t0 + t1) + 0.5 * k * kGauss};

    const NodalField3& m = traj.m[i];
    const NodalField3& v = traj.v[i];
    const NodalField3 s_om = restrict_to_omega(mesh, traj.s[i]);
    const NodalField3 pim = apply_pi(pi, m);
    const Vec3 fi = f.value(t0);

    const NodalField3& s1 = traj.s[i + 1];
    const NodalField3& s0 = traj.s[i];
    const NodalField3 mp = nodal_projection(traj.m[i + 1]);
    const Vec3 ji = j.value(std::min(t1, T));
    const double bb = params.beta * params.beta_prime;

    for (Index t = 0; t < mesh.num_tets(); ++t) {
      const TetGeometry& g = space.geometry(t);
      const auto& tet = mesh.tets[t];
      const bool magnetic = mesh.is_magnetic(t);
      const double D0 = params.D0(mesh.tet_region[t]);

      std::array<Index, 4> w{};
      Mat3 grad_m = Mat3::Zero(), grad_s = Mat3::Zero();  // (i, l) = d_l field_i
      for (int a = 0; a < 4; ++a) {
        grad_s += s1[tet[a]] * g.grad[a].transpose();
        if (magnetic) {
          w[a] = mesh.omega_index[tet[a]];
          grad_m += m[w[a]] * g.grad[a].transpose();
        }
      }

      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const auto& lam = rule.points[q];
        Vec3 x = Vec3::Zero(), sq1 = Vec3::Zero(), sq0 = Vec3::Zero();
        for (int a = 0; a < 4; ++a) {
          x += lam[a] * mesh.nodes[tet[a]];
          sq1 += lam[a] * s1[tet[a]];
          sq0 += lam[a] * s0[tet[a]];
        }
        const double wq = rule.weights[q] * g.volume;

        // Diffusion: volume terms on Omega, coefficient vectors of zeta and
        // grad zeta (columns l).
        Vec3 dz = (sq1 - sq0) / k + D0 * params.reaction_scale * sq1;
        Mat3 dgz = D0 * grad_s;

        // LLG on omega.
        Vec3 lz = Vec3::Zero();
        Mat3 lgz = Mat3::Zero();
        if (magnetic) {
          Vec3 mq = Vec3::Zero(), vq = Vec3::Zero(), sq = Vec3::Zero(), pq = Vec3::Zero(), mpq = Vec3::Zero();
          for (int a = 0; a < 4; ++a) {
            mq += lam[a] * m[w[a]];
            vq += lam[a] * v[w[a]];
            sq += lam[a] * s_om[w[a]];
            pq += lam[a] * pim[w[a]];
            mpq += lam[a] * mp[w[a]];
          }
          lz = vq + params.alpha * vq.cross(mq) - pq.cross(mq) - fi.cross(mq) - params.c * sq.cross(mq);
          for (int l = 0; l < 3; ++l) lgz.col(l) = params.C_exch * Vec3(grad_m.col(l)).cross(mq);

          dz += D0 * params.precession_scale * sq1.cross(mpq);
          for (int l = 0; l < 3; ++l) {
            dgz.col(l) -= bb * D0 * mpq.dot(grad_s.col(l)) * mpq;
            dgz.col(l) -= params.beta * ji[l] * mpq;
          }
        }

        for (int tg = 0; tg < 2; ++tg) {
          const double wt = 0.5 * k;
          for (std::size_t n = 0; n < nt; ++n) {
            const Vec3 phi = tests[n].value(x, tq[tg]);
            const Mat3 gphi = tests[n].grad(x, tq[tg]);
            out.diffusion[n] += wt * wq * (dz.dot(phi) + (dgz.cwiseProduct(gphi)).sum());
            if (magnetic) out.llg[n] += wt * wq * (lz.dot(phi) + (lgz.cwiseProduct(gphi)).sum());
          }
        }
      }
    }

    // beta (j . n, m . zeta) over the shared boundary
    for (const auto& fc : mesh.boundary_facets) {
      if (fc.tag != FacetTag::Shared) continue;
      const Vec3 nrm = facet_outward_normal(mesh, fc);
      const Vec3& x0 = mesh.nodes[fc.nodes[0]];
      const double area = 0.5 * (mesh.nodes[fc.nodes[1]] - x0).cross(mesh.nodes[fc.nodes[2]] - x0).norm();
      const double jn = ji.dot(nrm);
      for (std::size_t q = 0; q < frule.weights.size(); ++q) {
        Vec3 x = Vec3::Zero(), mq = Vec3::Zero();
        for (int a = 0; a < 3; ++a) {
          x += frule.points[q][a] * mesh.nodes[fc.nodes[a]];
          mq += frule.points[q][a] * mp[mesh.omega_index[fc.nodes[a]]];
        }
        for (int tg = 0; tg < 2; ++tg)
          for (std::size_t n = 0; n < nt; ++n)
            out.diffusion[n] += 0.5 * k * frule.weights[q] * area * params.beta * jn * mq.dot(tests[n].value(x, tq[tg]));
      }
    }
  }

  for (std::size_t n = 0; n < nt; ++n) {
    out.llg_norm += out.llg[n] * out.llg[n];
    out.diffusion_norm += out.diffusion[n] * out.diffusion[n];
  }
  out.llg_norm = std::sqrt(out.llg_norm);
  out.diffusion_norm = std::sqrt(out.diffusion_norm);
  return out;
}

}  // namespace sdllg
