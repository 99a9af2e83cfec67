#pragma once

#include "sdllg/diagnostics.hpp"
#include "sdllg/fem.hpp"

#include <string>

namespace sdllg {

/// Legacy VTK 3.0 ASCII unstructured grid with point data m (zero outside
/// omega), s and |m|, and the cell region as cell data.
void write_vtk(const std::string& path, const TetMesh& mesh, const NodalField3& m_omega, const NodalField3& s);

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);

/// Everything needed to resume a run bit-identically.
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  std::int64_t step = 0;
  double k = 0.0;
  double t = 0.0;
  NodalField3 m;                      ///< omega
  NodalField3 s;                      ///< Omega
  std::vector<double> v_sq_sum;       ///< per omega node, sum_l |v^l(z)|^2
  LedgerRow last_row;                 ///< running ledger sums
  double E0 = 0.0;
};

/// Binary layout (all little-endian): 8-byte magic "SDLLGCKP", u32 version,
/// i64 step, f64 k, f64 t, u64 n_omega, u64 n_all, then m (3 n_omega f64),
/// s (3 n_all f64), v_sq_sum (n_omega f64), E0 and the running ledger values.
void write_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace sdllg
