#include "sdllg/output.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace sdllg {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_or_throw(const std::string& path, const char* mode) {
  File f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  return f;
}

constexpr std::array<char, 8> kMagic = {'S', 'D', 'L', 'L', 'G', 'C', 'K', 'P'};

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}
  void u64(std::uint64_t v) {
    std::array<char, 8> b;
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os_.write(b.data(), 8);
  }
  void u32(std::uint32_t v) {
    std::array<char, 4> b;
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os_.write(b.data(), 4);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void vec(const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v[i]);
  }

 private:
  std::ostream& os_;
};

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}
  std::uint64_t u64() {
    std::array<unsigned char, 8> b;
    read(b.data(), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint32_t u32() {
    std::array<unsigned char, 4> b;
    read(b.data(), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  Eigen::VectorXd vec(std::size_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = f64();
    return v;
  }
  void read(unsigned char* p, std::size_t n) {
    is_.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is_) throw std::runtime_error("checkpoint truncated");
  }

 private:
  std::istream& is_;
};

// Ledger values carried across a restart, in a fixed order.
constexpr int kLedgerFields = 9;

std::array<double*, kLedgerFields> ledger_fields(LedgerRow& r) {
  return {&r.t, &r.E, &r.s_L2, &r.s_H1_cumsum, &r.s_jump_cumsum, &r.m_grad_L2, &r.v_cumsum, &r.grad_v_cumsum,
          &r.dissipation};
}

}  // namespace

void write_vtk(const std::string& path, const TetMesh& mesh, const NodalField3& m_omega, const NodalField3& s) {
  File f = open_or_throw(path, "w");
  std::FILE* o = f.get();
  std::fprintf(o, "# vtk DataFile Version 3.0\nsdllg state\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  std::fprintf(o, "POINTS %d double\n", mesh.num_nodes());
  for (const auto& x : mesh.nodes) std::fprintf(o, "%.17g %.17g %.17g\n", x.x(), x.y(), x.z());
  std::fprintf(o, "CELLS %d %d\n", mesh.num_tets(), 5 * mesh.num_tets());
  for (const auto& t : mesh.tets) std::fprintf(o, "4 %d %d %d %d\n", t[0], t[1], t[2], t[3]);
  std::fprintf(o, "CELL_TYPES %d\n", mesh.num_tets());
  for (Index t = 0; t < mesh.num_tets(); ++t) std::fprintf(o, "10\n");
  std::fprintf(o, "CELL_DATA %d\nSCALARS region int 1\nLOOKUP_TABLE default\n", mesh.num_tets());
  for (Index t = 0; t < mesh.num_tets(); ++t) std::fprintf(o, "%d\n", mesh.is_magnetic(t) ? 1 : 0);

  const NodalField3 m = extend_by_zero(mesh, m_omega);
  std::fprintf(o, "POINT_DATA %d\nVECTORS m double\n", mesh.num_nodes());
  for (Index z = 0; z < mesh.num_nodes(); ++z) std::fprintf(o, "%.17g %.17g %.17g\n", m[z].x(), m[z].y(), m[z].z());
  std::fprintf(o, "VECTORS s double\n");
  for (Index z = 0; z < mesh.num_nodes(); ++z) std::fprintf(o, "%.17g %.17g %.17g\n", s[z].x(), s[z].y(), s[z].z());
  std::fprintf(o, "SCALARS m_norm double 1\nLOOKUP_TABLE default\n");
  for (Index z = 0; z < mesh.num_nodes(); ++z) std::fprintf(o, "%.17g\n", m[z].norm());
}

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "'");
  ledger.write_csv(os);
}

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "'");
  Writer w(os);
  os.write(kMagic.data(), kMagic.size());
  w.u32(Checkpoint::kVersion);
  w.u64(static_cast<std::uint64_t>(cp.step));
  w.f64(cp.k);
  w.f64(cp.t);
  w.u64(static_cast<std::uint64_t>(cp.m.size()));
  w.u64(static_cast<std::uint64_t>(cp.s.size()));
  w.vec(cp.m.data());
  w.vec(cp.s.data());
  for (double x : cp.v_sq_sum) w.f64(x);
  w.f64(cp.E0);
  LedgerRow row = cp.last_row;
  for (double* p : ledger_fields(row)) w.f64(*p);
  if (!os) throw std::runtime_error("failed writing checkpoint '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open checkpoint '" + path + "'");
  Reader r(is);
  std::array<unsigned char, 8> magic;
  r.read(magic.data(), magic.size());
  if (std::memcmp(magic.data(), kMagic.data(), kMagic.size()) != 0) throw ConfigError("not a checkpoint: " + path);
  const std::uint32_t version = r.u32();
  if (version != Checkpoint::kVersion) throw ConfigError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint cp;
  cp.step = static_cast<std::int64_t>(r.u64());
  cp.k = r.f64();
  cp.t = r.f64();
  const std::uint64_t nw = r.u64();
  const std::uint64_t na = r.u64();
  cp.m = NodalField3(Support::OmegaMagnetic, r.vec(3 * nw));
  cp.s = NodalField3(Support::OmegaAll, r.vec(3 * na));
  cp.v_sq_sum.resize(nw);
  for (auto& x : cp.v_sq_sum) x = r.f64();
  cp.E0 = r.f64();
  cp.last_row.step = static_cast<int>(cp.step);
  for (double* p : ledger_fields(cp.last_row)) *p = r.f64();
  return cp;
}

}  // namespace sdllg
