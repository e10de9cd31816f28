#include "elandau/kinetic_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace elandau {

static_assert(std::endian::native == std::endian::little, "snapshot writer assumes a little-endian host");

std::string mode_label(int k) { return k < 0 ? "m" + std::to_string(-k) : std::to_string(k); }

void write_timeseries_csv(const std::filesystem::path& path, const SimResult& result, int k_max) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << "tau,t";
  for (int k = -k_max; k <= k_max; ++k) os << ",re_rho_" << mode_label(k) << ",im_rho_" << mode_label(k);
  os << ",abs_rho1,z,F_tilde,G_tilde,diag_bootstrap,diag_embedding,phys_density_norm,h00,reality_defect,"
        "top_mode_amplitude\n";
  for (const auto& r : result.rows) {
    os << format_g17(r.tau) << ',' << format_g17(r.t);
    for (const auto& v : r.rho) os << ',' << format_g17(v.real()) << ',' << format_g17(v.imag());
    for (double v : {r.abs_rho1, r.z, r.F, r.G, r.diag_bootstrap, r.diag_embedding, r.phys_density_norm, r.h00,
                     r.reality_defect, r.top_mode_amplitude}) {
      os << ',' << format_g17(v);
    }
    os << '\n';
  }
}

namespace {

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshots.bin: truncated file");
  return v;
}

}  // namespace

void write_snapshots_bin(const std::filesystem::path& path, const std::vector<SpectralState>& snapshots) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write("ELSN", 4);
  const std::uint32_t n_modes = snapshots.empty() ? 0 : static_cast<std::uint32_t>(snapshots[0].n_modes());
  const std::uint32_t n_points = snapshots.empty() ? 0 : static_cast<std::uint32_t>(snapshots[0].grid().size());
  put<std::uint32_t>(os, 1);
  put(os, n_modes);
  put(os, n_points);
  put(os, static_cast<std::uint32_t>(snapshots.size()));
  put(os, snapshots.empty() ? 0.0 : snapshots[0].grid().half_width());
  for (const auto& s : snapshots) {
    put(os, s.tau);
    for (const auto& v : s.data()) {
      put(os, static_cast<float>(v.real()));
      put(os, static_cast<float>(v.imag()));
    }
  }
}

SnapshotFile read_snapshots_bin(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ELSN", 4) != 0) throw std::runtime_error("snapshots.bin: bad magic");
  if (get<std::uint32_t>(is) != 1) throw std::runtime_error("snapshots.bin: unsupported version");
  SnapshotFile f;
  f.n_modes = get<std::uint32_t>(is);
  f.n_points = get<std::uint32_t>(is);
  const auto n = get<std::uint32_t>(is);
  f.xi_max = get<double>(is);
  for (std::uint32_t s = 0; s < n; ++s) {
    f.tau.push_back(get<double>(is));
    std::vector<std::complex<float>> row(static_cast<std::size_t>(f.n_modes) * f.n_points);
    for (auto& v : row) {
      const float re = get<float>(is);
      const float im = get<float>(is);
      v = {re, im};
    }
    f.data.push_back(std::move(row));
  }
  return f;
}

}  // namespace elandau
