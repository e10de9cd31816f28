#pragma once

// On-disk formats of a simulation run.
//
// timeseries.csv: tau, t, re_rho_<k>, im_rho_<k> for k = -K..K (negative k
// spelled m<|k|>), abs_rho1, z, F_tilde, G_tilde, diag_bootstrap,
// diag_embedding, phys_density_norm, h00, reality_defect,
// top_mode_amplitude. "%.17g" throughout, LF line endings.
//
// snapshots.bin, little-endian:
//   char[4] "ELSN", uint32 version (1), uint32 n_modes, uint32 n_points,
//   uint32 n_snapshots, float64 xi_max,
//   then per snapshot: float64 tau, n_modes·n_points complex64 (float32
//   re, float32 im), mode-major from k = -K, xi ascending.

#include "elandau/kinetic.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace elandau {

std::string mode_label(int k);

void write_timeseries_csv(const std::filesystem::path& path, const SimResult& result, int k_max);

void write_snapshots_bin(const std::filesystem::path& path, const std::vector<SpectralState>& snapshots);

struct SnapshotFile {
  std::uint32_t n_modes = 0;
  std::uint32_t n_points = 0;
  double xi_max = 0.0;
  std::vector<double> tau;
  std::vector<std::vector<std::complex<float>>> data;
};

SnapshotFile read_snapshots_bin(const std::filesystem::path& path);

}  // namespace elandau
