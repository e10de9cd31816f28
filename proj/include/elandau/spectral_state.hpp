#pragma once

// h_hat(k, xi) on the mode set {-K..K} (one spatial dimension) times a
// symmetric xi grid, at one renormalized time.

#include "elandau/numerics.hpp"

#include <complex>
#include <span>
#include <vector>

namespace elandau {

class SpectralState {
 public:
  using cplx = std::complex<double>;

  SpectralState() = default;
  SpectralState(int k_max, SymmetricGrid grid)
      : k_max_(k_max), grid_(grid), data_(static_cast<std::size_t>(2 * k_max + 1) * grid.size()) {}

  int k_max() const { return k_max_; }
  std::size_t n_modes() const { return static_cast<std::size_t>(2 * k_max_ + 1); }
  const SymmetricGrid& grid() const { return grid_; }
  int dim() const { return 1; }

  double tau = 0.0;

  std::span<cplx> row(int k) { return {data_.data() + offset(k), grid_.size()}; }
  std::span<const cplx> row(int k) const { return {data_.data() + offset(k), grid_.size()}; }
  cplx& at(int k, std::size_t i) { return data_[offset(k) + i]; }
  const cplx& at(int k, std::size_t i) const { return data_[offset(k) + i]; }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

 private:
  std::size_t offset(int k) const { return static_cast<std::size_t>(k + k_max_) * grid_.size(); }
  int k_max_ = 0;
  SymmetricGrid grid_;
  std::vector<cplx> data_;
};

}  // namespace elandau
