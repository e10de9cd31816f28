#pragma once

// Liouville–Green approximation of w'' + a w = 0 with the total-variation
// error budget, a reference integrator for u'' + a u = q, and the
// variation-of-parameters solution built from a fundamental pair.

#include "elandau/cosmology.hpp"
#include "elandau/numerics.hpp"

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace elandau {

using RealFn = std::function<double(double)>;

class LGBasis {
 public:
  /// a must be positive on [lo, hi]. Without inv_quarter_root_dd the second
  /// derivative of a^{-1/4} is taken by centered differences with step
  /// 1e-4·max(1, |x|) (one-sided within a step of lo); without a_prime, a'
  /// is differenced the same way.
  LGBasis(RealFn a, double lo, double hi, std::optional<RealFn> inv_quarter_root_dd = std::nullopt,
          std::optional<RealFn> a_prime = std::nullopt);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool contains(double x) const { return x >= lo_ && x <= hi_; }

  double a(double x) const { return a_(x); }
  double a_prime(double x) const;
  /// (a^{-1/4})''
  double inv_quarter_root_dd(double x) const;
  /// xi_a(x) = ∫_lo^x a^{1/2}
  double phase(double x) const;
  /// Phase on ascending nodes in [lo, hi], integrated piece by piece.
  std::vector<double> phase_on(std::span<const double> nodes) const;
  /// a^{-1/4} |(a^{-1/4})''|
  double variation_density(double x) const;

 private:
  double require(double x, const char* what) const;
  RealFn a_;
  double lo_;
  double hi_;
  std::optional<RealFn> dd_;
  std::optional<RealFn> da_;
};

/// a = scale · (a∘T) on [lo, hi] with the closed-form derivatives.
LGBasis lg_basis_for_model(const ScaleFactorModel& model, double scale, double lo, double hi);

/// (a^{-1/4} sin xi_a, a^{-1/4} cos xi_a)
std::pair<double, double> lg_fundamental(const LGBasis& basis, double x);

struct LGBudget {
  double variation = 0.0;  // ∫_lo^x a^{-1/4} |(a^{-1/4})''|
  double bound = 0.0;      // exp(variation) - 1
};

LGBudget lg_error_budget(const LGBasis& basis, double x);
/// Budget at every node, accumulated interval by interval.
std::vector<LGBudget> lg_error_budget_on(const LGBasis& basis, std::span<const double> nodes);

enum class IvpMethod { AdaptiveDopri5, FixedRK4 };

struct IvpOptions {
  IvpMethod method = IvpMethod::AdaptiveDopri5;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  /// Step for FixedRK4 (each node interval is split into equal sub-steps no
  /// longer than this).
  double fixed_step = 1e-3;
};

/// u'' + a u = q on ascending nodes starting at x0 = nodes[0] with (u, u')(x0) = v0.
std::vector<OdeSample> reference_ivp(const LGBasis& basis, const RealFn& q_source, OdeSample v0,
                                     std::span<const double> nodes, const IvpOptions& opts = {});

/// Reference solutions with the data of the leading-order LG pair at lo:
/// w1 = (0, a^{1/4}), w2 = (a^{-1/4}, -¼ a' a^{-5/4}); their Wronskian is -1.
std::pair<std::vector<OdeSample>, std::vector<OdeSample>> reference_fundamental_pair(
    const LGBasis& basis, std::span<const double> nodes, const IvpOptions& opts = {});

/// max |w1 w2' - w2 w1' + 1| over sampled pairs.
double wronskian_defect(std::span<const OdeSample> w1, std::span<const OdeSample> w2);
/// Same for callables; derivatives by centered differences at step h.
double wronskian_defect(const RealFn& w1, const RealFn& w2, std::span<const double> nodes,
                        double h = 1e-5);

/// u(x) = -w2(x) ∫_lo^x w1 q + w1(x) ∫_lo^x w2 q (W ≡ -1, zero data), by the
/// cumulative trapezoid rule on the nodes.
std::vector<double> inhomogeneous_vp(std::span<const double> w1, std::span<const double> w2,
                                     const RealFn& q_source, std::span<const double> nodes);

}  // namespace elandau
