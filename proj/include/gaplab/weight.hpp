#pragma once

#include "gaplab/common.hpp"

namespace gaplab {

struct QuadratureSpec {
  double t_max = 0.0;  // 0 means: use the default 200 / g^{1/0.9}
  int panels = 64;     // composite Gauss-Legendre panels on [-t_max, t_max]
  int nodes = 64;      // nodes per panel
  std::string rule = "gauss-legendre-composite";
};

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// The gap-g weight function w_g(t) = c_g prod_{n<=N} (sin(a_n t)/(a_n t))^2
/// with a_n = a_1 / (n log^2 n) and sum over the full series a_n = g/2.
/// Immutable after construction.
class WeightFunction {
 public:
  static WeightFunction build(double g, int n_factors = 4096, QuadratureSpec quad = {});

  double g() const { return g_; }
  int n_factors() const { return static_cast<int>(a_.size()); }
  const std::vector<double>& a_seq() const { return a_; }
  double c_norm() const { return c_; }
  const QuadratureSpec& quadrature() const { return quad_; }

  /// Pointwise values.
  double eval_w(double t) const;
  /// W(t) = -int_{-inf}^t w + 1_{t >= 0}; cumulative quadrature.
  double eval_W(double t) const;

  /// E(omega) = int w(t) cos(omega t) dt = sqrt(2 pi) * what(omega); even.
  double fourier_E(double omega) const;
  /// Fourier transform with the (2 pi)^{-1/2} e^{-i omega t} convention.
  double eval_what(double omega) const;
  /// Inverse-Liouvillian kernel K(omega) = i R(omega); R real odd,
  /// R(omega) = (1 - E(omega)) / omega with the exact omega -> 0 limit.
  double kernel_R(double omega) const;

  /// int w dt under the stored quadrature (1 by construction), recomputed
  /// with an independent finer grid for verification.
  double integral_check(int refine = 2) const;

  /// Smallest C with |w(t)| <= C exp(-|t|^q) on the quadrature grid.
  double envelope_constant(double q = 0.9) const;

  double second_moment() const { return m2_; }
  double support_edge() const;  // 2 sum a_n of the truncated product

  /// Stored quadrature grid (nodes, weights, w values).
  const std::vector<double>& grid_t() const { return ts_; }
  const std::vector<double>& grid_weight() const { return wq_; }
  const std::vector<double>& grid_w() const { return wv_; }

 private:
  WeightFunction() = default;
  double g_ = 0.0;
  std::vector<double> a_;
  double c_ = 0.0;
  double m2_ = 0.0;
  QuadratureSpec quad_;
  std::vector<double> ts_, wq_, wv_;  // nodes, quadrature weights, w values
  double tail_sum_a_ = 0.0;           // sum of a_n beyond the truncation
};

/// Triangle-convolution evaluation of what on a grid. Authoritative for
/// support statements: the convolution of the widest factors is carried out
/// numerically (all-positive arithmetic) and the remaining factors enter
/// through exact support bookkeeping, since convolving with a positive
/// unit-mass kernel of half-width h extends the open positivity interval by h
/// and the support by the same amount.
class WhatConvolution {
 public:
  WhatConvolution(const WeightFunction& wf, int max_grid_factors = 64, int grid_points = 8193);

  double eval(double omega) const;      // grid interpolation, normalized at 0
  double support_edge() const { return support_edge_; }
  double positive_radius() const { return positive_radius_; }
  /// True when positivity of what on (-r, r) is certified.
  bool positive_on(double r) const { return r <= positive_radius_; }

  const std::vector<double>& grid() const { return omegas_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> omegas_, values_;
  double support_edge_ = 0.0;
  double positive_radius_ = 0.0;
};

}  // namespace gaplab
