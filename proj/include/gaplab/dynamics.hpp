#pragma once

#include <functional>

#include "gaplab/interactions.hpp"
#include "gaplab/liouvillian.hpp"

namespace gaplab {

/// C-infinity switching function built from the exp(-1/x) mollifier:
/// f(t) = 0 for t <= -1, f(t) = 1 for t >= 0, monotone in between, with
/// closed-form derivatives (no finite differencing).
class SwitchingFunction {
 public:
  explicit SwitchingFunction(int derivative_order_max = 8);

  double value(double t) const { return derivative(t, 0); }
  /// f^(order)(t); order <= derivative_order_max.
  double derivative(double t, int order) const;
  int max_order() const { return max_order_; }

 private:
  int max_order_;
};

/// Unitarily propagated state family: rho(t) = sum_k p_k |psi_k(t)><psi_k(t)|.
struct Trajectory {
  std::vector<double> times;
  std::vector<GlobalState> states;
  double eps = 0.0;
  double eta = 0.0;
  long steps_taken = 0;
};

/// Solves i eta d rho / dt = [H0 + eps f(t) V, rho] with rho(t) = rho0 for
/// t <= -1, by exponential-midpoint unitary stepping with step-doubling
/// control; the state stays an exact unitary conjugation of rho0.
/// `record_times` must be ascending and within [t_start, t_end].
Trajectory adiabatic_solve(const Matrix& h0, const Matrix& v, const SwitchingFunction& f,
                           double eps, double eta, const GlobalState& rho0, double t_start,
                           double t_end, const std::vector<double>& record_times,
                           double tol = 1e-9);

/// exp(-i theta H) psi via a Lanczos Krylov method (H Hermitian).
Vector expm_action(const Matrix& h, const Vector& psi, double theta, int max_krylov = 48);

/// Lieb-Robinson commutator profile: exact ||[tau_t(A), sigma^axis_y]|| for
/// the probe sites and times, plus a fitted envelope
/// C ||A|| ||B|| (e^{b v |t|} - 1) chi_{b,p}(dist(X, y)) that dominates the
/// data (C is scaled up to the worst observed ratio).
struct LrProfile {
  struct Row {
    int site;
    int axis;
    double time;
    int dist;
    double comm_norm;
    double envelope;
  };
  std::vector<Row> rows;
  double fitted_velocity = 0.0;
  double fitted_prefactor = 0.0;
  bool dominated = false;
};

LrProfile lr_profile(const Lattice& lat, const Interaction& phi, const LocalOperator& a,
                     const std::vector<int>& probe_sites, const std::vector<double>& times,
                     const DecayProfile& decay);

}  // namespace gaplab
