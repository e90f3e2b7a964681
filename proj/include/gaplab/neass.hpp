#pragma once

#include "gaplab/dynamics.hpp"

namespace gaplab {

/// Order-n generator sequence A_1..A_n with the assembled generator
/// S = sum_mu eps^mu A_mu and the conjugated state Pi = e^{iS} rho0 e^{-iS}.
struct NeassExpansion {
  int order = 0;
  std::vector<Matrix> generators;  // A_1..A_n, Hermitian
  double eps = 0.0;
  double eta = std::numeric_limits<double>::infinity();  // infinity: static construction
  Matrix s;                                              // sum eps^mu A_mu
  double gap = 0.0;

  void assemble_s();
};

/// All ordered compositions of `total` into parts from [1, max_part].
std::vector<std::vector<int>> compositions(int total, int max_part);

/// eps^j coefficient of e^{-iS_(j-1)} (H0 + eps V) e^{iS_(j-1)} with
/// S_(j-1) = sum_{mu<j} eps^mu A_mu, excluding the yet-unknown A_j slot.
/// Derived by exact nested commutators over integer compositions.
Matrix eps_coefficient(const std::vector<Matrix>& generators, const Matrix& h0, const Matrix& v,
                       int j);

/// Time-dependent variant: V(s) = f(s) V plus the eta/eps-weighted
/// time-derivative terms of the already constructed generators.
Matrix eps_coefficient_td(const std::vector<Matrix>& generators,
                          const std::vector<Matrix>& generator_dots, const Matrix& h0,
                          const Matrix& v_of_t, double eta_over_eps, int j);

/// Static NEASS: A_j = I_{H0,g}[R_j] recursively; the A_j are eps-independent.
NeassExpansion build_static_neass(const Matrix& h0, const Matrix& v, const WeightFunction& wf,
                                  int n, double eps);

/// Time-dependent NEASS at time t for the switching Hamiltonian
/// H0 + eps f(t) V. Time derivatives of the A_mu are taken by
/// Richardson-extrapolated central differences of the whole recursion
/// (step h, two-level extrapolation); a disagreement beyond `fd_tol` between
/// the two levels throws.
NeassExpansion build_time_dependent_neass(const Matrix& h0, const Matrix& v,
                                          const SwitchingFunction& f, const WeightFunction& wf,
                                          int n, double eps, double eta, double t,
                                          double fd_step = 1e-3, double fd_tol = 1e-6);

/// Pi = e^{iS} rho0 e^{-iS}.
GlobalState neass_state(const NeassExpansion& exp, const GlobalState& rho0);

/// Kubo linear coefficient sigma_{B,1} = -i tr(rho0 [I[V], B]).
double kubo_sigma1(const SpectralData& spec_h0, const WeightFunction& wf, const Matrix& v,
                   const GlobalState& rho0, const Matrix& b);

/// eps^j coefficients sigma_{B,1..m} of tr(Pi B), by the same composition
/// machinery applied to B; sigma_{B,0} = <B>_rho0 is not included.
std::vector<double> response_expansion(const NeassExpansion& exp, const GlobalState& rho0,
                                       const Matrix& b, int m);

struct ResponseRow {
  double eps;
  double eta;
  double t;
  double sigma_measured;                // Sigma_B(t)
  std::vector<double> partial_sums;     // sum_{j<=k} eps^j sigma_j, k = 1..n
  double residual;                      // measured - partial_sums[n-1]
};

struct ResponseTable {
  std::vector<ResponseRow> rows;
  std::vector<double> sigma;        // sigma_{B,1..n}
  std::vector<double> slopes;       // log-log residual slope per order 1..n
  double b0 = 0.0;                  // <B>_rho0
};

/// eta rules: "sqrt" (eta = sqrt(eps)), "pow:<x>" (eta = eps^x),
/// "fixed:<v>".
double eta_from_rule(const std::string& rule, double eps);

ResponseTable response_sweep(const Matrix& h0, const Matrix& v, const GlobalState& rho0,
                             const Matrix& b, const WeightFunction& wf, int n,
                             const std::vector<double>& eps_grid, const std::string& eta_rule,
                             double t_eval, const SwitchingFunction& f, double solver_tol = 1e-9,
                             int threads = 1);

struct StationarityRow {
  double eps;
  double max_deviation;
};

struct StationarityTable {
  std::vector<StationarityRow> rows;
  std::vector<std::vector<std::pair<double, double>>> deviation_curves;  // (t, dev) per eps
  double slope = 0.0;
};

/// Evolves Pi_n^eps under the constant H_eps and tabulates
/// |<B>_rho(t) - <B>_Pi| over the time grid, with an eps-slope fit of the
/// max deviation.
StationarityTable neass_stationarity(const Matrix& h0, const Matrix& v, const GlobalState& rho0,
                                     const Matrix& b, const WeightFunction& wf, int n,
                                     const std::vector<double>& eps_grid,
                                     const std::vector<double>& t_grid);

}  // namespace gaplab
