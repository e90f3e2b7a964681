#pragma once

#include "gaplab/operators.hpp"
#include "gaplab/weight.hpp"

namespace gaplab {

/// Eigendecomposition of a Hermitian operator, kept immutable.
struct SpectralData {
  RealVector evals;   // ascending
  Matrix evecs;       // columns
  std::uint64_t source_hash = 0;

  int dim() const { return static_cast<int>(evals.size()); }
  double spread() const { return evals(dim() - 1) - evals(0); }

  static SpectralData diagonalize(const Matrix& h);

  /// Largest orthogonality / reconstruction defects, for validity checks.
  double unitarity_defect() const;
  double reconstruction_defect(const Matrix& h) const;
};

/// L_H[A] = -i [H, A].
Matrix liouvillian_apply(const Matrix& h, const Matrix& a);

/// Exact Heisenberg evolution e^{iHt} A e^{-iHt} in the eigenbasis.
Matrix heisenberg_evolve(const SpectralData& spec, const Matrix& a, double t);

/// Quasi-local inverse of the Liouvillian, spectral path: matrix element
/// (n,m) of the rotated operator is multiplied by K(E_n - E_m) = i R(omega).
Matrix inverse_liouvillian(const SpectralData& spec, const WeightFunction& wf, const Matrix& a);

/// J[A] = int w(t) e^{iHt} A e^{-iHt} dt; spectral kernel sqrt(2pi) what.
Matrix j_map(const SpectralData& spec, const WeightFunction& wf, const Matrix& a);

/// Time-domain double quadrature of the inverse Liouvillian; cross-check
/// oracle for the spectral path (small dimensions).
Matrix inverse_liouvillian_timedomain(const SpectralData& spec, const WeightFunction& wf,
                                      const Matrix& a, int inner_nodes = 48);

/// Global sign s in L o I[A] - A = s J[A], fixed once by a two-level
/// calibration. Throws if neither sign matches to 1e-8.
double calibrate_identity_sign(const WeightFunction& wf);

/// (L o I - Id)[A], computed through the spectral kernels with the calibrated
/// sign folded in.
Matrix loi_minus_id(const SpectralData& spec, const WeightFunction& wf, const Matrix& a);

/// Dynamical gap characterization witnesses (Prop-style check).
struct GdgReport {
  bool holds = false;
  double worst_random = 0.0;   // max over random pairs of the normalized witness
  double targeted = 0.0;       // witness of the targeted cross-gap observable
  double cross_gap_distance = 0.0;
  double what_at_distance = 0.0;
};

/// sigma1 passed as eigen-indices; must be a proper nonempty subset.
GdgReport gdg_check(const SpectralData& spec, const std::vector<int>& sigma1,
                    const WeightFunction& wf, int trials, Rng& rng, double tol = 1e-5);

/// Rank decomposition of an equilibrium state in the eigenbasis of H0, used
/// by witness evaluations that only need the action on the state's range.
struct EquilibriumState {
  const SpectralData* spec = nullptr;
  std::vector<double> prob;            // weights > 1e-12
  std::vector<Vector> coeff;           // coefficients in the eigenbasis
  double commutation_defect = 0.0;     // ||[H0, rho0]|| proxy

  static EquilibriumState analyze(const SpectralData& spec, const GlobalState& rho0);
};

/// |tr(rho0 [L o I[A] - A, B])| evaluated through the spectral kernels; A and
/// B must be Hermitian. O(rank * dim^2) per call.
double ldg_witness(const EquilibriumState& eq, const WeightFunction& wf, const Matrix& a,
                   const Matrix& b);

}  // namespace gaplab
