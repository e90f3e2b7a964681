#pragma once

#include <map>

#include "gaplab/operators.hpp"

namespace gaplab {

/// Stretched-exponential localization profile chi_{b,p}(x) = exp(-b x^p).
struct DecayProfile {
  double b = 1.0;
  double p = 1.0;
};

/// chi_{b,p}; accepts the integer distance sentinel and maps it to 0.
double chi(const DecayProfile& profile, double x);
double chi_dist(const DecayProfile& profile, int dist);

/// A finite map from site subsets to Hermitian local terms. Terms with norm
/// below `kDropThreshold` are dropped when interactions are derived from
/// others (commutators); the threshold is recorded in result manifests.
inline constexpr double kTermDropThreshold = 1e-14;

class Interaction {
 public:
  Interaction() = default;

  void add_term(const Lattice& lat, const LocalOperator& op);
  /// Accepts non-Hermitian terms; used for derived interactions such as
  /// commutators, whose terms are anti-Hermitian.
  void add_term_raw(LocalOperator op);
  const std::map<std::vector<int>, LocalOperator>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Interaction scaled(double factor) const;
  Interaction plus(const Lattice& lat, const Interaction& other) const;

 private:
  std::map<std::vector<int>, LocalOperator> terms_;
};

/// Sum of embedded terms on the full lattice space.
Matrix assemble(const Interaction& phi, const Lattice& lat);

/// SLT interaction norm: sup_z sum_{Z contains z} ||Phi(Z)|| / chi(diam Z).
double interaction_norm(const Interaction& phi, const Lattice& lat, const DecayProfile& profile);

/// Localized SLT norm with the additional chi(dist(z, omega)) weight.
double localized_norm(const Interaction& phi, const Lattice& lat, const DecayProfile& profile,
                      const SiteSet& omega);

/// Strict: every term support inside omega. Strong: every term support meets
/// omega. Empty interactions satisfy both.
bool is_strictly_localized(const Interaction& phi, const SiteSet& omega);
bool is_strongly_localized(const Interaction& phi, const SiteSet& omega);

/// Interaction realizing [A, B]: terms indexed by unions of overlapping
/// supports, Phi(Z) = sum_{X u Y = Z, X n Y != 0} [Phi_A(X), Phi_B(Y)].
Interaction commutator_interaction(const Lattice& lat, const Interaction& a, const Interaction& b);

}  // namespace gaplab
