#pragma once

#include "gaplab/interactions.hpp"

namespace gaplab {

/// Classical Ising model sum_x sigma3_x + (1/2) sum_{x,y} lambda(x-y)
/// sigma3_x sigma3_y on an arbitrary graph: lambda is given by graph
/// distance, pair terms are stored once with coefficient lambda(d)/2 so that
/// the flip-energy bound gap >= 2 - ||lambda||_1 is exact.
struct IsingModel {
  Interaction phi;
  Vector ground_vec;   // all-spins-down product state
  double lambda_l1 = 0.0;
};

/// lambda_by_distance[d-1] is the coupling at graph distance d; the L1 norm
/// counts both signs of each difference, ||lambda||_1 = 2 sum_d |lambda(d)|.
/// Couplings with ||lambda||_1 >= 2 are rejected unless `allow_strong`.
IsingModel ising_model(const Lattice& lat, const std::vector<double>& lambda_by_distance,
                       bool allow_strong = false);

/// Heisenberg XXZ chain: sum sigma3_x + sum_edges (l1 s1s1 + l1 s2s2 + l3 s3s3).
Interaction xxz_model(const Lattice& lat, double lambda1, double lambda3);

enum class PerturbationKind { RandomTwoSite, RandomSingleSite, FieldReversal };
enum class LocalizationMode { Strict, Strong };

/// Random-or-named Hermitian terms with supports inside omega (strict) or
/// meeting omega (strong); reproducible through the seed.
Interaction localized_perturbation(const Lattice& lat, const SiteSet& omega,
                                   PerturbationKind kind, double strength, LocalizationMode mode,
                                   std::uint64_t seed);

struct FrustrationFreeReport {
  bool nonneg = true;
  double min_term_eigenvalue = 0.0;
  bool kernel_vector_found = false;
  double kernel_residual = 0.0;           // max ||Phi(Z) psi|| over terms
  std::vector<Vector> site_vectors;       // the product kernel candidate
  struct BallRow {
    int center;
    int radius;
    double gamma;       // restriction gap
    double inv_gamma;
  };
  std::vector<BallRow> restriction_rows;
  double fitted_c_gamma = 0.0;
  double fitted_d_gamma = 0.0;
};

/// Frustration-free checks (per-term positivity, common product kernel via
/// site sweeps, restriction-gap polynomial bound on balls).
FrustrationFreeReport frustration_free_checks(const Interaction& phi, const Lattice& lat,
                                              int sweeps = 3);

}  // namespace gaplab
