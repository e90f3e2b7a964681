#include <doctest.h>

#include "gaplab/models.hpp"
#include "gaplab/liouvillian.hpp"

using namespace gaplab;

TEST_CASE("decoupled Ising chain") {
  Lattice lat = build_chain(2);
  IsingModel model = ising_model(lat, {});
  Matrix h = assemble(model.phi, lat);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-2.0));
  CHECK(es.eigenvalues()(1) - es.eigenvalues()(0) == doctest::Approx(2.0));
  // ground-state metadata overlap with the exact ground vector
  Vector gs = es.eigenvectors().col(0);
  CHECK(std::norm(gs.dot(model.ground_vec)) > 1.0 - 1e-10);
}

TEST_CASE("Ising gap bound 2 - ||lambda||_1") {
  Lattice lat = build_chain(8);
  IsingModel model = ising_model(lat, {0.25});  // ||lambda||_1 = 0.5
  CHECK(model.lambda_l1 == doctest::Approx(0.5));
  Matrix h = assemble(model.phi, lat);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
  CHECK(gap >= 1.5 - 1e-12);

  // the ground state factorizes across any bipartition (product state):
  // Schmidt rank one across the 4|4 cut
  Eigen::SelfAdjointEigenSolver<Matrix> esf(h);
  Vector gs = esf.eigenvectors().col(0);
  Eigen::Map<Matrix> reshaped(gs.data(), 16, 16);
  Eigen::JacobiSVD<Matrix> svd(reshaped);
  CHECK(svd.singularValues()(0) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS(ising_model(lat, {1.1}));             // ||lambda||_1 >= 2
  CHECK_NOTHROW(ising_model(lat, {1.1}, true));      // explicit override
}

TEST_CASE("XXZ model") {
  Lattice lat = build_chain(8);
  Interaction para = xxz_model(lat, 0.0, 0.0);
  Matrix h0 = assemble(para, lat);
  Eigen::SelfAdjointEigenSolver<Matrix> es0(h0, Eigen::EigenvaluesOnly);
  CHECK(es0.eigenvalues()(1) - es0.eigenvalues()(0) == doctest::Approx(2.0));

  Interaction xxz = xxz_model(lat, 0.1, -0.15);
  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble(xxz, lat), Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues()(1) - es.eigenvalues()(0) > 0.5);

  // lambda1 = 0 reduces to the Ising model with nearest-neighbor 2*lambda3
  Interaction classical = xxz_model(lat, 0.0, 0.2);
  IsingModel ising = ising_model(lat, {0.4});
  CHECK((assemble(classical, lat) - assemble(ising.phi, lat)).norm() < 1e-12);
}

namespace {

Interaction shift_terms_to_nonneg(const Lattice& lat, const Interaction& phi) {
  Interaction out;
  for (const auto& [key, op] : phi.terms()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix, Eigen::EigenvaluesOnly);
    LocalOperator t = op;
    t.matrix -= es.eigenvalues()(0) * Matrix::Identity(t.matrix.rows(), t.matrix.cols());
    out.add_term(lat, t);
  }
  return out;
}

}  // namespace

TEST_CASE("frustration-free checks") {
  Lattice lat = build_chain(6);

  // shifted decoupled Ising is frustration free with the all-down kernel
  Interaction shifted = shift_terms_to_nonneg(lat, ising_model(lat, {}).phi);
  FrustrationFreeReport rep = frustration_free_checks(shifted, lat);
  CHECK(rep.nonneg);
  CHECK(rep.kernel_vector_found);
  CHECK(rep.kernel_residual < 1e-10);

  // a term with a negative eigenvalue breaks positivity
  Interaction bad;
  bad.add_term(lat, pauli(lat, 0, 3));
  FrustrationFreeReport rep_bad = frustration_free_checks(bad, lat);
  CHECK_FALSE(rep_bad.nonneg);

  // shifted XXZ with small anisotropic couplings passes (A1)-(A3)
  Lattice lat8 = build_chain(8);
  Interaction xxz = shift_terms_to_nonneg(lat8, xxz_model(lat8, 0.1, -0.15));
  FrustrationFreeReport rep_xxz = frustration_free_checks(xxz, lat8);
  CHECK(rep_xxz.nonneg);
  CHECK(rep_xxz.kernel_vector_found);
  CHECK(rep_xxz.kernel_residual < 1e-8);
  CHECK_FALSE(rep_xxz.restriction_rows.empty());
  for (const auto& row : rep_xxz.restriction_rows) {
    CHECK(row.gamma > 0.0);
    CHECK(row.inv_gamma <=
          rep_xxz.fitted_c_gamma * std::pow(row.radius, rep_xxz.fitted_d_gamma) * (1 + 1e-9));
  }
}

TEST_CASE("localized perturbations") {
  Lattice lat = build_chain(6);
  SiteSet omega{0, 1, 2};

  CHECK(localized_perturbation(lat, omega, PerturbationKind::RandomTwoSite, 0.0,
                               LocalizationMode::Strict, 1)
            .empty());

  Interaction strict = localized_perturbation(lat, omega, PerturbationKind::RandomTwoSite, 1.5,
                                              LocalizationMode::Strict, 42);
  CHECK(is_strictly_localized(strict, omega));

  Interaction strong = localized_perturbation(lat, omega, PerturbationKind::RandomTwoSite, 1.5,
                                              LocalizationMode::Strong, 42);
  CHECK(is_strongly_localized(strong, omega));
  CHECK_FALSE(is_strictly_localized(strong, omega));

  // reproducible bit for bit under the same seed
  Interaction again = localized_perturbation(lat, omega, PerturbationKind::RandomTwoSite, 1.5,
                                             LocalizationMode::Strict, 42);
  REQUIRE(again.size() == strict.size());
  auto it1 = strict.terms().begin();
  auto it2 = again.terms().begin();
  for (; it1 != strict.terms().end(); ++it1, ++it2) {
    CHECK(it1->first == it2->first);
    CHECK(std::memcmp(it1->second.matrix.data(), it2->second.matrix.data(),
                      sizeof(Complex) * it1->second.matrix.size()) == 0);
  }

  CHECK_THROWS(localized_perturbation(lat, SiteSet{}, PerturbationKind::RandomTwoSite, 1.0,
                                      LocalizationMode::Strict, 1));
}
