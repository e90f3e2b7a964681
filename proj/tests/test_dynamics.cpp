#include <doctest.h>

#include "gaplab/dynamics.hpp"
#include "gaplab/models.hpp"

using namespace gaplab;

TEST_CASE("switching function values and derivatives") {
  SwitchingFunction f;
  CHECK(f.value(-1.0) == 0.0);
  CHECK(f.value(-2.5) == 0.0);
  CHECK(f.value(0.0) == 1.0);
  CHECK(f.value(5.0) == 1.0);
  CHECK(f.value(-0.5) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f.derivative(-1.5, 1) == 0.0);
  CHECK(f.derivative(0.5, 1) == 0.0);
  CHECK(f.derivative(-0.5, 1) > 0.0);

  // range and monotonicity
  double prev = 0.0;
  for (double t = -1.0; t <= 0.0; t += 0.01) {
    double v = f.value(t);
    CHECK(v >= prev - 1e-14);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }

  // closed-form derivatives match central differences
  for (int order = 1; order <= 3; ++order) {
    for (double t : {-0.8, -0.5, -0.2}) {
      double h = 1e-5;
      double fd = (f.derivative(t + h, order - 1) - f.derivative(t - h, order - 1)) / (2 * h);
      CHECK(f.derivative(t, order) == doctest::Approx(fd).epsilon(1e-5));
    }
  }
  CHECK_THROWS(f.derivative(0.0, 100));
}

TEST_CASE("expm_action matches dense exponential") {
  Rng rng(3);
  Matrix h = random_hermitian(30, rng);
  Vector psi(30);
  for (int i = 0; i < 30; ++i) psi(i) = rng.cnormal();
  for (double theta : {0.05, 0.4, 1.2}) {
    SpectralData spec = SpectralData::diagonalize(h);
    Vector phase(30);
    for (int i = 0; i < 30; ++i) phase(i) = std::exp(Complex(0, -theta * spec.evals(i)));
    Vector exact = spec.evecs * phase.asDiagonal() * (spec.evecs.adjoint() * psi);
    Vector krylov = expm_action(h, psi, theta);
    CHECK((exact - krylov).norm() < 1e-11 * psi.norm());
  }
}

TEST_CASE("heisenberg evolution basics") {
  Rng rng(5);
  Matrix h = random_hermitian(8, rng);
  SpectralData spec = SpectralData::diagonalize(h);
  Matrix a = random_hermitian(8, rng);
  CHECK((heisenberg_evolve(spec, a, 0.0) - a).norm() < 1e-12);
  CHECK(operator_norm(heisenberg_evolve(spec, a, 1.7)) ==
        doctest::Approx(operator_norm(a)).epsilon(1e-10));
  Matrix commuting = h * h + 2.0 * h;
  CHECK((heisenberg_evolve(spec, commuting, 2.3) - commuting).norm() < 1e-10);
}

TEST_CASE("adiabatic solver: equilibrium stays put, spectrum preserved") {
  Lattice lat = build_chain(3);
  IsingModel model = ising_model(lat, {0.2});
  Matrix h0 = assemble(model.phi, lat);
  SpectralData spec = SpectralData::diagonalize(h0);
  GlobalState rho0 = pure_state(spec.evecs.col(0));
  Matrix v = embed(lat, pauli(lat, 1, 1));
  SwitchingFunction f;

  Trajectory eps0 = adiabatic_solve(h0, v, f, 0.0, 0.5, rho0, -1.0, 1.0, {0.0, 1.0});
  for (const auto& st : eps0.states) CHECK((st.rho - rho0.rho).norm() < 1e-9);

  Trajectory traj = adiabatic_solve(h0, v, f, 0.2, 0.5, rho0, -1.0, 0.5, {-0.5, 0.0, 0.5});
  for (const auto& st : traj.states) {
    CHECK(st.trace_defect() < 1e-8);
    // pure state stays pure under unitary stepping
    CHECK(std::abs(std::real((st.rho * st.rho).trace()) - 1.0) < 1e-8);
  }

  CHECK_THROWS(adiabatic_solve(h0, v, f, 0.1, 0.5, rho0, 0.0, 1.0, {}));  // t_start > -1
  CHECK_THROWS(adiabatic_solve(h0, v, f, 0.1, 2.0, rho0, -1.0, 1.0, {}));  // eta > 1
  GlobalState bad = pure_state(Vector::Ones(8));
  CHECK_THROWS(adiabatic_solve(h0, v, f, 0.1, 0.5, bad, -1.0, 1.0, {}));  // [H0, rho0] != 0
}

TEST_CASE("adiabatic solver matches exact propagation once the switching is flat") {
  Lattice lat = build_chain(2);
  IsingModel model = ising_model(lat, {0.3});
  Matrix h0 = assemble(model.phi, lat);
  SpectralData spec0 = SpectralData::diagonalize(h0);
  GlobalState rho0 = pure_state(spec0.evecs.col(0));
  Matrix v = embed(lat, pauli(lat, 0, 1)) + embed(lat, pauli(lat, 1, 1));
  SwitchingFunction f;
  double eps = 0.3, eta = 0.5;

  Trajectory traj = adiabatic_solve(h0, v, f, eps, eta, rho0, -1.0, 2.0, {0.0, 2.0}, 1e-10);
  REQUIRE(traj.states.size() == 2);
  // between t = 0 and t = 2 the Hamiltonian is constant: exact comparison
  Matrix heps = h0 + eps * v;
  SpectralData spec = SpectralData::diagonalize(heps);
  Matrix b = embed(lat, pauli(lat, 1, 1));
  Complex expect_exact =
      expectation(traj.states[0], heisenberg_evolve(spec, b, 2.0 / eta));
  Complex expect_solver = expectation(traj.states[1], b);
  CHECK(std::abs(expect_exact - expect_solver) < 1e-8);
}

TEST_CASE("single-spin adiabatic response matches the perturbed ground state") {
  Matrix h0 = pauli_matrix(3);
  Matrix v = pauli_matrix(1);
  GlobalState rho0 = pure_state(Vector{{Complex(0, 0), Complex(1, 0)}});
  SwitchingFunction f;
  double eps = 1e-2, eta = 1e-1;
  Trajectory traj = adiabatic_solve(h0, v, f, eps, eta, rho0, -1.0, 0.0, {0.0});
  double measured = std::real(expectation(traj.states[0], pauli_matrix(1)));
  double oracle = -eps / std::sqrt(1.0 + eps * eps);  // exact 2x2 ground state
  CHECK(std::abs(measured - oracle) < 5e-4);
  CHECK(measured == doctest::Approx(-eps).epsilon(0.05));
}

TEST_CASE("solver self-consistency under tolerance halving") {
  Matrix h0 = pauli_matrix(3);
  Matrix v = pauli_matrix(1);
  GlobalState rho0 = pure_state(Vector{{Complex(0, 0), Complex(1, 0)}});
  SwitchingFunction f;
  Trajectory t1 = adiabatic_solve(h0, v, f, 0.05, 0.3, rho0, -1.0, 0.0, {0.0}, 1e-8);
  Trajectory t2 = adiabatic_solve(h0, v, f, 0.05, 0.3, rho0, -1.0, 0.0, {0.0}, 5e-9);
  double d = std::abs(expectation(t1.states[0], pauli_matrix(1)) -
                      expectation(t2.states[0], pauli_matrix(1)));
  CHECK(d < 1e-8);
}

TEST_CASE("lieb-robinson profile: locality at t = 0 and free control") {
  Lattice lat = build_chain(6);
  DecayProfile decay{1.0, 1.0};

  // non-interacting control: no propagation at all
  IsingModel free = ising_model(lat, {});
  LocalOperator a = pauli(lat, 0, 1);
  LrProfile ctrl = lr_profile(lat, free.phi, a, {2, 3, 4, 5}, {0.0, 1.0, 2.0, 3.0}, decay);
  for (const auto& r : ctrl.rows) CHECK(r.comm_norm < 1e-12);
  CHECK(ctrl.fitted_velocity == 0.0);
  CHECK(ctrl.dominated);

  // interacting chain: equal-time commutators with disjoint supports vanish,
  // the fitted envelope dominates everything else
  Interaction phi = xxz_model(lat, 0.15, -0.1);
  LrProfile prof = lr_profile(lat, phi, a, {1, 2, 3, 4, 5}, {0.0, 0.75, 1.5, 2.25, 3.0}, decay);
  for (const auto& r : prof.rows)
    if (r.time == 0.0) CHECK(r.comm_norm < 1e-12);
  CHECK(prof.dominated);
  CHECK(prof.fitted_velocity > 0.0);
}
