#include <doctest.h>

#include "gaplab/operators.hpp"

using namespace gaplab;

namespace {

Matrix random_op(int dim, Rng& rng) {
  Matrix m(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) m(i, j) = rng.cnormal();
  return m;
}

}  // namespace

TEST_CASE("pauli matrices and algebra") {
  Lattice lat = build_chain(2);
  Matrix s1 = pauli_matrix(1), s2 = pauli_matrix(2), s3 = pauli_matrix(3);
  CHECK(s3(0, 0) == Complex(1, 0));
  CHECK(s3(1, 1) == Complex(-1, 0));
  CHECK((s1 * s1 - Matrix::Identity(2, 2)).norm() == 0.0);
  CHECK((s1 * s2 - s2 * s1 - Complex(0, 2) * s3).norm() == 0.0);
  CHECK((s3 * s1 - s1 * s3 - Complex(0, 2) * s2).norm() == 0.0);

  Lattice qutrit = build_chain(2, 3);
  CHECK_THROWS(pauli(qutrit, 0, 1));
  CHECK_THROWS(pauli_matrix(4));
}

TEST_CASE("embedding is a unital isometric homomorphism") {
  Lattice lat = build_chain(3);
  SiteSet x{0, 2};
  CHECK((embed(lat, identity_op(lat, x)) - Matrix::Identity(8, 8)).norm() == 0.0);

  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_op(4, rng), b = random_op(4, rng);
    LocalOperator la{x, a, false}, lb{x, b, false};
    Matrix ea = embed(lat, la), eb = embed(lat, lb);
    CHECK((ea * eb - embed(lat, LocalOperator{x, a * b, false})).norm() < 1e-12 * a.norm() * b.norm());
    CHECK(operator_norm(ea) == doctest::Approx(operator_norm(a)).epsilon(1e-11));
  }

  // single on-site sigma3 sum on a 2-chain assembles to diag(2,0,0,-2)
  Matrix h = embed(lat, pauli(lat, 0, 3));
  CHECK(h(0, 0) == Complex(1, 0));
  CHECK(h(4, 4) == Complex(-1, 0));
}

TEST_CASE("local commutators match the full-space oracle") {
  Lattice lat = build_chain(4);
  Rng rng(11);
  // disjoint supports commute
  LocalOperator a{SiteSet{0}, random_op(2, rng), false};
  LocalOperator b{SiteSet{2, 3}, random_op(4, rng), false};
  CHECK(local_commutator(lat, a, b).matrix.norm() < 1e-14);

  // [sigma3_x, sigma1_x] = 2i sigma2_x
  LocalOperator c = local_commutator(lat, pauli(lat, 1, 3), pauli(lat, 1, 1));
  CHECK((c.matrix - Complex(0, 2) * pauli_matrix(2)).norm() < 1e-14);

  for (int trial = 0; trial < 8; ++trial) {
    LocalOperator p{SiteSet{0, 1}, random_op(4, rng), false};
    LocalOperator q{SiteSet{1, 2, 3}, random_op(8, rng), false};
    LocalOperator nested = local_commutator(lat, p, q);
    Matrix oracle = embed(lat, p) * embed(lat, q) - embed(lat, q) * embed(lat, p);
    CHECK((embed(lat, nested) - oracle).norm() < 1e-12 * oracle.norm() + 1e-12);
  }
}

TEST_CASE("commutator bilinearity, antisymmetry, Jacobi") {
  Lattice lat = build_chain(3);
  Rng rng(17);
  for (int trial = 0; trial < 6; ++trial) {
    LocalOperator a{SiteSet{0, 1}, random_op(4, rng), false};
    LocalOperator b{SiteSet{1, 2}, random_op(4, rng), false};
    LocalOperator c{SiteSet{0, 2}, random_op(4, rng), false};
    Matrix ea = embed(lat, a), eb = embed(lat, b), ec = embed(lat, c);
    auto comm = [](const Matrix& x, const Matrix& y) { return (x * y - y * x).eval(); };
    CHECK((embed(lat, local_commutator(lat, a, b)) + embed(lat, local_commutator(lat, b, a))).norm() <
          1e-12);
    Matrix jac = comm(ea, comm(eb, ec)) + comm(eb, comm(ec, ea)) + comm(ec, comm(ea, eb));
    CHECK(jac.norm() < 1e-10);
  }
}

TEST_CASE("conditional expectation satisfies the projection laws") {
  Lattice lat = build_chain(3);
  Rng rng(23);
  SiteSet x{0, 1};

  // E_X restricted to A_X is the identity
  Matrix ax = random_op(4, rng);
  Matrix full = embed(lat, LocalOperator{x, ax, false});
  LocalOperator back = conditional_expectation(lat, full, x);
  CHECK(back.support == x);
  CHECK((back.matrix - ax).norm() < 1e-12 * ax.norm());

  // traceless complement factor drops out
  LocalOperator xx = local_product(lat, pauli(lat, 0, 1), pauli(lat, 1, 1));
  LocalOperator red = conditional_expectation(lat, embed(lat, xx), SiteSet{0});
  CHECK(red.matrix.norm() < 1e-14);

  // E_Lambda is the identity map
  Matrix any = random_op(8, rng);
  LocalOperator all = conditional_expectation(lat, any, lat.all_sites());
  CHECK((all.matrix - any).norm() < 1e-13 * any.norm());

  // E(ABC) = A E(B) C for A, C in A_X
  Matrix b = random_op(8, rng);
  Matrix a2 = embed(lat, LocalOperator{x, random_op(4, rng), false});
  Matrix c2 = embed(lat, LocalOperator{x, random_op(4, rng), false});
  LocalOperator lhs = conditional_expectation(lat, a2 * b * c2, x);
  Matrix rhs = conditional_expectation(lat, a2, x).matrix *
               conditional_expectation(lat, b, x).matrix *
               conditional_expectation(lat, c2, x).matrix;
  CHECK((lhs.matrix - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));

  // E_X o E_Y = E_{X n Y}
  SiteSet y{1, 2};
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m = random_op(8, rng);
    LocalOperator ey = conditional_expectation(lat, m, y);
    LocalOperator exy = conditional_expectation(lat, embed(lat, ey), x);
    LocalOperator direct = conditional_expectation(lat, m, x.intersect(y));
    CHECK(exy.support == direct.support);
    CHECK((exy.matrix - direct.matrix).norm() < 1e-10 * (1.0 + direct.matrix.norm()));
  }

  // contraction: ||E_X(A)|| <= ||A||
  for (int trial = 0; trial < 5; ++trial) {
    Matrix m = random_op(8, rng);
    CHECK(operator_norm(conditional_expectation(lat, m, x).matrix) <=
          operator_norm(m) * (1 + 1e-12));
  }
}

TEST_CASE("conditional expectation quantitative stability (Haar probe)") {
  // ||A - E_X(A)|| <= eta ||A|| with eta = sup over unitaries off X of
  // ||[A, U]|| / ||A||; the sup is probed with Haar samples and Pauli strings.
  Lattice lat = build_chain(4);
  Rng rng(31);
  SiteSet x{0, 1};
  SiteSet xc{2, 3};
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_op(16, rng);
    double na = operator_norm(a);
    double lhs = operator_norm(a - embed(lat, conditional_expectation(lat, a, x)));
    double eta = 0.0;
    for (int s = 0; s < 120; ++s) {
      Matrix u = embed(lat, LocalOperator{xc, random_unitary(4, rng), false});
      eta = std::max(eta, operator_norm(a * u - u * a));
    }
    for (int ax = 1; ax <= 3; ++ax)
      for (int bx = 1; bx <= 3; ++bx) {
        Matrix u = embed(lat, local_product(lat, pauli(lat, 2, ax), pauli(lat, 3, bx)));
        eta = std::max(eta, operator_norm(a * u - u * a));
      }
    CHECK(lhs <= eta + 1e-10 * na);
  }
}

TEST_CASE("operator and trace norms") {
  CHECK(operator_norm(pauli_matrix(3)) == doctest::Approx(1.0));
  CHECK(trace_norm(pauli_matrix(3)) == doctest::Approx(2.0));

  Rng rng(41);
  Vector psi(8);
  for (int i = 0; i < 8; ++i) psi(i) = rng.cnormal();
  GlobalState rho = pure_state(psi);
  CHECK(trace_norm(rho.rho) == doctest::Approx(1.0).epsilon(1e-10));

  for (int trial = 0; trial < 6; ++trial) {
    Matrix m = random_op(12, rng);
    double on = operator_norm(m), tn = trace_norm(m);
    CHECK(on <= tn * (1 + 1e-12));
    CHECK(tn <= 12 * on * (1 + 1e-12));
  }

  // power-iteration path agrees with the SVD path
  Matrix big = random_op(96, rng);
  CHECK(operator_norm(big, 32) == doctest::Approx(operator_norm(big)).epsilon(1e-9));
}

TEST_CASE("global state validation") {
  Vector psi(4);
  psi << 1, 0, 0, 1;
  GlobalState s = pure_state(psi);
  CHECK(is_valid_state(s));
  CHECK(s.trace_defect() < 1e-12);
  GlobalState bad{Matrix::Identity(4, 4)};  // trace 4
  CHECK_FALSE(is_valid_state(bad));
}

TEST_CASE("make_local rejects dimension mismatch and false Hermitian hints") {
  Lattice lat = build_chain(3);
  CHECK_THROWS(make_local(lat, SiteSet{0, 1}, Matrix::Identity(2, 2)));
  Matrix nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK_THROWS(make_local(lat, SiteSet{0}, nh, true));
}
