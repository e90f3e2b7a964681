#pragma once

#include "gaplab/common.hpp"
#include "gaplab/lattice.hpp"

namespace gaplab {

/// A complex operator together with the sites it acts on. The matrix lives on
/// the tensor product of the supported sites only; embedding into the full
/// lattice space is always explicit.
struct LocalOperator {
  SiteSet support;
  Matrix matrix;
  bool hermitian_hint = false;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

LocalOperator make_local(const Lattice& lat, SiteSet support, Matrix m, bool hermitian_hint = false);

/// Pauli matrices, axis in {1,2,3}.
Matrix pauli_matrix(int axis);

/// Single-site Pauli operator; the site must carry a two-dimensional space.
LocalOperator pauli(const Lattice& lat, int site, int axis);

LocalOperator identity_op(const Lattice& lat, const SiteSet& support);

/// Kronecker embedding of `op` into the algebra over `target` (column site
/// ordering: ascending site id, site with the smallest id most significant).
/// `target` must contain the support.
Matrix embed_into(const Lattice& lat, const LocalOperator& op, const SiteSet& target);

/// Embedding into the full lattice space.
Matrix embed(const Lattice& lat, const LocalOperator& op);

/// Product and commutator computed on the joint support, never on the full
/// space.
LocalOperator local_product(const Lattice& lat, const LocalOperator& a, const LocalOperator& b);
LocalOperator local_commutator(const Lattice& lat, const LocalOperator& a, const LocalOperator& b);

/// Conditional expectation E_X: normalized partial trace over the complement
/// of X. Accepts a full-space matrix; the result is supported in X.
LocalOperator conditional_expectation(const Lattice& lat, const Matrix& full, const SiteSet& x);

/// Same for an operator already living on a subset; result supported in
/// support `intersect` X.
LocalOperator conditional_expectation(const Lattice& lat, const LocalOperator& op, const SiteSet& x);

/// Density matrix on the full lattice space.
struct GlobalState {
  Matrix rho;

  double trace_defect() const { return std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag()); }
};

GlobalState pure_state(const Vector& psi);
bool is_valid_state(const GlobalState& s, double tol = 1e-8);

/// Expectation tr(rho B).
Complex expectation(const GlobalState& s, const Matrix& b);

}  // namespace gaplab
