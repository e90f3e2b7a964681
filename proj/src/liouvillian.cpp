#include "gaplab/liouvillian.hpp"

#include <stdexcept>

namespace gaplab {

SpectralData SpectralData::diagonalize(const Matrix& h) {
  double scale = std::max(h.norm(), 1e-300);
  if (hermiticity_defect(h) > 1e-10 * scale)
    throw std::invalid_argument("diagonalize expects a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  SpectralData s;
  s.evals = es.eigenvalues();
  s.evecs = es.eigenvectors();
  s.source_hash = matrix_hash(h);
  return s;
}

double SpectralData::unitarity_defect() const {
  Matrix g = evecs.adjoint() * evecs - Matrix::Identity(dim(), dim());
  return g.norm();
}

double SpectralData::reconstruction_defect(const Matrix& h) const {
  Matrix r = evecs * evals.asDiagonal() * evecs.adjoint() - h;
  return r.norm();
}

Matrix liouvillian_apply(const Matrix& h, const Matrix& a) {
  if (h.rows() != a.rows() || h.cols() != a.cols())
    throw std::invalid_argument("liouvillian_apply: dimension mismatch");
  return Complex(0, -1) * (h * a - a * h);
}

Matrix heisenberg_evolve(const SpectralData& spec, const Matrix& a, double t) {
  const int n = spec.dim();
  Matrix ar = spec.evecs.adjoint() * a * spec.evecs;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      ar(i, j) *= std::exp(Complex(0, (spec.evals(i) - spec.evals(j)) * t));
  return spec.evecs * ar * spec.evecs.adjoint();
}

namespace {

// Apply an even (E) or odd-imaginary (iR) spectral kernel elementwise in the
// eigenbasis. Kernel values are computed once per (i, j) pair using symmetry.
enum class KernelKind { InverseLiouvillian, JMap };

Matrix apply_kernel(const SpectralData& spec, const WeightFunction& wf, const Matrix& a,
                    KernelKind kind) {
  const int n = spec.dim();
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("kernel application: dimension mismatch");
  Matrix ar = spec.evecs.adjoint() * a * spec.evecs;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      double om = spec.evals(i) - spec.evals(j);
      if (kind == KernelKind::JMap) {
        double e = wf.fourier_E(om);
        ar(i, j) *= e;
        if (i != j) ar(j, i) *= e;
      } else {
        double r = wf.kernel_R(om);
        ar(i, j) *= Complex(0, r);
        if (i != j) ar(j, i) *= Complex(0, -r);
      }
    }
  }
  return spec.evecs * ar * spec.evecs.adjoint();
}

}  // namespace

Matrix inverse_liouvillian(const SpectralData& spec, const WeightFunction& wf, const Matrix& a) {
  return apply_kernel(spec, wf, a, KernelKind::InverseLiouvillian);
}

Matrix j_map(const SpectralData& spec, const WeightFunction& wf, const Matrix& a) {
  return apply_kernel(spec, wf, a, KernelKind::JMap);
}

Matrix inverse_liouvillian_timedomain(const SpectralData& spec, const WeightFunction& wf,
                                      const Matrix& a, int inner_nodes) {
  std::vector<double> xn, xw;
  gauss_legendre(inner_nodes, xn, xw);
  const auto& ts = wf.grid_t();
  const auto& wq = wf.grid_weight();
  const auto& wv = wf.grid_w();
  Matrix acc = Matrix::Zero(a.rows(), a.cols());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double t = ts[i];
    double coef = wq[i] * wv[i];
    if (std::abs(coef) * std::abs(t) < 1e-18) continue;
    Matrix inner = Matrix::Zero(a.rows(), a.cols());
    for (int k = 0; k < inner_nodes; ++k) {
      double s = 0.5 * t * xn[k] + 0.5 * t;
      inner += 0.5 * t * xw[k] * heisenberg_evolve(spec, a, s);
    }
    acc += coef * inner;
  }
  return acc;
}

double calibrate_identity_sign(const WeightFunction& wf) {
  Matrix h(2, 2), a(2, 2);
  h << 1, 0, 0, -1;
  a << 0, 1, 1, 0;
  // use a weight function with g matching the two-level gap 2
  WeightFunction w2 = (std::abs(wf.g() - 2.0) < 1e-12) ? wf : WeightFunction::build(2.0, wf.n_factors());
  SpectralData spec = SpectralData::diagonalize(h);
  Matrix lhs = liouvillian_apply(h, inverse_liouvillian(spec, w2, a)) - a;
  Matrix j = j_map(spec, w2, a);
  double plus = (lhs - j).norm();
  double minus = (lhs + j).norm();
  double scale = std::max(j.norm(), 1e-300);
  if (minus <= 1e-8 * scale) return -1.0;
  if (plus <= 1e-8 * scale) return 1.0;
  throw std::runtime_error("identity sign calibration failed");
}

Matrix loi_minus_id(const SpectralData& spec, const WeightFunction& wf, const Matrix& a) {
  static thread_local double cached_sign = 0.0;
  if (cached_sign == 0.0) cached_sign = calibrate_identity_sign(wf);
  return cached_sign * j_map(spec, wf, a);
}

GdgReport gdg_check(const SpectralData& spec, const std::vector<int>& sigma1,
                    const WeightFunction& wf, int trials, Rng& rng, double tol) {
  const int n = spec.dim();
  if (sigma1.empty() || static_cast<int>(sigma1.size()) >= n)
    throw std::invalid_argument("gdg_check: sigma1 must be a proper nonempty subset");
  std::vector<bool> in1(n, false);
  for (int i : sigma1) in1.at(i) = true;

  auto witness = [&](const Matrix& a, const Matrix& b) {
    Matrix m = loi_minus_id(spec, wf, a);
    Matrix comm = m * b - b * m;
    Complex tr(0, 0);
    Matrix cr = spec.evecs.adjoint() * comm * spec.evecs;
    for (int i = 0; i < n; ++i)
      if (in1[i]) tr += cr(i, i);
    return std::abs(tr) / std::max(operator_norm(a) * operator_norm(b), 1e-300);
  };

  GdgReport rep;
  for (int t = 0; t < trials; ++t) {
    Matrix a = random_hermitian(n, rng);
    Matrix b = random_hermitian(n, rng);
    rep.worst_random = std::max(rep.worst_random, witness(a, b));
  }

  // targeted cross-gap witness A = |u_n*><u_m*| for the closest pair
  double best = std::numeric_limits<double>::infinity();
  int ns = -1, ms = -1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (in1[i] == in1[j]) continue;
      double d = std::abs(spec.evals(i) - spec.evals(j));
      if (d < best) {
        best = d;
        ns = in1[i] ? j : i;  // n* outside sigma1
        ms = in1[i] ? i : j;
      }
    }
  rep.cross_gap_distance = best;
  rep.what_at_distance = wf.eval_what(best);
  Matrix a = spec.evecs.col(ns) * spec.evecs.col(ms).adjoint();
  rep.targeted = witness(a, a.adjoint());
  rep.holds = rep.worst_random <= tol;
  return rep;
}

EquilibriumState EquilibriumState::analyze(const SpectralData& spec, const GlobalState& rho0) {
  EquilibriumState eq;
  eq.spec = &spec;
  Matrix d = spec.evecs.adjoint() * rho0.rho * spec.evecs;
  Matrix h_comm = spec.evals.asDiagonal() * d - d * spec.evals.asDiagonal();
  eq.commutation_defect = h_comm.norm();
  Eigen::SelfAdjointEigenSolver<Matrix> es(d);
  for (int k = spec.dim() - 1; k >= 0; --k) {
    double p = es.eigenvalues()(k);
    if (p > 1e-12) {
      eq.prob.push_back(p);
      eq.coeff.push_back(es.eigenvectors().col(k));
    }
  }
  return eq;
}

double ldg_witness(const EquilibriumState& eq, const WeightFunction& wf, const Matrix& a,
                   const Matrix& b) {
  const SpectralData& spec = *eq.spec;
  const int n = spec.dim();
  static thread_local double cached_sign = 0.0;
  if (cached_sign == 0.0) cached_sign = calibrate_identity_sign(wf);

  Complex total(0, 0);
  for (std::size_t k = 0; k < eq.prob.size(); ++k) {
    const Vector& c = eq.coeff[k];
    Vector phi = spec.evecs * c;
    // y = (E o (U^dag A U)) c using only the occupied coefficients
    Vector y = Vector::Zero(n);
    for (int m = 0; m < n; ++m) {
      if (std::abs(c(m)) < 1e-13) continue;
      Vector col = spec.evecs.adjoint() * (a * spec.evecs.col(m));
      for (int i = 0; i < n; ++i)
        y(i) += wf.fourier_E(spec.evals(i) - spec.evals(m)) * col(i) * c(m);
    }
    Vector mphi = cached_sign * (spec.evecs * y);
    Vector bphi = b * phi;
    Complex t1 = mphi.dot(bphi);  // <M phi | B phi>, M and B Hermitian
    total += eq.prob[k] * (t1 - std::conj(t1));
  }
  return std::abs(total);
}

}  // namespace gaplab
