#include "gaplab/operators.hpp"

#include <stdexcept>

namespace gaplab {

namespace {

// Mixed-radix index helpers over an ordered site list. Site order is always
// ascending id; the first listed site is the most significant digit.
struct Radix {
  std::vector<int> dims;
  std::vector<long long> strides;
  long long total = 1;

  explicit Radix(const Lattice& lat, const std::vector<int>& sites) {
    dims.reserve(sites.size());
    for (int s : sites) dims.push_back(lat.site_dim(s));
    strides.assign(sites.size(), 1);
    for (int i = static_cast<int>(sites.size()) - 2; i >= 0; --i)
      strides[i] = strides[i + 1] * dims[i + 1];
    for (int d : dims) total *= d;
  }
};

// offsets[k] = contribution of configuration k of `sub_sites` to an index in
// the `target` ordering.
std::vector<long long> sub_offsets(const Lattice& lat, const std::vector<int>& sub_sites,
                                   const std::vector<int>& target_sites) {
  Radix target(lat, target_sites);
  Radix sub(lat, sub_sites);
  std::vector<long long> pos_stride(sub_sites.size());
  for (std::size_t i = 0; i < sub_sites.size(); ++i) {
    auto it = std::lower_bound(target_sites.begin(), target_sites.end(), sub_sites[i]);
    if (it == target_sites.end() || *it != sub_sites[i])
      throw std::invalid_argument("support not contained in target");
    pos_stride[i] = target.strides[static_cast<std::size_t>(it - target_sites.begin())];
  }
  std::vector<long long> offsets(static_cast<std::size_t>(sub.total));
  for (long long k = 0; k < sub.total; ++k) {
    long long rem = k, off = 0;
    for (std::size_t i = 0; i < sub_sites.size(); ++i) {
      long long digit = rem / sub.strides[i];
      rem %= sub.strides[i];
      off += digit * pos_stride[i];
    }
    offsets[static_cast<std::size_t>(k)] = off;
  }
  return offsets;
}

std::vector<int> set_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

LocalOperator make_local(const Lattice& lat, SiteSet support, Matrix m, bool hermitian_hint) {
  long long d = lat.subset_dim(support);
  if (m.rows() != d || m.cols() != d)
    throw std::invalid_argument("operator dimension does not match support");
  if (hermitian_hint) {
    double scale = m.norm();
    if (hermiticity_defect(m) > 1e-12 * std::max(scale, 1e-300))
      throw std::invalid_argument("operator marked Hermitian is not");
  }
  return LocalOperator{std::move(support), std::move(m), hermitian_hint};
}

Matrix pauli_matrix(int axis) {
  Matrix m(2, 2);
  switch (axis) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0); break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli axis must be 1, 2 or 3");
  }
  return m;
}

LocalOperator pauli(const Lattice& lat, int site, int axis) {
  if (lat.site_dim(site) != 2) throw std::invalid_argument("pauli requires a qubit site");
  return LocalOperator{SiteSet{site}, pauli_matrix(axis), true};
}

LocalOperator identity_op(const Lattice& lat, const SiteSet& support) {
  long long d = lat.subset_dim(support);
  return LocalOperator{support, Matrix::Identity(d, d), true};
}

Matrix embed_into(const Lattice& lat, const LocalOperator& op, const SiteSet& target) {
  if (!op.support.subset_of(target)) throw std::invalid_argument("embed: support not in target");
  const auto& tsites = target.members();
  const auto& ssites = op.support.members();
  std::vector<int> csites = set_difference(tsites, ssites);
  auto soff = sub_offsets(lat, ssites, tsites);
  auto coff = sub_offsets(lat, csites, tsites);
  long long dt = lat.subset_dim(target);
  Matrix out = Matrix::Zero(dt, dt);
  const long long ds = op.matrix.rows();
  for (long long i = 0; i < ds; ++i)
    for (long long j = 0; j < ds; ++j) {
      Complex v = op.matrix(i, j);
      if (v == Complex(0, 0)) continue;
      for (long long c : coff) out(soff[i] + c, soff[j] + c) = v;
    }
  return out;
}

Matrix embed(const Lattice& lat, const LocalOperator& op) {
  return embed_into(lat, op, lat.all_sites());
}

LocalOperator local_product(const Lattice& lat, const LocalOperator& a, const LocalOperator& b) {
  SiteSet joint = a.support.unite(b.support);
  Matrix ea = embed_into(lat, a, joint);
  Matrix eb = embed_into(lat, b, joint);
  return LocalOperator{joint, ea * eb, false};
}

LocalOperator local_commutator(const Lattice& lat, const LocalOperator& a, const LocalOperator& b) {
  SiteSet joint = a.support.unite(b.support);
  Matrix ea = embed_into(lat, a, joint);
  Matrix eb = embed_into(lat, b, joint);
  return LocalOperator{joint, ea * eb - eb * ea, false};
}

namespace {

LocalOperator reduce_to(const Lattice& lat, const Matrix& m, const std::vector<int>& all,
                        const SiteSet& x) {
  std::vector<int> keep;
  for (int s : all)
    if (x.contains(s)) keep.push_back(s);
  std::vector<int> drop = set_difference(all, keep);
  auto koff = sub_offsets(lat, keep, all);
  auto doff = sub_offsets(lat, drop, all);
  long long dk = 1;
  for (int s : keep) dk *= lat.site_dim(s);
  Matrix out = Matrix::Zero(dk, dk);
  for (long long i = 0; i < dk; ++i)
    for (long long j = 0; j < dk; ++j) {
      Complex acc(0, 0);
      for (long long c : doff) acc += m(koff[i] + c, koff[j] + c);
      out(i, j) = acc / static_cast<double>(doff.size());
    }
  return LocalOperator{SiteSet(keep), std::move(out), false};
}

}  // namespace

LocalOperator conditional_expectation(const Lattice& lat, const Matrix& full, const SiteSet& x) {
  if (full.rows() != lat.total_dim())
    throw std::invalid_argument("conditional_expectation: full-space matrix expected");
  return reduce_to(lat, full, lat.all_sites().members(), x);
}

LocalOperator conditional_expectation(const Lattice& lat, const LocalOperator& op, const SiteSet& x) {
  return reduce_to(lat, op.matrix, op.support.members(), x);
}

GlobalState pure_state(const Vector& psi) {
  Vector v = psi / psi.norm();
  return GlobalState{v * v.adjoint()};
}

bool is_valid_state(const GlobalState& s, double tol) {
  if (hermiticity_defect(s.rho) > tol) return false;
  if (s.trace_defect() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > -1e-10;
}

Complex expectation(const GlobalState& s, const Matrix& b) { return (s.rho * b).trace(); }

}  // namespace gaplab
