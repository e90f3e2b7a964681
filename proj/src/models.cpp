#include "gaplab/models.hpp"

#include <iostream>
#include <stdexcept>

namespace gaplab {

IsingModel ising_model(const Lattice& lat, const std::vector<double>& lambda_by_distance,
                       bool allow_strong) {
  IsingModel model;
  for (double l : lambda_by_distance) model.lambda_l1 += 2.0 * std::abs(l);
  if (model.lambda_l1 >= 2.0) {
    if (!allow_strong)
      throw std::invalid_argument("ising_model: ||lambda||_1 >= 2 (set allow_strong to override)");
    std::cerr << "ising_model: warning, ||lambda||_1 = " << model.lambda_l1 << " >= 2\n";
  }
  int range = static_cast<int>(lambda_by_distance.size());
  if (range > lat.diameter()) {
    std::cerr << "ising_model: notice, coupling range " << range
              << " exceeds lattice diameter " << lat.diameter() << ", truncated\n";
    range = lat.diameter();
  }
  for (int x = 0; x < lat.num_sites(); ++x) model.phi.add_term(lat, pauli(lat, x, 3));
  for (int x = 0; x < lat.num_sites(); ++x) {
    for (int y = x + 1; y < lat.num_sites(); ++y) {
      int d = lat.dist(x, y);
      if (d == kDistInf || d < 1 || d > range) continue;
      double c = 0.5 * lambda_by_distance[d - 1];
      if (c == 0.0) continue;
      LocalOperator zz = local_product(lat, pauli(lat, x, 3), pauli(lat, y, 3));
      zz.matrix *= c;
      zz.hermitian_hint = true;
      model.phi.add_term(lat, zz);
    }
  }
  // all-spins-down product vector: |down> is the last basis state per site
  long long dim = lat.total_dim();
  model.ground_vec = Vector::Zero(dim);
  model.ground_vec(dim - 1) = 1.0;
  return model;
}

Interaction xxz_model(const Lattice& lat, double lambda1, double lambda3) {
  Interaction phi;
  for (int x = 0; x < lat.num_sites(); ++x) phi.add_term(lat, pauli(lat, x, 3));
  for (auto [x, y] : lat.edges()) {
    LocalOperator t11 = local_product(lat, pauli(lat, x, 1), pauli(lat, y, 1));
    LocalOperator t22 = local_product(lat, pauli(lat, x, 2), pauli(lat, y, 2));
    LocalOperator t33 = local_product(lat, pauli(lat, x, 3), pauli(lat, y, 3));
    LocalOperator edge{t11.support, lambda1 * t11.matrix + lambda1 * t22.matrix + lambda3 * t33.matrix,
                       true};
    if (edge.matrix.norm() > 0) phi.add_term(lat, edge);
  }
  return phi;
}

Interaction localized_perturbation(const Lattice& lat, const SiteSet& omega,
                                   PerturbationKind kind, double strength, LocalizationMode mode,
                                   std::uint64_t seed) {
  if (omega.empty()) throw std::invalid_argument("localized_perturbation: omega must be nonempty");
  Interaction phi;
  if (strength == 0.0) return phi;
  Rng rng(seed);
  auto scaled_random = [&](const SiteSet& support) {
    long long d = lat.subset_dim(support);
    Matrix m = random_hermitian(static_cast<int>(d), rng);
    m *= strength / operator_norm(m);
    return LocalOperator{support, m, true};
  };
  switch (kind) {
    case PerturbationKind::FieldReversal: {
      for (int x : omega.members()) {
        LocalOperator t = pauli(lat, x, 3);
        t.matrix *= -strength;
        phi.add_term(lat, t);
      }
      break;
    }
    case PerturbationKind::RandomSingleSite: {
      for (int x : omega.members()) phi.add_term(lat, scaled_random(SiteSet{x}));
      break;
    }
    case PerturbationKind::RandomTwoSite: {
      const auto& m = omega.members();
      if (m.size() == 1) {
        phi.add_term(lat, scaled_random(omega));
        break;
      }
      for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        SiteSet pair{m[i], m[i + 1]};
        if (mode == LocalizationMode::Strong && i == m.size() - 2) {
          // let the last term stick out of omega (still meets it)
          SiteSet out = lat.fatten(SiteSet{m[i + 1]}, 1);
          for (int y : out.members()) {
            if (!omega.contains(y)) {
              pair = SiteSet{m[i + 1], y};
              break;
            }
          }
        }
        phi.add_term(lat, scaled_random(pair));
      }
      break;
    }
  }
  if (mode == LocalizationMode::Strict && !is_strictly_localized(phi, omega))
    throw std::logic_error("localized_perturbation: strict mode violated");
  if (!is_strongly_localized(phi, omega))
    throw std::logic_error("localized_perturbation: strong localization violated");
  return phi;
}

FrustrationFreeReport frustration_free_checks(const Interaction& phi, const Lattice& lat,
                                              int sweeps) {
  FrustrationFreeReport rep;
  rep.min_term_eigenvalue = std::numeric_limits<double>::infinity();
  for (const auto& [key, op] : phi.terms()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix, Eigen::EigenvaluesOnly);
    double mn = es.eigenvalues().minCoeff();
    rep.min_term_eigenvalue = std::min(rep.min_term_eigenvalue, mn);
    if (mn < -1e-10) rep.nonneg = false;
  }
  if (phi.empty()) {
    rep.kernel_vector_found = false;
    return rep;
  }

  // per-site alternating search for a common product kernel vector
  const int ns = lat.num_sites();
  rep.site_vectors.resize(ns);
  for (int x = 0; x < ns; ++x) {
    rep.site_vectors[x] = Vector::Zero(lat.site_dim(x));
    rep.site_vectors[x](lat.site_dim(x) - 1) = 1.0;  // start from all-down
  }
  auto energy_matrix_for_site = [&](int x) {
    // effective single-site quadratic form sum_Z <rest| Phi(Z) |rest>
    int d = lat.site_dim(x);
    Matrix eff = Matrix::Zero(d, d);
    for (const auto& [key, op] : phi.terms()) {
      if (!op.support.contains(x)) continue;
      // contract all supported sites except x with their current vectors
      const auto& sites = op.support.members();
      long long dim_op = op.matrix.rows();
      // build the partial vectors: iterate basis of the support
      std::vector<long long> strides(sites.size(), 1);
      for (int i = static_cast<int>(sites.size()) - 2; i >= 0; --i)
        strides[i] = strides[i + 1] * lat.site_dim(sites[i + 1]);
      int xpos = 0;
      while (sites[xpos] != x) ++xpos;
      for (long long r = 0; r < dim_op; ++r) {
        for (long long c = 0; c < dim_op; ++c) {
          Complex amp = op.matrix(r, c);
          if (amp == Complex(0, 0)) continue;
          Complex wgt(1, 0);
          int rx = 0, cx = 0;
          for (std::size_t i = 0; i < sites.size(); ++i) {
            int rd = static_cast<int>((r / strides[i]) % lat.site_dim(sites[i]));
            int cd = static_cast<int>((c / strides[i]) % lat.site_dim(sites[i]));
            if (static_cast<int>(i) == xpos) {
              rx = rd;
              cx = cd;
            } else {
              wgt *= std::conj(rep.site_vectors[sites[i]](rd)) * rep.site_vectors[sites[i]](cd);
            }
          }
          eff(rx, cx) += amp * wgt;
        }
      }
    }
    return eff;
  };
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int x = 0; x < ns; ++x) {
      Matrix eff = energy_matrix_for_site(x);
      Eigen::SelfAdjointEigenSolver<Matrix> es(eff);
      rep.site_vectors[x] = es.eigenvectors().col(0);
    }
  }
  // residual of the candidate on every term
  rep.kernel_residual = 0.0;
  for (const auto& [key, op] : phi.terms()) {
    const auto& sites = op.support.members();
    long long dim_op = op.matrix.rows();
    Vector prod = Vector::Ones(1);
    for (int s : sites) {
      Vector next(prod.size() * lat.site_dim(s));
      for (long long i = 0; i < prod.size(); ++i)
        for (int k = 0; k < lat.site_dim(s); ++k)
          next(i * lat.site_dim(s) + k) = prod(i) * rep.site_vectors[s](k);
      prod = std::move(next);
    }
    (void)dim_op;
    rep.kernel_residual = std::max(rep.kernel_residual, (op.matrix * prod).norm());
  }
  rep.kernel_vector_found = rep.kernel_residual < 1e-8;

  // restriction gaps on balls
  std::vector<double> lx, ly;
  for (int x = 0; x < ns; ++x) {
    for (int r = 1; r <= lat.diameter(); ++r) {
      SiteSet ball = lat.fatten(SiteSet{x}, r);
      if (lat.subset_dim(ball) > 4096) break;
      Interaction restricted;
      for (const auto& [key, op] : phi.terms())
        if (op.support.subset_of(ball)) restricted.add_term_raw(op);
      if (restricted.empty()) continue;
      // assemble on the sublattice spanned by the ball
      Matrix h = Matrix::Zero(lat.subset_dim(ball), lat.subset_dim(ball));
      for (const auto& [key, op] : restricted.terms()) h += embed_into(lat, op, ball);
      Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
      double e0 = es.eigenvalues()(0);
      double gamma = 0.0;
      for (int i = 1; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) - e0 > 1e-10) {
          gamma = es.eigenvalues()(i) - e0;
          break;
        }
      }
      if (gamma <= 0) continue;
      rep.restriction_rows.push_back({x, r, gamma, 1.0 / gamma});
      lx.push_back(std::log(static_cast<double>(r)));
      ly.push_back(std::log(1.0 / gamma));
      if (static_cast<int>(ball.members().size()) == ns) break;
    }
  }
  if (lx.size() >= 2) {
    LineFit f = fit_line(lx, ly);
    rep.fitted_d_gamma = std::max(0.0, f.slope);
    rep.fitted_c_gamma = std::exp(f.intercept);
    // lift the constant so the bound 1/gamma <= C r^d holds on every row
    for (const auto& row : rep.restriction_rows) {
      double bound = rep.fitted_c_gamma * std::pow(row.radius, rep.fitted_d_gamma);
      if (row.inv_gamma > bound) rep.fitted_c_gamma *= row.inv_gamma / bound;
    }
  } else if (!rep.restriction_rows.empty()) {
    rep.fitted_d_gamma = 0.0;
    rep.fitted_c_gamma = rep.restriction_rows.front().inv_gamma;
    for (const auto& row : rep.restriction_rows)
      rep.fitted_c_gamma = std::max(rep.fitted_c_gamma, row.inv_gamma);
  }
  return rep;
}

}  // namespace gaplab
