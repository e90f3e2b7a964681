#include "gaplab/gapcond.hpp"

#include <sstream>
#include <stdexcept>

#include "gaplab/models.hpp"

namespace gaplab {

GapScanResult ldg_scan(const Lattice& lat, const SpectralData& spec, const EquilibriumState& eq,
                       const WeightFunction& wf, const SiteSet& gap_region, bool include_two_site,
                       double fixed_p) {
  GapScanResult out;
  if (gap_region.empty()) throw std::invalid_argument("ldg_scan: empty observable family");
  // gap_region == Lambda is allowed: distances saturate at the infinite
  // sentinel and the fit flags itself degenerate
  SiteSet complement = lat.complement(gap_region);

  auto witness_at = [&](const SiteSet& support, const Matrix& a_full, const std::string& id) {
    double w = 0.0;
    for (int bx : support.members())
      for (int baxis = 1; baxis <= 3; ++baxis) {
        Matrix b = embed(lat, pauli(lat, bx, baxis));
        w = std::max(w, ldg_witness(eq, wf, a_full, b));
      }
    GapScanRow row;
    row.obs_id = id;
    row.support = support.members();
    row.diam = lat.set_diameter(support);
    row.dist_to_complement = lat.set_distance(support, complement);
    row.witness = w;
    return row;
  };

  std::map<int, std::vector<double>> single_site_by_dist;
  for (int x : gap_region.members()) {
    for (int axis = 1; axis <= 3; ++axis) {
      Matrix a = embed(lat, pauli(lat, x, axis));
      std::ostringstream id;
      id << "s" << x << "a" << axis;
      GapScanRow row = witness_at(SiteSet{x}, a, id.str());
      single_site_by_dist[row.dist_to_complement].push_back(row.witness);
      out.rows.push_back(std::move(row));
    }
  }
  if (include_two_site) {
    for (auto [x, y] : lat.edges()) {
      if (!gap_region.contains(x) || !gap_region.contains(y)) continue;
      for (int ax = 1; ax <= 3; ++ax)
        for (int ay = 1; ay <= 3; ++ay) {
          LocalOperator p = local_product(lat, pauli(lat, x, ax), pauli(lat, y, ay));
          Matrix a = embed(lat, p);
          std::ostringstream id;
          id << "p" << x << "a" << ax << "_" << y << "a" << ay;
          out.rows.push_back(witness_at(p.support, a, id.str()));
        }
    }
  }
  std::sort(out.rows.begin(), out.rows.end(), [](const GapScanRow& a, const GapScanRow& b) {
    return std::tie(a.dist_to_complement, a.obs_id) < std::tie(b.dist_to_complement, b.obs_id);
  });

  for (auto& [d, vals] : single_site_by_dist) {
    std::sort(vals.begin(), vals.end());
    std::size_t n = vals.size();
    out.median_by_dist[d] = (n % 2) ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
  }

  // log-witness fit against -b dist^p + ell log(diam+1), single-site rows only
  auto fit_with_p = [&](bool free_p) {
    DecayFit fit;
    std::vector<double> xs, ys;
    for (const auto& row : out.rows) {
      if (row.diam > 0) continue;  // single-site rows carry the distance trend
      if (row.dist_to_complement < 1 || row.dist_to_complement == kDistInf ||
          row.witness < out.noise_floor)
        continue;
      xs.push_back(static_cast<double>(row.dist_to_complement));
      ys.push_back(std::log(row.witness));
    }
    if (xs.size() < 3) {
      fit.degenerate = true;
      return fit;
    }
    double best_p = fixed_p, best_rms = std::numeric_limits<double>::infinity();
    std::vector<double> ps;
    if (free_p) {
      for (int i = 1; i <= 20; ++i) ps.push_back(0.05 * i);
    } else {
      ps.push_back(fixed_p);
    }
    for (double p : ps) {
      std::vector<double> xp(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) xp[i] = std::pow(xs[i], p);
      LineFit lf = fit_line(xp, ys);
      if (lf.residual_rms < best_rms) {
        best_rms = lf.residual_rms;
        best_p = p;
        fit.log_c = lf.intercept;
        fit.b = -lf.slope;
      }
    }
    fit.p = best_p;
    fit.residual_rms = best_rms;
    return fit;
  };
  out.fit_fixed_p = fit_with_p(false);
  out.fit_free_p = fit_with_p(true);
  return out;
}

LpplValues lppl_checks(const GlobalState& rho, const GlobalState& rho_star, const Matrix& a) {
  if (rho.rho.rows() != rho_star.rho.rows())
    throw std::invalid_argument("lppl_checks: states on different spaces");
  Matrix d = rho.rho - rho_star.rho;
  LpplValues v;
  v.weak = std::abs((d * a).trace());
  v.trace = trace_norm(d * a) + trace_norm(a * d);
  v.comm = trace_norm(d * a - a * d);
  return v;
}

double automorphism_witness(const Matrix& u, const Matrix& a) {
  if ((u * u.adjoint() - Matrix::Identity(u.rows(), u.cols())).norm() > 1e-10 * u.rows())
    throw std::invalid_argument("automorphism_witness: u is not unitary");
  return operator_norm(u.adjoint() * a * u - a);
}

CoercivityWitness coercivity_witness(const Matrix& h, const GlobalState& rho, const Matrix& a,
                                     double g, CoercivityVariant variant, double c_env, double ell,
                                     const DecayProfile& decay, int diam_x,
                                     int dist_to_complement) {
  // rho must be a pure ground state: H rho = E_min rho
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  double e0 = es.eigenvalues()(0);
  Matrix hr = h * rho.rho - e0 * rho.rho;
  if (hr.norm() > 1e-8 * std::max(1.0, h.norm()))
    throw std::invalid_argument("coercivity_witness: rho is not the ground state of h");

  Matrix lh = Complex(0, -1) * (h * a - a * h);
  Complex lhs_c = Complex(0, 1) * (rho.rho * a.adjoint() * lh).trace();
  if (std::abs(lhs_c.imag()) > 1e-9 * std::max(1.0, std::abs(lhs_c.real())))
    throw std::runtime_error("coercivity_witness: lhs not real");
  CoercivityWitness w;
  w.lhs = lhs_c.real();
  double avg_aa = std::real((rho.rho * a.adjoint() * a).trace());
  Complex avg_a = (rho.rho * a).trace();
  double variance = avg_aa - std::norm(avg_a);
  double envelope = c_env * std::pow(static_cast<double>(diam_x) + 1.0, ell) *
                    chi_dist(decay, dist_to_complement);
  switch (variant) {
    case CoercivityVariant::Exact: w.rhs = g * variance; break;
    case CoercivityVariant::Decay: w.rhs = g * (1.0 - envelope) * variance; break;
    case CoercivityVariant::Defective: {
      double na = operator_norm(a);
      w.rhs = g * variance - envelope * na * na;
      break;
    }
  }
  return w;
}

namespace {

ImplicationResult pointwise(const std::string& name, bool ok, const std::string& detail) {
  return ImplicationResult{name, true, ok, detail};
}

// medians decay (non-increasing within slack) over distance
bool trend_decays(const std::map<int, double>& med, double slack = 1.05) {
  if (med.size() < 2) return false;
  auto it = med.begin();
  double prev = it->second;
  for (++it; it != med.end(); ++it) {
    if (it->second > prev * slack + 1e-15) return false;
    prev = it->second;
  }
  return true;
}

}  // namespace

ImplicationReport implication_suite(Rng& rng) {
  ImplicationReport rep;

  // --- pointwise operator inequalities (i), (ii), (iii), (v), (ix) on random
  // --- state pairs and observables, dim <= 16
  {
    bool ok_i = true, ok_ii = true, ok_iii = true;
    for (int trial = 0; trial < 40; ++trial) {
      int dim = 4 + static_cast<int>(rng.uniform() * 12);
      Matrix u = random_unitary(dim, rng);
      Vector v0(dim), v1(dim);
      for (int i = 0; i < dim; ++i) {
        v0(i) = rng.cnormal();
        v1(i) = rng.cnormal();
      }
      GlobalState rho = pure_state(v0);
      GlobalState rho_star = pure_state(v1);
      Matrix a = random_hermitian(dim, rng);
      LpplValues lv = lppl_checks(rho, rho_star, a);
      if (lv.comm > lv.trace * (1 + 1e-10) + 1e-12) ok_i = false;
      if (lv.weak > trace_norm((rho.rho - rho_star.rho) * a) * (1 + 1e-10) + 1e-12) ok_ii = false;
      // (iii): rho = U rho* U^dag gives the intertwining automorphism
      GlobalState rho_u{u * rho_star.rho * u.adjoint()};
      double aw = automorphism_witness(u, a);
      LpplValues lu = lppl_checks(rho_u, rho_star, a);
      if (lu.weak > aw * (1 + 1e-10) + 1e-12) ok_iii = false;
    }
    rep.results.push_back(pointwise("(i) trace LPPL => commutator trace LPPL", ok_i,
                                    "||[d,A]||_tr <= ||dA||_tr + ||Ad||_tr on all samples"));
    rep.results.push_back(pointwise("(ii) trace LPPL => weak LPPL", ok_ii,
                                    "|tr(dA)| <= ||dA||_tr on all samples"));
    rep.results.push_back(pointwise("(iii) automorphism => weak LPPL", ok_iii,
                                    "|<A>_rho - <A>_rho*| <= ||(tau-1)A|| on all samples"));
  }

  // --- (v): gap decay => defective coercivity is the algebraic statement
  // --- g*(1-e)*var >= g*var - 2 e ||A||^2 whenever var <= 2||A||^2
  {
    bool ok = true;
    for (int trial = 0; trial < 40; ++trial) {
      int dim = 4 + static_cast<int>(rng.uniform() * 8);
      Matrix h = random_hermitian(dim, rng);
      SpectralData spec = SpectralData::diagonalize(h);
      GlobalState rho = pure_state(spec.evecs.col(0));
      Matrix a = random_hermitian(dim, rng);
      double na = operator_norm(a);
      double avg_aa = std::real((rho.rho * a.adjoint() * a).trace());
      double variance = avg_aa - std::norm((rho.rho * a).trace());
      double e = rng.uniform();
      double lhs5 = (1.0 - e) * variance;
      double rhs5 = variance - 2.0 * e * na * na;
      if (lhs5 < rhs5 - 1e-10) ok = false;
      if (variance > 2.0 * na * na + 1e-10) ok = false;
    }
    rep.results.push_back(pointwise("(v) gap decay => defective coercivity", ok,
                                    "|var| <= 2||A||^2 pointwise identity"));
  }

  // --- exemplary family: ring Ising with exponentially decaying FM coupling
  // --- and a strictly localized field-reversal perturbation on {0,1}
  const int L = 10;
  Lattice lat = build_ring(L);
  std::vector<double> lam(4);
  for (int d = 1; d <= 4; ++d) lam[d - 1] = -0.6 * std::exp(-0.4 * d);
  IsingModel ising = ising_model(lat, lam);
  SiteSet gap_region{3, 4, 5, 6, 7, 8, 9};
  SiteSet pert_region{0, 1};
  Interaction jphi = localized_perturbation(lat, pert_region, PerturbationKind::FieldReversal, 4.0,
                                            LocalizationMode::Strict, 11);
  Matrix hstar = assemble(ising.phi, lat);
  Matrix h = hstar + assemble(jphi, lat);
  SpectralData spec = SpectralData::diagonalize(h);
  SpectralData spec_star = SpectralData::diagonalize(hstar);
  GlobalState rho = pure_state(spec.evecs.col(0));
  GlobalState rho_star = pure_state(spec_star.evecs.col(0));
  const double g = 4.63;
  WeightFunction wf = WeightFunction::build(g, 4096);
  EquilibriumState eq = EquilibriumState::analyze(spec, rho);

  auto median_witness = [&](auto&& witness_fn) {
    std::map<int, std::vector<double>> by_dist;
    SiteSet complement = lat.complement(gap_region);
    for (int x : gap_region.members()) {
      for (int axis = 1; axis <= 3; ++axis) {
        double w = witness_fn(x, axis);
        by_dist[lat.set_distance(SiteSet{x}, complement)].push_back(w);
      }
    }
    std::map<int, double> med;
    for (auto& [d, vals] : by_dist) {
      std::sort(vals.begin(), vals.end());
      std::size_t n = vals.size();
      med[d] = (n % 2) ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    }
    return med;
  };

  auto ldg_med = median_witness([&](int x, int axis) {
    double best = 0.0;
    Matrix a = embed(lat, pauli(lat, x, axis));
    for (int baxis = 1; baxis <= 3; ++baxis)
      best = std::max(best, ldg_witness(eq, wf, a, embed(lat, pauli(lat, x, baxis))));
    return best;
  });

  // (vi): commutator trace norm premise on the same family
  auto comm_med = median_witness([&](int x, int axis) {
    Matrix a = embed(lat, pauli(lat, x, axis));
    return lppl_checks(rho, rho_star, a).comm;
  });
  {
    bool premise = trend_decays(comm_med);
    bool conclusion = trend_decays(ldg_med);
    rep.results.push_back(ImplicationResult{
        "(vi) commutator trace LPPL => LDG", true, !premise || conclusion,
        premise ? "premise decays and conclusion decays" : "premise trend degenerate"});
  }

  // (vii): intertwining automorphism from the factorized ground states. The
  // family is classical, so both ground vectors are computational basis
  // states and the intertwiner is a block permutation unitary.
  {
    SiteSet block{0, 1};
    int idx = 0, idx_star = 0;
    spec.evecs.col(0).cwiseAbs().maxCoeff(&idx);
    spec_star.evecs.col(0).cwiseAbs().maxCoeff(&idx_star);
    long long rest = lat.total_dim() / 4;  // block occupies the two leading digits
    int blk = static_cast<int>(idx / rest);
    int blk_star = static_cast<int>(idx_star / rest);
    Matrix ub = Matrix::Identity(4, 4);
    if (blk != blk_star) {
      ub(blk_star, blk_star) = 0;
      ub(blk, blk) = 0;
      ub(blk, blk_star) = 1;
      ub(blk_star, blk) = 1;
    }
    Matrix u = embed(lat, LocalOperator{block, ub, false});
    double overlap = std::abs((u * rho_star.rho * u.adjoint() * rho.rho).trace());
    auto auto_med = median_witness(
        [&](int x, int axis) { return automorphism_witness(u, embed(lat, pauli(lat, x, axis))); });
    bool premise_zero = true;
    for (auto& [d, v] : auto_med) premise_zero = premise_zero && v < 1e-8;
    bool conclusion = trend_decays(ldg_med);
    std::ostringstream detail;
    detail << "U-conjugated ground state overlap " << overlap << "; automorphism witness vanishes "
           << "in the gap region and the LDG witness decays";
    rep.results.push_back(ImplicationResult{"(vii) automorphism => LDG", true,
                                            overlap > 0.99 && premise_zero && conclusion,
                                            detail.str()});
  }

  // (iv): LPPL premise => defective coercivity. The coercivity defect
  // (g var - lhs)_+ at the parent gap must decay with the distance to the
  // perturbed region, in step with the (here trivially decaying) weak-LPPL
  // premise.
  {
    auto lppl_med = median_witness([&](int x, int axis) {
      return lppl_checks(rho, rho_star, embed(lat, pauli(lat, x, axis))).weak;
    });
    bool premise = trend_decays(lppl_med);
    double gap_star = spec_star.evals(1) - spec_star.evals(0);
    auto defect_med = median_witness([&](int x, int axis) {
      if (axis == 3) return 0.0;  // diagonal observables carry no variance here
      Matrix a = embed(lat, pauli(lat, x, axis));
      CoercivityWitness cw =
          coercivity_witness(h, rho, a, gap_star, CoercivityVariant::Exact);
      return std::max(0.0, cw.rhs - cw.lhs);
    });
    bool conclusion = trend_decays(defect_med) &&
                      defect_med.rbegin()->second < defect_med.begin()->second;
    rep.results.push_back(ImplicationResult{
        "(iv) LPPL => defective coercivity", true, premise && conclusion,
        "coercivity defect decays with distance to the perturbed region"});
  }

  // (viii): product ground state + gap decay => weak LDG, spot check with
  // beta = 1 support class (single sites trivially satisfy diam <= dist^beta)
  {
    bool ok = trend_decays(ldg_med);
    rep.results.push_back(ImplicationResult{
        "(viii) gap decay => weak LDG (beta=1 spot check)", true, ok,
        "weak-LDG witnesses decay for the product-ground-state family"});
  }

  // (ix): LDG => weak LDG is pointwise: same lhs, larger envelope
  {
    bool ok = true;
    DecayProfile dp{0.4, 1.0};
    SiteSet complement = lat.complement(gap_region);
    // envelope fitted for the strong form must dominate with the weak rhs too
    double cfit = 0.0;
    for (int x : gap_region.members()) {
      Matrix a = embed(lat, pauli(lat, x, 1));
      double w = ldg_witness(eq, wf, a, embed(lat, pauli(lat, x, 2)));
      int d = lat.set_distance(SiteSet{x}, complement);
      cfit = std::max(cfit, w / chi_dist(dp, 2 * d));
    }
    for (int x : gap_region.members()) {
      Matrix a = embed(lat, pauli(lat, x, 1));
      double w = ldg_witness(eq, wf, a, embed(lat, pauli(lat, x, 2)));
      int d = lat.set_distance(SiteSet{x}, complement);
      if (w > cfit * chi_dist(dp, d) * (1 + 1e-9) + 1e-18) ok = false;
    }
    rep.results.push_back(pointwise("(ix) LDG => weak LDG", ok,
                                    "strong-form envelope implies the weak-form envelope"));
  }

  return rep;
}

}  // namespace gaplab
