#include "gaplab/neass.hpp"

#include <atomic>
#include <map>
#include <stdexcept>
#include <thread>

namespace gaplab {

void NeassExpansion::assemble_s() {
  if (generators.empty()) {
    s.resize(0, 0);
    return;
  }
  s = Matrix::Zero(generators[0].rows(), generators[0].cols());
  double ep = 1.0;
  for (const auto& a : generators) {
    ep *= eps;
    s += ep * a;
  }
}

std::vector<std::vector<int>> compositions(int total, int max_part) {
  std::vector<std::vector<int>> out;
  if (total == 0) {
    out.push_back({});
    return out;
  }
  if (max_part < 1) return out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int rem) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int first = 1; first <= std::min(rem, max_part); ++first) {
      cur.push_back(first);
      rec(rem - first);
      cur.pop_back();
    }
  };
  rec(total);
  return out;
}

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Matrix ad_minus_i(const Matrix& a, const Matrix& x) {
  return Complex(0, -1) * (a * x - x * a);
}

// sum over ordered compositions of `total` with parts <= max_part and at
// least `min_parts` parts, of 1/k! ad_{-iA_mu1} ... ad_{-iA_muk}(seed),
// optionally with one leading slot taken by a separate operator family
// (used for the eta/eps Adot terms where the innermost operator varies).
Matrix composition_sum(const std::vector<Matrix>& gens, const Matrix& seed, int total,
                       int max_part, int min_parts) {
  Matrix acc = Matrix::Zero(seed.rows(), seed.cols());
  for (const auto& comp : compositions(total, max_part)) {
    int k = static_cast<int>(comp.size());
    if (k < min_parts) continue;
    Matrix m = seed;
    for (auto it = comp.rbegin(); it != comp.rend(); ++it) m = ad_minus_i(gens[*it - 1], m);
    acc += m / factorial(k);
  }
  return acc;
}

}  // namespace

Matrix eps_coefficient(const std::vector<Matrix>& generators, const Matrix& h0, const Matrix& v,
                       int j) {
  if (j <= 0) throw std::invalid_argument("eps_coefficient: j must be positive");
  if (static_cast<int>(generators.size()) < j - 1)
    throw std::invalid_argument("eps_coefficient: generators A_1..A_{j-1} required");
  // from H0: compositions of j with parts < j (k >= 2 follows automatically)
  Matrix out = composition_sum(generators, h0, j, j - 1, 2);
  // from eps V: compositions of j-1 with parts < j
  out += composition_sum(generators, v, j - 1, j - 1, 0);
  return out;
}

Matrix eps_coefficient_td(const std::vector<Matrix>& generators,
                          const std::vector<Matrix>& generator_dots, const Matrix& h0,
                          const Matrix& v_of_t, double eta_over_eps, int j) {
  Matrix out = eps_coefficient(generators, h0, v_of_t, j);
  // eta-term: eta int_0^1 e^{-i lambda S} Sdot e^{i lambda S} d lambda
  // contributes, at joint order j (eta counted once),
  // (eta/eps) sum_{k} 1/(k+1)! sum_{mu0 + mu1..muk = j-1} ad...(Adot_mu0).
  for (int mu0 = 1; mu0 <= j - 1; ++mu0) {
    if (mu0 > static_cast<int>(generator_dots.size())) break;
    const Matrix& seed = generator_dots[mu0 - 1];
    for (const auto& comp : compositions(j - 1 - mu0, j - 1)) {
      int k = static_cast<int>(comp.size());
      Matrix m = seed;
      for (auto it = comp.rbegin(); it != comp.rend(); ++it)
        m = ad_minus_i(generators[*it - 1], m);
      out += (eta_over_eps / factorial(k + 1)) * m;
    }
  }
  return out;
}

NeassExpansion build_static_neass(const Matrix& h0, const Matrix& v, const WeightFunction& wf,
                                  int n, double eps) {
  if (n < 0 || n > 4) throw std::invalid_argument("NEASS order supported up to n = 4");
  SpectralData spec = SpectralData::diagonalize(h0);
  NeassExpansion exp;
  exp.order = n;
  exp.eps = eps;
  exp.gap = wf.g();
  for (int j = 1; j <= n; ++j) {
    Matrix r = eps_coefficient(exp.generators, h0, v, j);
    exp.generators.push_back(inverse_liouvillian(spec, wf, r));
  }
  exp.assemble_s();
  return exp;
}

namespace {

struct TdBuilder {
  const Matrix& h0;
  const Matrix& v;
  const SwitchingFunction& f;
  const WeightFunction& wf;
  const SpectralData& spec;
  double eps, eta, fd_step, fd_tol;
  std::map<std::pair<int, long long>, Matrix> memo;  // (mu, quantized time) -> A_mu

  long long quantize(double t) const { return llround(t * 1e9); }

  Matrix a_mu(int mu, double t) {
    auto key = std::make_pair(mu, quantize(t));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Matrix> gens, dots;
    for (int nu = 1; nu < mu; ++nu) {
      gens.push_back(a_mu(nu, t));
      dots.push_back(a_dot(nu, t));
    }
    Matrix vt = f.value(t) * v;
    Matrix r = eps_coefficient_td(gens, dots, h0, vt, eta / eps, mu);
    Matrix a = inverse_liouvillian(spec, wf, r);
    memo.emplace(key, a);
    return a;
  }

  Matrix a_dot(int mu, double t) {
    auto diff = [&](double h) {
      return ((a_mu(mu, t + h) - a_mu(mu, t - h)) / (2.0 * h)).eval();
    };
    Matrix d1 = diff(fd_step);
    Matrix d2 = diff(0.5 * fd_step);
    Matrix rich = (4.0 * d2 - d1) / 3.0;
    double scale = std::max(1.0, rich.norm());
    if ((d2 - d1).norm() > fd_tol * 4.0 * scale)
      throw std::runtime_error("time-derivative extrapolation disagreement");
    return rich;
  }
};

}  // namespace

NeassExpansion build_time_dependent_neass(const Matrix& h0, const Matrix& v,
                                          const SwitchingFunction& f, const WeightFunction& wf,
                                          int n, double eps, double eta, double t, double fd_step,
                                          double fd_tol) {
  if (n < 0 || n > 4) throw std::invalid_argument("NEASS order supported up to n = 4");
  SpectralData spec = SpectralData::diagonalize(h0);
  TdBuilder builder{h0, v, f, wf, spec, eps, eta, fd_step, fd_tol, {}};
  NeassExpansion exp;
  exp.order = n;
  exp.eps = eps;
  exp.eta = eta;
  exp.gap = wf.g();
  for (int mu = 1; mu <= n; ++mu) exp.generators.push_back(builder.a_mu(mu, t));
  exp.assemble_s();
  return exp;
}

GlobalState neass_state(const NeassExpansion& exp, const GlobalState& rho0) {
  if (exp.generators.empty()) return rho0;
  if (exp.s.rows() != rho0.rho.rows()) throw std::invalid_argument("neass_state: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(exp.s);
  Vector phase(es.eigenvalues().size());
  for (int i = 0; i < phase.size(); ++i) phase(i) = std::exp(Complex(0, es.eigenvalues()(i)));
  Matrix u = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  return GlobalState{u * rho0.rho * u.adjoint()};
}

double kubo_sigma1(const SpectralData& spec_h0, const WeightFunction& wf, const Matrix& v,
                   const GlobalState& rho0, const Matrix& b) {
  Matrix iv = inverse_liouvillian(spec_h0, wf, v);
  Complex val = Complex(0, -1) * ((rho0.rho * (iv * b - b * iv)).trace());
  if (std::abs(val.imag()) > 1e-10 * std::max(1.0, std::abs(val.real())))
    throw std::runtime_error("kubo_sigma1: unexpected imaginary part");
  return val.real();
}

std::vector<double> response_expansion(const NeassExpansion& exp, const GlobalState& rho0,
                                       const Matrix& b, int m) {
  if (m > exp.order) throw std::invalid_argument("response_expansion: m exceeds the built order");
  std::vector<double> sigma;
  for (int j = 1; j <= m; ++j) {
    Complex acc(0, 0);
    for (const auto& comp : compositions(j, exp.order)) {
      int k = static_cast<int>(comp.size());
      if (k == 0) continue;
      bool ok = true;
      for (int mu : comp)
        if (mu > static_cast<int>(exp.generators.size())) ok = false;
      if (!ok) continue;
      Matrix mtx = b;
      for (auto it = comp.rbegin(); it != comp.rend(); ++it)
        mtx = Complex(0, -1) * (exp.generators[*it - 1] * mtx - mtx * exp.generators[*it - 1]);
      acc += (rho0.rho * mtx).trace() / factorial(k);
    }
    sigma.push_back(acc.real());
  }
  return sigma;
}

double eta_from_rule(const std::string& rule, double eps) {
  if (rule == "sqrt") return std::sqrt(eps);
  if (rule.rfind("pow:", 0) == 0) return std::pow(eps, std::stod(rule.substr(4)));
  if (rule.rfind("fixed:", 0) == 0) return std::stod(rule.substr(6));
  throw std::invalid_argument("unknown eta rule: " + rule);
}

ResponseTable response_sweep(const Matrix& h0, const Matrix& v, const GlobalState& rho0,
                             const Matrix& b, const WeightFunction& wf, int n,
                             const std::vector<double>& eps_grid, const std::string& eta_rule,
                             double t_eval, const SwitchingFunction& f, double solver_tol,
                             int threads) {
  ResponseTable table;
  table.b0 = std::real(expectation(rho0, b));
  NeassExpansion exp;
  if (n > 0) {
    exp = build_static_neass(h0, v, wf, n, 1.0);
    table.sigma = response_expansion(exp, rho0, b, n);
  }

  table.rows.resize(eps_grid.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= eps_grid.size()) return;
      double eps = eps_grid[i];
      double eta = eta_from_rule(eta_rule, eps);
      ResponseRow row;
      row.eps = eps;
      row.eta = eta;
      row.t = t_eval;
      if (eps == 0.0) {
        row.sigma_measured = 0.0;
      } else {
        Trajectory traj =
            adiabatic_solve(h0, v, f, eps, eta, rho0, -1.0, t_eval, {t_eval}, solver_tol);
        row.sigma_measured = std::real(expectation(traj.states.back(), b)) - table.b0;
      }
      double partial = 0.0, ep = 1.0;
      for (int k = 1; k <= n; ++k) {
        ep *= eps;
        partial += ep * table.sigma[k - 1];
        row.partial_sums.push_back(partial);
      }
      row.residual = row.sigma_measured - (n > 0 ? row.partial_sums.back() : 0.0);
      table.rows[i] = std::move(row);
    }
  };
  int nt = std::max(1, std::min<int>(threads, static_cast<int>(eps_grid.size())));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (int k = 1; k <= n; ++k) {
    std::vector<double> lx, ly;
    for (const auto& row : table.rows) {
      if (row.eps <= 0) continue;
      double partial = 0.0, ep = 1.0;
      for (int j = 1; j <= k; ++j) {
        ep *= row.eps;
        partial += ep * table.sigma[j - 1];
      }
      double res = std::abs(row.sigma_measured - partial);
      lx.push_back(std::log(row.eps));
      ly.push_back(std::log(std::max(res, 1e-300)));
    }
    table.slopes.push_back(lx.size() >= 2 ? fit_slope(lx, ly) : 0.0);
  }
  return table;
}

StationarityTable neass_stationarity(const Matrix& h0, const Matrix& v, const GlobalState& rho0,
                                     const Matrix& b, const WeightFunction& wf, int n,
                                     const std::vector<double>& eps_grid,
                                     const std::vector<double>& t_grid) {
  StationarityTable table;
  NeassExpansion base = build_static_neass(h0, v, wf, n, 1.0);
  for (double eps : eps_grid) {
    NeassExpansion exp = base;
    exp.eps = eps;
    exp.assemble_s();
    GlobalState pi = neass_state(exp, rho0);
    Matrix heps = h0 + eps * v;
    SpectralData spec = SpectralData::diagonalize(heps);
    double bpi = std::real(expectation(pi, b));
    double dev = 0.0;
    std::vector<std::pair<double, double>> curve;
    for (double t : t_grid) {
      Matrix bt = heisenberg_evolve(spec, b, t);
      double d = std::abs(std::real(expectation(pi, bt)) - bpi);
      curve.emplace_back(t, d);
      dev = std::max(dev, d);
    }
    table.rows.push_back({eps, dev});
    table.deviation_curves.push_back(std::move(curve));
  }
  std::vector<double> lx, ly;
  for (const auto& r : table.rows)
    if (r.eps > 0 && r.max_deviation > 0) {
      lx.push_back(std::log(r.eps));
      ly.push_back(std::log(r.max_deviation));
    }
  table.slope = lx.size() >= 2 ? fit_slope(lx, ly) : 0.0;
  return table;
}

}  // namespace gaplab
