#include "gaplab/dynamics.hpp"

#include <stdexcept>

namespace gaplab {

namespace {

// Derivatives of theta(x) = exp(-1/x) (x > 0): theta^(k)(x) = theta(x) Q_k(1/x)
// with Q_0 = 1 and Q_{k+1}(u) = u^2 (Q_k(u) - Q_k'(u)).
std::vector<std::vector<double>> mollifier_poly_table(int max_order) {
  std::vector<std::vector<double>> q(max_order + 1);
  q[0] = {1.0};
  for (int k = 0; k < max_order; ++k) {
    const auto& cur = q[k];
    std::vector<double> next(cur.size() + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 2] += cur[i];                                   // u^2 Q_k
      if (i >= 1) next[i + 1] -= static_cast<double>(i) * cur[i];  // -u^2 Q_k'
    }
    q[k + 1] = std::move(next);
  }
  return q;
}

double theta_derivative(double x, int order, const std::vector<std::vector<double>>& table) {
  if (x <= 0.0) return 0.0;
  double u = 1.0 / x;
  double poly = 0.0;
  for (int i = static_cast<int>(table[order].size()) - 1; i >= 0; --i)
    poly = poly * u + table[order][i];
  return std::exp(-u) * poly;
}

}  // namespace

SwitchingFunction::SwitchingFunction(int derivative_order_max) : max_order_(derivative_order_max) {
  if (derivative_order_max < 1) throw std::invalid_argument("switching: order must be >= 1");
}

double SwitchingFunction::derivative(double t, int order) const {
  if (order > max_order_) throw std::invalid_argument("switching: derivative order too high");
  static const auto table = mollifier_poly_table(16);
  if (order > 16) throw std::invalid_argument("switching: order beyond table");
  if (t <= -1.0) return order == 0 ? 0.0 : 0.0;
  if (t >= 0.0) return order == 0 ? 1.0 : 0.0;
  // f = g/(g+h), g(t) = theta(1+t), h(t) = theta(-t)
  std::vector<double> gd(order + 1), hd(order + 1), sd(order + 1);
  for (int k = 0; k <= order; ++k) {
    gd[k] = theta_derivative(1.0 + t, k, table);
    hd[k] = (k % 2 ? -1.0 : 1.0) * theta_derivative(-t, k, table);
    sd[k] = gd[k] + hd[k];
  }
  // f s = g: f^(k) = (g^(k) - sum_{j<k} C(k,j) f^(j) s^(k-j)) / s
  std::vector<double> fd(order + 1);
  std::vector<std::vector<double>> binom(order + 1, std::vector<double>(order + 1, 0.0));
  for (int i = 0; i <= order; ++i) {
    binom[i][0] = 1.0;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + ((j <= i - 1) ? binom[i - 1][j] : 0.0);
  }
  for (int k = 0; k <= order; ++k) {
    double acc = gd[k];
    for (int j = 0; j < k; ++j) acc -= binom[k][j] * fd[j] * sd[k - j];
    fd[k] = acc / sd[0];
  }
  return fd[order];
}

namespace {

// exp(-i theta T) e1 for the tridiagonal Lanczos matrix.
Vector tridiag_exp_e1(const RealVector& alpha, const RealVector& beta, int m, double theta) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    t(j, j) = alpha(j);
    if (j + 1 < m) {
      t(j, j + 1) = beta(j);
      t(j + 1, j) = beta(j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXd y = es.eigenvectors().row(0).transpose();
  Vector z(m);
  for (int k = 0; k < m; ++k)
    z(k) = std::exp(Complex(0, -theta * es.eigenvalues()(k))) * y(k);
  return es.eigenvectors().cast<Complex>() * z;
}

}  // namespace

Vector expm_action(const Matrix& h, const Vector& psi, double theta, int max_krylov) {
  const int n = static_cast<int>(psi.size());
  const int m = std::min(max_krylov, n);
  double beta0 = psi.norm();
  if (beta0 < 1e-300) return psi;
  Matrix v(n, m);
  RealVector alpha(m), beta(m);
  v.col(0) = psi / beta0;
  int used = m;
  for (int j = 0; j < m; ++j) {
    Vector w = h * v.col(j);
    alpha(j) = std::real(v.col(j).dot(w));
    w -= alpha(j) * v.col(j);
    if (j > 0) w -= beta(j - 1) * v.col(j - 1);
    // full reorthogonalization (dims are desk scale)
    for (int k = 0; k <= j; ++k) w -= v.col(k).dot(w) * v.col(k);
    double b = w.norm();
    if (b < 1e-14 || j + 1 == m || j + 1 == n) {
      used = j + 1;
      break;
    }
    // a-posteriori stop: the Krylov residual enters through the last coefficient
    if (j >= 2) {
      Vector y = tridiag_exp_e1(alpha, beta, j + 1, theta);
      if (b * std::abs(y(j)) < 1e-16) {
        used = j + 1;
        break;
      }
    }
    beta(j) = b;
    v.col(j + 1) = w / b;
  }
  Vector coef = tridiag_exp_e1(alpha, beta, used, theta);
  return beta0 * (v.leftCols(used) * coef);
}

namespace {

struct Ensemble {
  std::vector<double> prob;
  std::vector<Vector> psi;

  GlobalState to_state(int dim) const {
    Matrix rho = Matrix::Zero(dim, dim);
    for (std::size_t k = 0; k < prob.size(); ++k) rho += prob[k] * (psi[k] * psi[k].adjoint());
    return GlobalState{std::move(rho)};
  }
};

Ensemble decompose_state(const GlobalState& rho0) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho0.rho);
  Ensemble e;
  for (int k = es.eigenvalues().size() - 1; k >= 0; --k) {
    if (es.eigenvalues()(k) > 1e-12) {
      e.prob.push_back(es.eigenvalues()(k));
      e.psi.push_back(es.eigenvectors().col(k));
    }
  }
  return e;
}

}  // namespace

Trajectory adiabatic_solve(const Matrix& h0, const Matrix& v, const SwitchingFunction& f,
                           double eps, double eta, const GlobalState& rho0, double t_start,
                           double t_end, const std::vector<double>& record_times, double tol) {
  if (eta <= 0.0 || eta > 1.0) throw std::invalid_argument("adiabatic_solve: eta in (0,1]");
  if (t_start > -1.0) throw std::invalid_argument("adiabatic_solve: t_start must be <= -1");
  {
    Matrix c = h0 * rho0.rho - rho0.rho * h0;
    if (c.norm() > 1e-8 * std::max(1.0, h0.norm()))
      throw std::invalid_argument("adiabatic_solve: rho0 must commute with H0");
  }
  const int dim = static_cast<int>(h0.rows());
  Ensemble ens = decompose_state(rho0);

  Trajectory traj;
  traj.eps = eps;
  traj.eta = eta;
  const double hcap = eta / 20.0;

  auto step_all = [&](std::vector<Vector>& cols, double t, double h) {
    double c = eps * f.value(t + 0.5 * h);
    Matrix hm = h0 + c * v;
    for (auto& col : cols) col = expm_action(hm, col, h / eta);
  };

  double t = t_start;
  std::size_t rec = 0;
  auto record_if_due = [&](double tcur) {
    while (rec < record_times.size() && record_times[rec] <= tcur + 1e-12) {
      traj.times.push_back(record_times[rec]);
      traj.states.push_back(ens.to_state(dim));
      ++rec;
    }
  };
  record_if_due(t);

  double h = hcap;
  while (t < t_end - 1e-13) {
    double target = (rec < record_times.size()) ? std::min(record_times[rec], t_end) : t_end;
    h = std::min({h, hcap, target - t});
    if (h < 1e-15) {
      record_if_due(t + 1e-12);
      continue;
    }
    std::vector<Vector> full = ens.psi;
    step_all(full, t, h);
    std::vector<Vector> halves = ens.psi;
    step_all(halves, t, 0.5 * h);
    step_all(halves, t + 0.5 * h, 0.5 * h);
    double err = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k) err = std::max(err, (full[k] - halves[k]).norm());
    traj.steps_taken += 3;
    if (err <= tol * std::max(h, 1e-12)) {
      ens.psi = std::move(halves);
      t += h;
      record_if_due(t);
      if (err < 0.25 * tol * h) h = std::min(2.0 * h, hcap);
    } else {
      h *= 0.5;
    }
  }
  record_if_due(t_end + 1.0);  // flush any remaining requested times at the end
  return traj;
}

LrProfile lr_profile(const Lattice& lat, const Interaction& phi, const LocalOperator& a,
                     const std::vector<int>& probe_sites, const std::vector<double>& times,
                     const DecayProfile& decay) {
  Matrix h = assemble(phi, lat);
  SpectralData spec = SpectralData::diagonalize(h);
  Matrix af = embed(lat, a);
  double norm_a = operator_norm(a.matrix);

  LrProfile out;
  for (double t : times) {
    Matrix at = heisenberg_evolve(spec, af, t);
    for (int y : probe_sites) {
      for (int axis = 1; axis <= 3; ++axis) {
        Matrix by = embed(lat, pauli(lat, y, axis));
        double cn = operator_norm(at * by - by * at);
        int d = lat.set_distance(a.support, SiteSet{y});
        out.rows.push_back({y, axis, t, d, cn, 0.0});
      }
    }
  }

  // Fit v by least squares on log data with C optimal per v, then lift C to
  // dominate every sample.
  std::vector<LrProfile::Row*> live;
  for (auto& r : out.rows)
    if (r.comm_norm > 1e-12 && r.time > 0) live.push_back(&r);
  if (live.empty()) {
    out.fitted_velocity = 0.0;
    out.fitted_prefactor = 0.0;
    out.dominated = true;
    for (auto& r : out.rows) r.envelope = 0.0;
    return out;
  }
  double best_v = 0.0, best_logc = 0.0, best_sse = std::numeric_limits<double>::infinity();
  for (int iv = 1; iv <= 400; ++iv) {
    double vel = 0.05 * iv;
    double mean = 0.0;
    for (auto* r : live) {
      double shape = (std::exp(decay.b * vel * std::abs(r->time)) - 1.0) *
                     chi_dist(decay, r->dist);
      mean += std::log(r->comm_norm) - std::log(std::max(shape, 1e-300));
    }
    mean /= static_cast<double>(live.size());
    double sse = 0.0;
    for (auto* r : live) {
      double shape = (std::exp(decay.b * vel * std::abs(r->time)) - 1.0) *
                     chi_dist(decay, r->dist);
      double res = std::log(r->comm_norm) - std::log(std::max(shape, 1e-300)) - mean;
      sse += res * res;
    }
    if (sse < best_sse) {
      best_sse = sse;
      best_v = vel;
      best_logc = mean;
    }
  }
  double c = std::exp(best_logc) * norm_a;
  // raise C until the envelope dominates all samples
  double lift = 1.0;
  for (auto& r : out.rows) {
    double shape = (std::exp(decay.b * best_v * std::abs(r.time)) - 1.0) * chi_dist(decay, r.dist);
    double env = c * shape;
    if (r.comm_norm > 0 && env > 0) lift = std::max(lift, r.comm_norm / env);
    if (r.comm_norm > 1e-12 && env == 0.0) lift = std::numeric_limits<double>::infinity();
  }
  c *= lift * (1.0 + 1e-9);
  out.fitted_velocity = best_v;
  out.fitted_prefactor = c;
  out.dominated = true;
  for (auto& r : out.rows) {
    r.envelope = c * (std::exp(decay.b * best_v * std::abs(r.time)) - 1.0) * chi_dist(decay, r.dist);
    if (r.comm_norm > r.envelope * (1.0 + 1e-9) && r.comm_norm > 1e-12) out.dominated = false;
  }
  return out;
}

}  // namespace gaplab
