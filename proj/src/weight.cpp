#include "gaplab/weight.hpp"

#include <cmath>
#include <stdexcept>

namespace gaplab {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double product_w_unnorm(const std::vector<double>& a, double t) {
  double out = 1.0;
  for (double an : a) {
    double s = sinc(an * t);
    out *= s * s;
    if (out == 0.0) return 0.0;
  }
  return out;
}

// Normalizing series for a_1: sum_{n>=2} 1/(n log^2 n) summed to n0 with the
// integral tail 1/log(n0).
double series_tail_corrected(long n0 = 1000000) {
  double s = 0.0;
  for (long n = n0; n >= 2; --n) {
    double ln = std::log(static_cast<double>(n));
    s += 1.0 / (static_cast<double>(n) * ln * ln);
  }
  return s + 1.0 / std::log(static_cast<double>(n0));
}

}  // namespace

WeightFunction WeightFunction::build(double g, int n_factors, QuadratureSpec quad) {
  if (g <= 0) throw std::invalid_argument("weight function needs g > 0");
  if (n_factors < 2) throw std::invalid_argument("need at least two product factors");
  WeightFunction wf;
  wf.g_ = g;
  wf.quad_ = quad;
  if (wf.quad_.t_max <= 0) wf.quad_.t_max = 200.0 / std::pow(g, 1.0 / 0.9);

  static const double kSeries = series_tail_corrected();
  double a1 = (g / 2.0) / (1.0 + kSeries);
  wf.a_.resize(n_factors);
  wf.a_[0] = a1;
  double included = a1;
  for (int n = 2; n <= n_factors; ++n) {
    double ln = std::log(static_cast<double>(n));
    wf.a_[n - 1] = a1 / (n * ln * ln);
    included += wf.a_[n - 1];
  }
  wf.tail_sum_a_ = g / 2.0 - included;

  // composite Gauss-Legendre grid on [-t_max, t_max]
  std::vector<double> xn, xw;
  gauss_legendre(wf.quad_.nodes, xn, xw);
  const int np = wf.quad_.panels;
  const double tmax = wf.quad_.t_max;
  wf.ts_.reserve(static_cast<std::size_t>(np) * wf.quad_.nodes);
  wf.wq_.reserve(wf.ts_.capacity());
  for (int p = 0; p < np; ++p) {
    double a = -tmax + 2.0 * tmax * p / np;
    double b = -tmax + 2.0 * tmax * (p + 1) / np;
    for (int k = 0; k < wf.quad_.nodes; ++k) {
      wf.ts_.push_back(0.5 * (b - a) * xn[k] + 0.5 * (a + b));
      wf.wq_.push_back(0.5 * (b - a) * xw[k]);
    }
  }
  wf.wv_.resize(wf.ts_.size());
  double z = 0.0;
  for (std::size_t i = 0; i < wf.ts_.size(); ++i) {
    wf.wv_[i] = product_w_unnorm(wf.a_, wf.ts_[i]);
    z += wf.wq_[i] * wf.wv_[i];
  }
  if (!(z > 0.0) || !std::isfinite(z)) throw std::runtime_error("weight normalization did not converge");
  wf.c_ = 1.0 / z;
  for (double& v : wf.wv_) v *= wf.c_;
  wf.m2_ = 0.0;
  for (std::size_t i = 0; i < wf.ts_.size(); ++i) wf.m2_ += wf.wq_[i] * wf.wv_[i] * wf.ts_[i] * wf.ts_[i];
  return wf;
}

double WeightFunction::eval_w(double t) const { return c_ * product_w_unnorm(a_, t); }

double WeightFunction::eval_W(double t) const {
  double ind = (t >= 0.0) ? 1.0 : 0.0;
  const double tmax = quad_.t_max;
  if (t <= -tmax) return ind;
  double cum = 0.0;
  if (t >= tmax) {
    for (std::size_t i = 0; i < ts_.size(); ++i) cum += wq_[i] * wv_[i];
  } else {
    const int per = quad_.nodes;
    const double panel_w = 2.0 * tmax / quad_.panels;
    int full = static_cast<int>(std::floor((t + tmax) / panel_w));
    if (full > quad_.panels) full = quad_.panels;
    for (int i = 0; i < full * per; ++i) cum += wq_[i] * wv_[i];
    double a = -tmax + full * panel_w;
    if (t > a) {
      std::vector<double> xn, xw;
      gauss_legendre(quad_.nodes, xn, xw);
      for (int k = 0; k < quad_.nodes; ++k) {
        double tk = 0.5 * (t - a) * xn[k] + 0.5 * (a + t);
        cum += 0.5 * (t - a) * xw[k] * eval_w(tk);
      }
    }
  }
  return -cum + ind;
}

double WeightFunction::fourier_E(double omega) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < ts_.size(); ++i) acc += wq_[i] * wv_[i] * std::cos(omega * ts_[i]);
  return acc;
}

double WeightFunction::eval_what(double omega) const {
  return fourier_E(omega) / std::sqrt(2.0 * kPi);
}

double WeightFunction::kernel_R(double omega) const {
  double ao = std::abs(omega);
  if (ao < 1e-6) return 0.5 * m2_ * omega;
  return (1.0 - fourier_E(omega)) / omega;
}

double WeightFunction::integral_check(int refine) const {
  QuadratureSpec q = quad_;
  q.panels *= refine;
  std::vector<double> xn, xw;
  gauss_legendre(q.nodes, xn, xw);
  double acc = 0.0;
  for (int p = 0; p < q.panels; ++p) {
    double a = -q.t_max + 2.0 * q.t_max * p / q.panels;
    double b = -q.t_max + 2.0 * q.t_max * (p + 1) / q.panels;
    for (int k = 0; k < q.nodes; ++k)
      acc += 0.5 * (b - a) * xw[k] * eval_w(0.5 * (b - a) * xn[k] + 0.5 * (a + b));
  }
  return acc;
}

double WeightFunction::envelope_constant(double q) const {
  double c = 0.0;
  for (std::size_t i = 0; i < ts_.size(); ++i) {
    double t = std::abs(ts_[i]);
    c = std::max(c, std::abs(wv_[i]) * std::exp(std::pow(t, q)));
  }
  c = std::max(c, eval_w(0.0));
  return c;
}

double WeightFunction::support_edge() const {
  double s = 0.0;
  for (double an : a_) s += 2.0 * an;
  return s;
}

WhatConvolution::WhatConvolution(const WeightFunction& wf, int max_grid_factors, int grid_points) {
  const double g = wf.g();
  const int m = grid_points;
  const double span = 1.1 * g;
  const double dw = 2.0 * span / (m - 1);
  omegas_.resize(m);
  for (int i = 0; i < m; ++i) omegas_[i] = -span + dw * i;

  // start from the widest factor's triangle, then convolve the next widest
  // resolvable factors; narrower factors go into the analytic widening tally.
  const auto& a = wf.a_seq();
  values_.assign(m, 0.0);
  double h0 = 2.0 * a[0];
  for (int i = 0; i < m; ++i) values_[i] = std::max(0.0, 1.0 - std::abs(omegas_[i]) / h0);
  double widening = 0.0;
  int used = 1;
  std::vector<double> next(m);
  for (std::size_t n = 1; n < a.size(); ++n) {
    double h = 2.0 * a[n];
    int halfw = static_cast<int>(std::floor(h / dw));
    if (used >= max_grid_factors || halfw < 2) {
      widening += h;
      continue;
    }
    std::vector<double> ker(2 * halfw + 1);
    double mass = 0.0;
    for (int j = -halfw; j <= halfw; ++j) {
      ker[j + halfw] = std::max(0.0, 1.0 - std::abs(j * dw) / h);
      mass += ker[j + halfw];
    }
    for (double& kv : ker) kv /= mass;
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = -halfw; j <= halfw; ++j) {
        int src = i - j;
        if (src >= 0 && src < m) acc += values_[src] * ker[j + halfw];
      }
      next[i] = acc;
    }
    values_.swap(next);
    ++used;
  }
  // account for the truncated tail of the infinite product as well
  support_edge_ = wf.support_edge();

  // normalize so eval(0) matches the quadrature value of what(0)
  int mid = (m - 1) / 2;
  double scale = wf.eval_what(0.0) / values_[mid];
  for (double& v : values_) v *= scale;

  // certified positivity: numerically positive radius of the convolved part
  // plus the exact widening from the skipped factors, capped by the support.
  double rnum = 0.0;
  for (int i = mid; i < m; ++i) {
    if (values_[i] > 0.0 && values_[2 * mid - i] > 0.0)
      rnum = omegas_[i];
    else
      break;
  }
  positive_radius_ = std::min(rnum + widening, support_edge_);
}

double WhatConvolution::eval(double omega) const {
  double x = std::abs(omega);
  if (x >= omegas_.back()) return 0.0;
  double dw = omegas_[1] - omegas_[0];
  double u = (x - omegas_.front()) / dw;
  int i0 = static_cast<int>(std::floor(u));
  if (i0 < 0) i0 = 0;
  if (i0 >= static_cast<int>(omegas_.size()) - 1) i0 = static_cast<int>(omegas_.size()) - 2;
  double f = u - i0;
  return values_[i0] * (1.0 - f) + values_[i0 + 1] * f;
}

}  // namespace gaplab
