#include "gaplab/common.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace gaplab {

Matrix random_hermitian(int dim, Rng& rng) {
  Matrix x(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) x(i, j) = rng.cnormal();
  return 0.5 * (x + x.adjoint());
}

Matrix random_unitary(int dim, Rng& rng) {
  Matrix x(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) x(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    double ad = std::abs(d);
    q.col(j) *= (ad > 0) ? d / ad : Complex(1, 0);
  }
  return q;
}

double operator_norm(const Matrix& a, int svd_cutoff) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() <= svd_cutoff && a.cols() <= svd_cutoff) {
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
  }
  // power iteration on a^dagger a with a fixed start vector
  const int n = static_cast<int>(a.cols());
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(1.0 + 0.5 * i / n, 0.25 * ((i * 7) % 13) / 13.0);
  v.normalize();
  double lam = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Vector w = a * v;
    Vector z = a.adjoint() * w;
    double nz = z.norm();
    if (nz < 1e-280) return 0.0;
    double lam_new = std::sqrt(nz);
    v = z / nz;
    if (std::abs(lam_new - lam) <= 1e-13 * lam_new && it > 4) return lam_new;
    lam = lam_new;
  }
  return lam;
}

double trace_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues().sum();
}

double hermiticity_defect(const Matrix& a) { return (a - a.adjoint()).norm(); }

std::uint64_t matrix_hash(const Matrix& a) {
  const unsigned char* p = reinterpret_cast<const unsigned char*>(a.data());
  std::size_t bytes = sizeof(Complex) * static_cast<std::size_t>(a.size());
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  double den = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.residual_rms = std::sqrt(ss / n);
  return f;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  return fit_line(x, y).slope;
}

}  // namespace gaplab
