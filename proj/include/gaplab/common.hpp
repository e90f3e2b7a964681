#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace gaplab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Deterministic, platform-independent PRNG (splitmix64 core).
/// std:: distributions are implementation-defined, so all random draws that
/// end up in result files go through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

  Complex cnormal() { return Complex(normal(), normal()); }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Random Hermitian matrix with entries of O(1) scale.
Matrix random_hermitian(int dim, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Matrix random_unitary(int dim, Rng& rng);

/// Largest singular value. Exact SVD for small matrices, power iteration on
/// A^dagger A above `svd_cutoff` (default keeps 10-site operators tractable).
double operator_norm(const Matrix& a, int svd_cutoff = 384);

/// Sum of singular values.
double trace_norm(const Matrix& a);

double hermiticity_defect(const Matrix& a);

/// FNV-1a over the raw matrix bytes; used to tag spectral data.
std::uint64_t matrix_hash(const Matrix& a);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gaplab
