#pragma once

#include <limits>
#include <vector>

#include "gaplab/common.hpp"

namespace gaplab {

/// Distance sentinel for unreachable sites and empty-set distances.
/// Kept as a dedicated integer so comparisons stay exact.
inline constexpr int kDistInf = std::numeric_limits<int>::max();

/// A sorted set of site indices. The empty set is allowed.
class SiteSet {
 public:
  SiteSet() = default;
  SiteSet(std::initializer_list<int> sites);
  explicit SiteSet(std::vector<int> sites);

  const std::vector<int>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  int size() const { return static_cast<int>(members_.size()); }
  bool contains(int site) const;

  SiteSet unite(const SiteSet& other) const;
  SiteSet intersect(const SiteSet& other) const;
  bool subset_of(const SiteSet& other) const;

  bool operator==(const SiteSet& other) const { return members_ == other.members_; }
  bool operator<(const SiteSet& other) const { return members_ < other.members_; }

 private:
  std::vector<int> members_;  // sorted, unique
};

/// Finite graph with precomputed all-pairs graph distances and per-site
/// Hilbert dimensions. Immutable after construction.
class Lattice {
 public:
  Lattice(int num_sites, const std::vector<std::pair<int, int>>& edges, int site_dim = 2);

  int num_sites() const { return num_sites_; }
  int site_dim(int site) const { return site_dims_.at(site); }
  const std::vector<int>& site_dims() const { return site_dims_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  int dist(int x, int y) const { return dist_(x, y); }
  bool connected() const { return connected_; }
  int diameter() const { return diameter_; }

  /// Total Hilbert dimension of a subset (product of site dims).
  long long subset_dim(const SiteSet& s) const;
  long long total_dim() const;

  SiteSet all_sites() const;
  SiteSet complement(const SiteSet& s) const;

  /// min_{x in a, y in b} dist(x, y); kDistInf if either set is empty.
  int set_distance(const SiteSet& a, const SiteSet& b) const;

  /// max pairwise distance within s; 0 for empty sets and singletons.
  int set_diameter(const SiteSet& s) const;

  /// {x : dist(x, s) <= n}; empty stays empty.
  SiteSet fatten(const SiteSet& s, int n) const;

  /// Smallest C with sup_x |B_r(x)| <= 1 + C r^d for all integer r in
  /// [1, diameter]. Requires a connected lattice.
  double dimension_constant(int d) const;

 private:
  int num_sites_;
  std::vector<int> site_dims_;
  std::vector<std::pair<int, int>> edges_;
  Eigen::MatrixXi dist_;
  bool connected_ = true;
  int diameter_ = 0;
};

Lattice build_chain(int length, int site_dim = 2);
Lattice build_grid(int rows, int cols, int site_dim = 2);
Lattice build_ring(int length, int site_dim = 2);

}  // namespace gaplab
