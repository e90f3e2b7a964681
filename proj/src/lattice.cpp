#include "gaplab/lattice.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace gaplab {

SiteSet::SiteSet(std::initializer_list<int> sites) : SiteSet(std::vector<int>(sites)) {}

SiteSet::SiteSet(std::vector<int> sites) : members_(std::move(sites)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool SiteSet::contains(int site) const {
  return std::binary_search(members_.begin(), members_.end(), site);
}

SiteSet SiteSet::unite(const SiteSet& other) const {
  std::vector<int> out;
  out.reserve(members_.size() + other.members_.size());
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(out));
  return SiteSet(std::move(out));
}

SiteSet SiteSet::intersect(const SiteSet& other) const {
  std::vector<int> out;
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out));
  return SiteSet(std::move(out));
}

bool SiteSet::subset_of(const SiteSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

Lattice::Lattice(int num_sites, const std::vector<std::pair<int, int>>& edges, int site_dim)
    : num_sites_(num_sites), site_dims_(num_sites, site_dim), edges_(edges) {
  if (num_sites < 1) throw std::invalid_argument("lattice needs at least one site");
  if (site_dim < 2) throw std::invalid_argument("site dimension must be >= 2");
  std::vector<std::vector<int>> adj(num_sites);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_sites || b >= num_sites || a == b)
      throw std::invalid_argument("invalid edge");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  dist_.setConstant(num_sites, num_sites, kDistInf);
  for (int s = 0; s < num_sites; ++s) {
    dist_(s, s) = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      for (int v : adj[u]) {
        if (dist_(s, v) == kDistInf) {
          dist_(s, v) = dist_(s, u) + 1;
          q.push_back(v);
        }
      }
    }
  }
  for (int i = 0; i < num_sites; ++i)
    for (int j = 0; j < num_sites; ++j) {
      if (dist_(i, j) == kDistInf)
        connected_ = false;
      else
        diameter_ = std::max(diameter_, dist_(i, j));
    }
}

long long Lattice::subset_dim(const SiteSet& s) const {
  long long d = 1;
  for (int x : s.members()) d *= site_dim(x);
  return d;
}

long long Lattice::total_dim() const {
  long long d = 1;
  for (int x : site_dims_) d *= x;
  return d;
}

SiteSet Lattice::all_sites() const {
  std::vector<int> v(num_sites_);
  for (int i = 0; i < num_sites_; ++i) v[i] = i;
  return SiteSet(std::move(v));
}

SiteSet Lattice::complement(const SiteSet& s) const {
  std::vector<int> v;
  for (int i = 0; i < num_sites_; ++i)
    if (!s.contains(i)) v.push_back(i);
  return SiteSet(std::move(v));
}

int Lattice::set_distance(const SiteSet& a, const SiteSet& b) const {
  if (a.empty() || b.empty()) return kDistInf;
  int best = kDistInf;
  for (int x : a.members())
    for (int y : b.members()) best = std::min(best, dist_(x, y));
  return best;
}

int Lattice::set_diameter(const SiteSet& s) const {
  int best = 0;
  const auto& m = s.members();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      int d = dist_(m[i], m[j]);
      if (d != kDistInf) best = std::max(best, d);
    }
  return best;
}

SiteSet Lattice::fatten(const SiteSet& s, int n) const {
  if (s.empty()) return s;
  std::vector<int> out;
  for (int x = 0; x < num_sites_; ++x) {
    for (int y : s.members()) {
      if (dist_(x, y) != kDistInf && dist_(x, y) <= n) {
        out.push_back(x);
        break;
      }
    }
  }
  return SiteSet(std::move(out));
}

double Lattice::dimension_constant(int d) const {
  if (!connected_) throw std::invalid_argument("dimension_constant needs a connected lattice");
  double c = 0.0;
  for (int x = 0; x < num_sites_; ++x) {
    std::vector<int> count(diameter_ + 1, 0);
    for (int y = 0; y < num_sites_; ++y) count[dist_(x, y)]++;
    int ball = 0;
    for (int r = 0; r <= diameter_; ++r) {
      ball += count[r];
      if (r >= 1) c = std::max(c, (ball - 1.0) / std::pow(static_cast<double>(r), d));
    }
  }
  return c;
}

Lattice build_chain(int length, int site_dim) {
  if (length < 1) throw std::invalid_argument("chain length must be >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < length; ++i) edges.emplace_back(i, i + 1);
  return Lattice(length, edges, site_dim);
}

Lattice build_grid(int rows, int cols, int site_dim) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("grid dims must be >= 1");
  std::vector<std::pair<int, int>> edges;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  return Lattice(rows * cols, edges, site_dim);
}

Lattice build_ring(int length, int site_dim) {
  if (length < 3) throw std::invalid_argument("ring length must be >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < length; ++i) edges.emplace_back(i, (i + 1) % length);
  return Lattice(length, edges, site_dim);
}

}  // namespace gaplab
