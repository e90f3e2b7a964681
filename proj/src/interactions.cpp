#include "gaplab/interactions.hpp"

#include <stdexcept>

namespace gaplab {

double chi(const DecayProfile& profile, double x) {
  if (x < 0) throw std::invalid_argument("chi: negative argument");
  if (profile.b <= 0 || profile.p <= 0 || profile.p > 1)
    throw std::invalid_argument("chi: need b > 0 and p in (0,1]");
  return std::exp(-profile.b * std::pow(x, profile.p));
}

double chi_dist(const DecayProfile& profile, int dist) {
  if (dist == kDistInf) return 0.0;
  return chi(profile, static_cast<double>(dist));
}

void Interaction::add_term(const Lattice& lat, const LocalOperator& op) {
  double scale = std::max(op.matrix.norm(), 1e-300);
  if (hermiticity_defect(op.matrix) > 1e-10 * scale)
    throw std::invalid_argument("interaction term must be Hermitian");
  if (!op.support.empty() && op.support.members().back() >= lat.num_sites())
    throw std::invalid_argument("interaction term support outside lattice");
  add_term_raw(op);
}

void Interaction::add_term_raw(LocalOperator op) {
  if (op.support.empty()) throw std::invalid_argument("interaction term needs nonempty support");
  auto key = op.support.members();
  auto it = terms_.find(key);
  if (it == terms_.end())
    terms_.emplace(std::move(key), std::move(op));
  else
    it->second.matrix += op.matrix;
}

Interaction Interaction::scaled(double factor) const {
  Interaction out;
  for (const auto& [key, op] : terms_) {
    LocalOperator t = op;
    t.matrix *= factor;
    out.terms_.emplace(key, std::move(t));
  }
  return out;
}

Interaction Interaction::plus(const Lattice& lat, const Interaction& other) const {
  Interaction out = *this;
  for (const auto& [key, op] : other.terms_) out.add_term(lat, op);
  return out;
}

Matrix assemble(const Interaction& phi, const Lattice& lat) {
  long long d = lat.total_dim();
  Matrix h = Matrix::Zero(d, d);
  for (const auto& [key, op] : phi.terms()) h += embed(lat, op);
  return h;
}

namespace {

double term_norm(const LocalOperator& op) { return operator_norm(op.matrix); }

}  // namespace

double interaction_norm(const Interaction& phi, const Lattice& lat, const DecayProfile& profile) {
  double best = 0.0;
  for (int z = 0; z < lat.num_sites(); ++z) {
    double acc = 0.0;
    for (const auto& [key, op] : phi.terms()) {
      if (!op.support.contains(z)) continue;
      acc += term_norm(op) / chi_dist(profile, lat.set_diameter(op.support));
    }
    best = std::max(best, acc);
  }
  return best;
}

double localized_norm(const Interaction& phi, const Lattice& lat, const DecayProfile& profile,
                      const SiteSet& omega) {
  double best = 0.0;
  for (int z = 0; z < lat.num_sites(); ++z) {
    double acc = 0.0;
    double zdist = chi_dist(profile, lat.set_distance(SiteSet{z}, omega));
    for (const auto& [key, op] : phi.terms()) {
      if (!op.support.contains(z)) continue;
      double w = chi_dist(profile, lat.set_diameter(op.support)) * zdist;
      if (w <= 0) return std::numeric_limits<double>::infinity();
      acc += term_norm(op) / w;
    }
    best = std::max(best, acc);
  }
  return best;
}

bool is_strictly_localized(const Interaction& phi, const SiteSet& omega) {
  for (const auto& [key, op] : phi.terms())
    if (!op.support.subset_of(omega)) return false;
  return true;
}

bool is_strongly_localized(const Interaction& phi, const SiteSet& omega) {
  for (const auto& [key, op] : phi.terms())
    if (op.support.intersect(omega).empty()) return false;
  return true;
}

Interaction commutator_interaction(const Lattice& lat, const Interaction& a, const Interaction& b) {
  std::map<std::vector<int>, LocalOperator> acc;
  for (const auto& [ka, ta] : a.terms()) {
    for (const auto& [kb, tb] : b.terms()) {
      if (ta.support.intersect(tb.support).empty()) continue;
      LocalOperator c = local_commutator(lat, ta, tb);
      auto it = acc.find(c.support.members());
      if (it == acc.end())
        acc.emplace(c.support.members(), std::move(c));
      else
        it->second.matrix += c.matrix;
    }
  }
  Interaction out;
  for (auto& [key, op] : acc) {
    if (operator_norm(op.matrix) < kTermDropThreshold) continue;
    // Commutators of Hermitian terms are anti-Hermitian, so these terms skip
    // the Hermiticity gate that model-built interactions go through.
    out.add_term_raw(LocalOperator{op.support, std::move(op.matrix), false});
  }
  return out;
}

}  // namespace gaplab
