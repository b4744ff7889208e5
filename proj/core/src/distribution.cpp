#include "hugetest/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hugetest/error.hpp"
#include "hugetest/rng.hpp"

namespace hugetest {

ExplicitDistribution::ExplicitDistribution(std::size_t dimension, std::vector<Atom> atoms)
    : dimension_(dimension), atoms_(std::move(atoms)) {
  if (dimension_ == 0) throw InvalidArgument("distribution dimension must be positive");
  if (atoms_.empty()) throw InvalidArgument("distribution support is empty");
  long double total = 0.0L;
  for (const auto& a : atoms_) {
    if (a.point.size() != dimension_) throw InvalidArgument("support vector length differs from dimension");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw InvalidArgument("probabilities must be strictly positive");
    total += a.mass;
  }
  if (std::fabs(static_cast<double>(total - 1.0L)) > kMassTolerance) {
    throw InvalidArgument("probabilities sum to " + std::to_string(static_cast<double>(total)) + ", not 1");
  }
  std::vector<const BitVector*> order;
  order.reserve(atoms_.size());
  for (const auto& a : atoms_) order.push_back(&a.point);
  std::sort(order.begin(), order.end(), [](const BitVector* x, const BitVector* y) { return *x < *y; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (*order[i] == *order[i - 1]) throw InvalidArgument("support vectors are not pairwise distinct");
  }
  cumulative_.reserve(atoms_.size());
  double acc = 0.0;
  for (const auto& a : atoms_) {
    acc += a.mass;
    cumulative_.push_back(acc);
  }
}

ExplicitDistribution ExplicitDistribution::point_mass(BitVector v) {
  const std::size_t n = v.size();
  return ExplicitDistribution(n, {Atom{std::move(v), 1.0}});
}

ExplicitDistribution ExplicitDistribution::uniform(std::span<const BitVector> points) {
  if (points.empty()) throw InvalidArgument("uniform distribution over an empty list");
  std::map<BitVector, std::size_t> counts;
  for (const auto& p : points) ++counts[p];
  std::vector<Atom> atoms;
  atoms.reserve(counts.size());
  const double total = static_cast<double>(points.size());
  for (const auto& [v, c] : counts) atoms.push_back({v, static_cast<double>(c) / total});
  return ExplicitDistribution(points.front().size(), std::move(atoms));
}

double ExplicitDistribution::mass_of(const BitVector& v) const {
  for (const auto& a : atoms_) {
    if (a.point == v) return a.mass;
  }
  return 0.0;
}

std::size_t ExplicitDistribution::sample_index(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) return atoms_.size() - 1;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

void DistributionBuilder::add(const BitVector& v, double mass) {
  if (v.size() != dimension_) throw InvalidArgument("builder point length differs from dimension");
  if (mass < 0.0) throw InvalidArgument("negative mass");
  if (mass == 0.0) return;
  masses_[v] += mass;
}

ExplicitDistribution DistributionBuilder::build() const {
  std::vector<Atom> atoms;
  atoms.reserve(masses_.size());
  for (const auto& [v, m] : masses_) atoms.push_back({v, m});
  return ExplicitDistribution(dimension_, std::move(atoms));
}

ExplicitDistribution DistributionBuilder::build_normalized() const {
  long double total = 0.0L;
  for (const auto& [v, m] : masses_) total += m;
  if (!(total > 0.0L)) throw InvalidArgument("builder has no mass");
  std::vector<Atom> atoms;
  atoms.reserve(masses_.size());
  for (const auto& [v, m] : masses_) atoms.push_back({v, static_cast<double>(m / total)});
  return ExplicitDistribution(dimension_, std::move(atoms));
}

ExplicitDistribution permute_distribution(const ExplicitDistribution& d, const Permutation& p) {
  if (d.dimension() != p.size()) throw InvalidArgument("distribution dimension does not match permutation");
  std::vector<Atom> atoms;
  atoms.reserve(d.support_size());
  for (const auto& a : d.atoms()) atoms.push_back({apply_permutation(a.point, p), a.mass});
  return ExplicitDistribution(d.dimension(), std::move(atoms));
}

}  // namespace hugetest
