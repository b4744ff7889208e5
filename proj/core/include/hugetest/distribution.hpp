#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/permutation.hpp"

namespace hugetest {

class Rng;

struct Atom {
  BitVector point;
  double mass = 0.0;
};

inline constexpr double kMassTolerance = 1e-12;

// Finitely supported distribution over {0,1}^n. Masses are positive, sum to
// one within kMassTolerance, and support points are pairwise distinct.
class ExplicitDistribution {
 public:
  ExplicitDistribution(std::size_t dimension, std::vector<Atom> atoms);

  static ExplicitDistribution point_mass(BitVector v);
  // Uniform over the listed points; repeated points accumulate multiplicity.
  static ExplicitDistribution uniform(std::span<const BitVector> points);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }

  double mass_of(const BitVector& v) const;
  std::size_t sample_index(Rng& rng) const;
  const BitVector& sample(Rng& rng) const { return atoms_[sample_index(rng)].point; }

 private:
  std::size_t dimension_;
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

// Accumulates (point, mass) pairs, merging repeats, and emits a validated
// distribution with atoms in lexicographic order.
class DistributionBuilder {
 public:
  explicit DistributionBuilder(std::size_t dimension) : dimension_(dimension) {}
  void add(const BitVector& v, double mass);
  ExplicitDistribution build() const;
  // Rescales accumulated masses to sum exactly to one before building.
  ExplicitDistribution build_normalized() const;

 private:
  std::size_t dimension_;
  std::map<BitVector, double> masses_;
};

ExplicitDistribution permute_distribution(const ExplicitDistribution& d, const Permutation& p);

}  // namespace hugetest
