#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/distribution.hpp"

namespace hugetest {

double hamming_norm(const BitVector& u, const BitVector& v);
double projected_distance(const BitVector& u, const BitVector& v, std::span<const std::size_t> indices);

// s x n binary matrix; each row carries mass 1/s.
class CorrespondingMatrix {
 public:
  explicit CorrespondingMatrix(std::vector<BitVector> rows);
  static CorrespondingMatrix from_distribution(const ExplicitDistribution& d, std::size_t rows);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return rows_.front().size(); }
  const BitVector& row(std::size_t i) const { return rows_.at(i); }
  const std::vector<BitVector>& row_vectors() const noexcept { return rows_; }

  ExplicitDistribution to_distribution() const;
  // Column j read top to bottom, as a vector of length rows().
  BitVector column(std::size_t j) const;

 private:
  std::vector<BitVector> rows_;
};

struct FlowPair {
  std::size_t source = 0;  // atom index in the first distribution
  std::size_t target = 0;  // atom index in the second distribution
  double mass = 0.0;
};

struct FlowSolution {
  std::vector<FlowPair> pairs;
  double objective = 0.0;
};

struct EmdResult {
  double value = 0.0;
  FlowSolution flow;
};

EmdResult emd_exact(const ExplicitDistribution& d1, const ExplicitDistribution& d2);
double emd(const ExplicitDistribution& d1, const ExplicitDistribution& d2);

// Recomputes the transport objective from the pairs and checks marginals.
// Throws std::logic_error when a marginal misses by more than `tolerance`.
double verify_flow(const ExplicitDistribution& d1, const ExplicitDistribution& d2, const FlowSolution& flow,
                   double tolerance = 1e-9);

double l1_distance(const ExplicitDistribution& d1, const ExplicitDistribution& d2);

double min_perm_matrix_distance(const CorrespondingMatrix& l, const CorrespondingMatrix& m);

enum class PermutationSearch { Exact, Heuristic };

inline constexpr std::size_t kExactPermutationMaxDimension = 8;

struct PermutedEmd {
  double value = 0.0;
  Permutation sigma;  // d2 is compared as permute_distribution(d2, sigma)
};

PermutedEmd emd_up_to_index_permutation_detail(const ExplicitDistribution& d1, const ExplicitDistribution& d2,
                                               PermutationSearch mode);
double emd_up_to_index_permutation(const ExplicitDistribution& d1, const ExplicitDistribution& d2,
                                   PermutationSearch mode);

}  // namespace hugetest
