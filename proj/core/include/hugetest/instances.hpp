#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hugetest/bitvector.hpp"
#include "hugetest/codes.hpp"
#include "hugetest/distribution.hpp"
#include "hugetest/metrics.hpp"
#include "hugetest/permutation.hpp"

namespace hugetest {

struct PvcParams {
  std::size_t k_rows = 8;
  std::size_t ell = 8;
  std::size_t ell_prime = 2;
  std::size_t k_prime = 2;
  std::size_t n = 16;
  std::uint64_t seed = 0;

  void validate() const;
};

// k_rows x ell matrix (rows of ell bits) whose columns are pairwise at
// Hamming distance >= k_rows/3. Columns come from the span of random
// generators; the draw is repeated until the separation holds.
std::vector<BitVector> gen_pvc_matrix(const PvcParams& p, std::size_t attempt_cap = 2000);

BitVector blow_up(const BitVector& row, std::size_t n);

// Columns of a row-list matrix.
std::vector<BitVector> matrix_columns(const std::vector<BitVector>& rows);
std::size_t min_column_distance(const std::vector<BitVector>& rows);

struct PvcInstance {
  ExplicitDistribution distribution;
  CorrespondingMatrix matrix;  // blown-up rows after the index permutation
  Permutation sigma;
};

PvcInstance gen_pvc_yes(const PvcParams& p);
PvcInstance gen_pvc_no_query(const PvcParams& p);
PvcInstance gen_pvc_no_sample(const PvcParams& p);

// Minimum over row and column permutations of the normalised matrix
// distance. For a fixed row order the best column matching is the EMD
// between the column distributions, so this searches row orders exhaustively
// (rows <= 8).
double pvc_exact_farness(const CorrespondingMatrix& l, const CorrespondingMatrix& m);

std::vector<BitVector> gen_far_codeword_set(std::size_t n, std::size_t count, std::size_t min_dist, std::uint64_t seed,
                                            std::size_t attempt_cap = 0);

enum class InstanceMode { Yes, No };

struct SuppHardParams {
  std::size_t n_supp = 0;
  double eta = 1.0 / 9.0;
  InstanceMode mode = InstanceMode::Yes;
};

// Weights over [2n], each a multiple of 1/(2n).
std::vector<double> gen_supp_hard(const SuppHardParams& p, std::uint64_t seed);

struct GapInstanceOptions {
  std::size_t z_count = 4;
};

struct GapInstance {
  ExplicitDistribution distribution;  // observed, after pi
  ExplicitDistribution canonical;
  Permutation pi;  // observed = apply_permutation(canonical, pi)
};

GapInstance gen_gap_distribution(const GapCodes& codes, const std::vector<double>& base, std::uint64_t seed,
                                 const GapInstanceOptions& options = {});

}  // namespace hugetest
