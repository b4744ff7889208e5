#include "hugetest/instances.hpp"

#include <algorithm>
#include <cmath>

#include "hugetest/cluster.hpp"
#include "hugetest/error.hpp"
#include "hugetest/gap.hpp"
#include "hugetest/rng.hpp"

namespace hugetest {

void PvcParams::validate() const {
  if (k_rows == 0 || ell == 0 || ell_prime == 0 || k_prime == 0 || n == 0) {
    throw InvalidArgument("P_vc sizes must be positive");
  }
  if (k_rows > 64) throw InvalidArgument("k_rows must be at most 64");
  if (n % ell != 0) throw InvalidArgument("ell must divide n");
  if (ell_prime > ell || n % ell_prime != 0) throw InvalidArgument("ell_prime must be at most ell and divide n");
  if (k_prime > k_rows) throw InvalidArgument("k_prime must be at most k_rows");
}

std::vector<BitVector> matrix_columns(const std::vector<BitVector>& rows) {
  if (rows.empty()) throw InvalidArgument("matrix has no rows");
  std::vector<BitVector> cols(rows.front().size(), BitVector(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (rows[i][j]) cols[j].set(i, true);
    }
  }
  return cols;
}

std::size_t min_column_distance(const std::vector<BitVector>& rows) {
  const auto cols = matrix_columns(rows);
  std::size_t best = rows.size() + 1;
  for (std::size_t a = 0; a < cols.size(); ++a) {
    for (std::size_t b = a + 1; b < cols.size(); ++b) best = std::min(best, hamming_abs(cols[a], cols[b]));
  }
  return best;
}

std::vector<BitVector> gen_pvc_matrix(const PvcParams& p, std::size_t attempt_cap) {
  p.validate();
  Rng rng(derive_seed(p.seed, 0x5043));
  const std::size_t generators = ceil_log2(p.ell);
  const std::uint64_t mask = p.k_rows == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p.k_rows) - 1;
  for (std::size_t attempt = 0; attempt < attempt_cap; ++attempt) {
    std::vector<std::uint64_t> gens(generators);
    for (auto& g : gens) g = rng.next() & mask;
    std::vector<std::uint64_t> cols(p.ell, 0);
    for (std::size_t c = 1; c < p.ell; ++c) {
      const auto low = static_cast<std::size_t>(std::countr_zero(c));
      cols[c] = cols[c & (c - 1)] ^ gens[low];
    }
    bool separated = true;
    for (std::size_t a = 0; a < p.ell && separated; ++a) {
      for (std::size_t b = a + 1; b < p.ell; ++b) {
        if (3 * static_cast<std::size_t>(std::popcount(cols[a] ^ cols[b])) < p.k_rows) {
          separated = false;
          break;
        }
      }
    }
    if (!separated) continue;
    std::vector<BitVector> rows(p.k_rows, BitVector(p.ell));
    for (std::size_t c = 0; c < p.ell; ++c) {
      for (std::size_t i = 0; i < p.k_rows; ++i) {
        if ((cols[c] >> i) & 1u) rows[i].set(c, true);
      }
    }
    return rows;
  }
  throw ConstructionFailed("gen_pvc_matrix: no column-separated matrix within the attempt cap");
}

BitVector blow_up(const BitVector& row, std::size_t n) {
  if (row.empty() || n % row.size() != 0) throw InvalidArgument("row length must divide n");
  const std::size_t factor = n / row.size();
  BitVector out(n);
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (!row[j]) continue;
    for (std::size_t t = 0; t < factor; ++t) out.set(j * factor + t, true);
  }
  return out;
}

namespace {

PvcInstance finish_pvc(const std::vector<BitVector>& short_rows, std::size_t n, std::uint64_t sigma_seed) {
  Rng rng(sigma_seed);
  Permutation sigma = Permutation::random(n, rng);
  std::vector<BitVector> rows;
  rows.reserve(short_rows.size());
  for (const auto& r : short_rows) rows.push_back(apply_permutation(blow_up(r, n), sigma));
  CorrespondingMatrix matrix(rows);
  return PvcInstance{ExplicitDistribution::uniform(rows), std::move(matrix), std::move(sigma)};
}

}  // namespace

PvcInstance gen_pvc_yes(const PvcParams& p) {
  return finish_pvc(gen_pvc_matrix(p), p.n, derive_seed(p.seed, 0x59));
}

PvcInstance gen_pvc_no_query(const PvcParams& p) {
  const auto a = gen_pvc_matrix(p);
  Rng rng(derive_seed(p.seed, 0x4e51));
  const auto chosen = rng.sample_without_replacement(p.ell, p.ell_prime);
  std::vector<BitVector> b;
  b.reserve(a.size());
  for (const auto& row : a) b.push_back(row.project(chosen));
  return finish_pvc(b, p.n, derive_seed(p.seed, 0x4e));
}

PvcInstance gen_pvc_no_sample(const PvcParams& p) {
  const auto a = gen_pvc_matrix(p);
  Rng rng(derive_seed(p.seed, 0x4e53));
  const auto chosen = rng.sample_without_replacement(p.k_rows, p.k_prime);
  std::vector<BitVector> b;
  b.reserve(chosen.size());
  for (auto i : chosen) b.push_back(a[i]);
  return finish_pvc(b, p.n, derive_seed(p.seed, 0x4e));
}

double pvc_exact_farness(const CorrespondingMatrix& l, const CorrespondingMatrix& m) {
  if (l.rows() != m.rows() || l.cols() != m.cols()) throw InvalidArgument("matrices have different shapes");
  if (l.rows() > kExactPermutationMaxDimension) throw InvalidArgument("exact farness supports at most 8 rows");
  const auto cl = matrix_columns(l.row_vectors());
  const auto cm = matrix_columns(m.row_vectors());
  return emd_up_to_index_permutation(ExplicitDistribution::uniform(cl), ExplicitDistribution::uniform(cm),
                                     PermutationSearch::Exact);
}

std::vector<BitVector> gen_far_codeword_set(std::size_t n, std::size_t count, std::size_t min_dist, std::uint64_t seed,
                                            std::size_t attempt_cap) {
  if (n == 0) throw InvalidArgument("codeword length must be positive");
  if (attempt_cap == 0) attempt_cap = 1000 * count + 10000;
  Rng rng(seed);
  std::vector<BitVector> out;
  out.reserve(count);
  for (std::size_t attempt = 0; attempt < attempt_cap && out.size() < count; ++attempt) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.coin()) v.set(i, true);
    }
    const bool far = std::all_of(out.begin(), out.end(), [&](const BitVector& u) { return hamming_abs(u, v) >= min_dist; });
    if (far) out.push_back(std::move(v));
  }
  if (out.size() < count) {
    throw ConstructionFailed("gen_far_codeword_set: found only " + std::to_string(out.size()) + " of " +
                             std::to_string(count) + " vectors");
  }
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (std::size_t b = a + 1; b < out.size(); ++b) {
      if (hamming_abs(out[a], out[b]) < min_dist) throw std::logic_error("far codeword verification failed");
    }
  }
  return out;
}

std::vector<double> gen_supp_hard(const SuppHardParams& p, std::uint64_t seed) {
  if (p.n_supp == 0) throw InvalidArgument("n_supp must be positive");
  if (!(p.eta > 0.0 && p.eta < 0.125)) throw InvalidArgument("eta must lie in (0, 1/8)");
  const std::size_t domain = 2 * p.n_supp;
  const std::size_t support =
      p.mode == InstanceMode::Yes
          ? p.n_supp
          : static_cast<std::size_t>(std::ceil((1.0 + 2.0 * p.eta) * static_cast<double>(p.n_supp) - 1e-9));
  Rng rng(seed);
  const auto chosen = rng.sample_without_replacement(domain, support);
  std::vector<double> alphas(support, static_cast<double>(domain) / static_cast<double>(support));
  const auto units = round_counts(alphas, domain);
  std::vector<double> weights(domain, 0.0);
  for (std::size_t t = 0; t < support; ++t) weights[chosen[t]] = static_cast<double>(units[t]) / static_cast<double>(domain);
  return weights;
}

GapInstance gen_gap_distribution(const GapCodes& codes, const std::vector<double>& base, std::uint64_t seed,
                                 const GapInstanceOptions& options) {
  const GapGeometry& geo = codes.geo;
  const std::size_t domain = 2 * geo.n;
  if (base.size() != domain) throw InvalidArgument("base distribution must cover [2n]");
  if (options.z_count == 0) throw InvalidArgument("z_count must be positive");
  double total = 0.0;
  for (double w : base) {
    const double units = w * static_cast<double>(domain);
    if (w < 0.0 || std::fabs(units - std::round(units)) > 1e-9) {
      throw InvalidArgument("base weights must be non-negative multiples of 1/(2n)");
    }
    total += w;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InvalidArgument("base weights must sum to 1");

  const auto payloads = gen_far_codeword_set(geo.n, domain, (geo.n + 2) / 3, derive_seed(seed, 1));
  const auto special = special_vectors(geo);
  const double alpha = geo.gap_alpha;
  DistributionBuilder builder(geo.N);
  builder.add(special.u, alpha);
  for (const auto& v : special.v) builder.add(v, alpha / static_cast<double>(geo.b));
  for (const auto& w : special.w) builder.add(w, alpha / static_cast<double>(geo.t_count));
  Rng rng(derive_seed(seed, 2));
  std::vector<Symbol> z(geo.m);
  for (std::size_t i = 0; i < domain; ++i) {
    if (base[i] <= 0.0) continue;
    const double mass = (1.0 - 3.0 * alpha) * base[i] / static_cast<double>(options.z_count);
    for (std::size_t c = 0; c < options.z_count; ++c) {
      for (auto& s : z) s = static_cast<Symbol>(rng.below(geo.n));
      builder.add(fe_encode(geo, codes.se, codes.ge, z, payloads[i]), mass);
    }
  }
  ExplicitDistribution canonical = builder.build();
  Rng perm_rng(derive_seed(seed, 3));
  Permutation pi = Permutation::random(geo.N, perm_rng);
  ExplicitDistribution observed = permute_distribution(canonical, pi);
  return GapInstance{std::move(observed), std::move(canonical), std::move(pi)};
}

}  // namespace hugetest
