#include "hugetest/codes.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>

#include <json.hpp>

#include "hugetest/error.hpp"
#include "hugetest/rng.hpp"
#include "hugetest/wide_int.hpp"

namespace hugetest {

std::size_t ceil_log2(std::size_t x) {
  if (x == 0) throw InvalidArgument("log of zero");
  std::size_t t = 0;
  while ((std::size_t{1} << t) < x) ++t;
  return t;
}

std::size_t floor_log2(std::size_t x) {
  if (x == 0) throw InvalidArgument("log of zero");
  return static_cast<std::size_t>(std::bit_width(x)) - 1;
}

GapGeometry make_gap_geometry(unsigned l, std::optional<std::size_t> k, std::optional<std::size_t> m) {
  if (l < 2 || l > 12) throw InvalidArgument("gap geometry needs 2 <= l <= 12");
  GapGeometry g;
  g.l = l;
  g.n = std::size_t{1} << l;
  g.k = k.value_or(4 * (static_cast<std::size_t>(l) + 1));
  if (g.k < 2 * (static_cast<std::size_t>(l) + 1) || g.k > 64) throw InvalidArgument("k must lie in [2(l+1), 64]");
  g.m = m.value_or((g.n + 1) / 2);
  if (g.m == 0 || g.m > g.n) throw InvalidArgument("m must lie in [1, n]");
  g.t_count = ceil_log2(g.k * g.n);
  g.b = floor_log2(g.t_count) + 1;
  g.N = 1 + g.b + g.k * g.n;
  g.gap_alpha = 1.0 / static_cast<double>(l);
  return g;
}

namespace {

std::uint64_t row_mask(std::size_t k) { return k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1; }

std::vector<std::uint64_t> span_words(std::span<const std::uint64_t> rows) {
  std::vector<std::uint64_t> words(std::size_t{1} << rows.size(), 0);
  for (std::size_t msg = 1; msg < words.size(); ++msg) {
    const auto low = static_cast<std::size_t>(std::countr_zero(msg));
    words[msg] = words[msg & (msg - 1)] ^ rows[low];
  }
  return words;
}

Int128 binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  Int128 out = 1;
  for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<Int128>(n - r + i) / static_cast<Int128>(i);
  return out;
}

}  // namespace

std::vector<std::uint64_t> weight_distribution(std::span<const std::uint64_t> rows, std::size_t k) {
  std::vector<std::uint64_t> a(k + 1, 0);
  for (auto w : span_words(rows)) ++a[static_cast<std::size_t>(std::popcount(w))];
  return a;
}

std::size_t dual_distance_from_weights(std::span<const std::uint64_t> weights, std::size_t k) {
  // MacWilliams: |C| * B_j = sum_i A_i K_j(i), with Krawtchouk K_j.
  for (std::size_t j = 1; j <= k; ++j) {
    Int128 total = 0;
    for (std::size_t i = 0; i <= k; ++i) {
      if (weights[i] == 0) continue;
      Int128 kraw = 0;
      for (std::size_t s = 0; s <= j; ++s) {
        const Int128 term = binomial(i, s) * binomial(k - i, j - s);
        kraw += (s % 2 == 0) ? term : -term;
      }
      total += static_cast<Int128>(weights[i]) * kraw;
    }
    if (total != 0) return j;
  }
  return k + 1;
}

SeCode se_from_generator(unsigned l, std::size_t k, std::vector<std::uint64_t> generator) {
  if (generator.size() != static_cast<std::size_t>(l) + 1) throw InvalidArgument("generator needs l+1 rows");
  if (k == 0 || k > 64) throw InvalidArgument("SE length must lie in [1, 64]");
  for (auto& row : generator) {
    if ((row & ~row_mask(k)) != 0) throw InvalidArgument("generator row wider than k");
  }
  SeCode code;
  code.l = l;
  code.k = k;
  code.generator = std::move(generator);
  code.codewords = span_words(code.generator);
  code.messages.reserve(code.codewords.size());
  code.min_distance = k + 1;
  for (std::size_t msg = 0; msg < code.codewords.size(); ++msg) {
    if (!code.messages.emplace(code.codewords[msg], static_cast<std::uint32_t>(msg)).second) {
      throw InvalidArgument("generator does not have full rank");
    }
    if (msg != 0) {
      code.min_distance = std::min<std::size_t>(code.min_distance, static_cast<std::size_t>(std::popcount(code.codewords[msg])));
    }
  }
  const std::span<const std::uint64_t> index_rows(code.generator.data(), l);
  code.dual_min_distance = dual_distance_from_weights(weight_distribution(index_rows, k), k);
  code.full_dual_min_distance = dual_distance_from_weights(weight_distribution(code.generator, k), k);
  const std::size_t usable = std::min(code.min_distance, code.dual_min_distance - 1);
  code.zeta_measured = static_cast<double>(usable) / static_cast<double>(k);
  return code;
}

SeCode build_se(unsigned l, std::size_t k, double target_zeta, std::uint64_t seed, SeBuildOptions options) {
  if (l == 0 || l > 16) throw InvalidArgument("SE index width must lie in [1, 16]");
  if (k < 2 * (static_cast<std::size_t>(l) + 1) || k > 64) throw InvalidArgument("SE length must lie in [2(l+1), 64]");
  if (!(target_zeta >= 0.0 && target_zeta < 1.0)) throw InvalidArgument("target zeta must lie in [0,1)");
  Rng rng(seed);
  const double needed = target_zeta * static_cast<double>(k) - 1e-9;
  std::optional<SeCode> best;
  std::size_t attempts = 0;
  std::size_t since_first = 0;
  while (attempts < options.attempt_cap && (!best || since_first < options.refinement_attempts)) {
    ++attempts;
    if (best) ++since_first;
    std::vector<std::uint64_t> rows(l + 1);
    for (auto& r : rows) r = rng.next() & row_mask(k);
    SeCode candidate;
    try {
      candidate = se_from_generator(l, k, std::move(rows));
    } catch (const InvalidArgument&) {
      continue;
    }
    if (static_cast<double>(candidate.min_distance) < needed) continue;
    if (candidate.dual_min_distance < options.min_dual_distance) continue;
    if (!best || candidate.zeta_measured > best->zeta_measured ||
        (candidate.zeta_measured == best->zeta_measured && candidate.min_distance > best->min_distance)) {
      best = std::move(candidate);
    }
  }
  if (!best) {
    throw ConstructionFailed("build_se: no generator with min distance >= " + std::to_string(target_zeta) + "*k and dual distance >= " +
                             std::to_string(options.min_dual_distance) + " after " + std::to_string(attempts) + " attempts");
  }
  return *best;
}

std::uint64_t se_encode_word(const SeCode& code, Symbol symbol, bool secret) {
  if (symbol >= (std::uint32_t{1} << code.l)) throw InvalidArgument("SE symbol out of range");
  return code.codewords[symbol | (static_cast<std::uint32_t>(secret) << code.l)];
}

BitVector se_encode(const SeCode& code, std::uint32_t index, bool secret) {
  const std::uint32_t n = std::uint32_t{1} << code.l;
  if (index < 1 || index > n) throw InvalidArgument("SE index must lie in [1, n]");
  BitVector out(code.k);
  out.assign_slice(0, code.k, se_encode_word(code, index % n, secret));
  return out;
}

std::optional<SeMessage> se_decode_word(const SeCode& code, std::uint64_t word) {
  const auto it = code.messages.find(word);
  if (it == code.messages.end()) return std::nullopt;
  const std::uint32_t mask = (std::uint32_t{1} << code.l) - 1;
  return SeMessage{it->second & mask, ((it->second >> code.l) & 1u) != 0};
}

std::optional<SeMessage> se_decode(const SeCode& code, const BitVector& word) {
  if (word.size() != code.k) throw InvalidArgument("SE word has the wrong length");
  return se_decode_word(code, word.slice(0, code.k));
}

GeCode make_ge(const GapGeometry& geo) { return GeCode{GaloisField(geo.l), geo.n, geo.m}; }

std::vector<Symbol> ge_encode(const GapGeometry& geo, const GeCode& code, std::span<const Symbol> z) {
  if (z.size() != code.m || code.n != geo.n) throw InvalidArgument("GE message has the wrong length");
  for (auto c : z) {
    if (c >= geo.n) throw InvalidArgument("GE symbol out of range");
  }
  std::vector<Symbol> y(geo.n);
  for (std::size_t x = 0; x < geo.n; ++x) {
    Symbol acc = 0;
    for (std::size_t c = z.size(); c-- > 0;) acc = code.field.mul(acc, static_cast<Symbol>(x)) ^ z[c];
    y[x] = acc;
  }
  return y;
}

std::optional<std::vector<Symbol>> ge_decode(const GapGeometry& geo, const GeCode& code, std::span<const Symbol> y) {
  if (y.size() != geo.n || code.n != geo.n) throw InvalidArgument("GE word has the wrong length");
  for (auto c : y) {
    if (c >= geo.n) throw InvalidArgument("GE symbol out of range");
  }
  const std::size_t m = code.m;
  const GaloisField& f = code.field;
  // Newton divided differences on points 0..m-1; subtraction is XOR.
  std::vector<Symbol> dd(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = m - 1; i >= j; --i) {
      const Symbol num = dd[i] ^ dd[i - 1];
      const Symbol den = static_cast<Symbol>(i ^ (i - j));
      dd[i] = f.mul(num, f.inv(den));
    }
  }
  std::vector<Symbol> coeffs(m, 0);
  coeffs[0] = dd[m - 1];
  std::size_t degree = 0;
  for (std::size_t i = m - 1; i-- > 0;) {
    // coeffs <- coeffs * (x + i) + dd[i]
    const Symbol root = static_cast<Symbol>(i);
    for (std::size_t c = degree + 1; c-- > 0;) {
      const Symbol shifted = coeffs[c];
      if (c + 1 < m) coeffs[c + 1] ^= shifted;
      coeffs[c] = f.mul(shifted, root);
    }
    coeffs[0] ^= dd[i];
    ++degree;
  }
  const auto check = ge_encode(geo, code, coeffs);
  if (!std::equal(check.begin(), check.end(), y.begin())) return std::nullopt;
  return coeffs;
}

BitVector fe_encode(const GapGeometry& geo, const SeCode& se, const GeCode& ge, std::span<const Symbol> z,
                    const BitVector& x) {
  if (x.size() != geo.n) throw InvalidArgument("FE payload must have length n");
  if (se.k != geo.k || se.l != geo.l) throw InvalidArgument("SE code does not match the geometry");
  const auto symbols = ge_encode(geo, ge, z);
  BitVector out(geo.N);
  for (std::size_t i = 1; i <= geo.b; ++i) out.set(i, true);
  for (std::size_t j = 0; j < geo.n; ++j) out.assign_slice(geo.chunk_begin(j), geo.k, se_encode_word(se, symbols[j], x[j]));
  return out;
}

std::optional<bool> fe_decode_bit(const GapGeometry& geo, const SeCode& se, const BitVector& encoded, std::size_t j) {
  if (encoded.size() != geo.N) throw InvalidArgument("FE word must have length N");
  if (j >= geo.n) throw InvalidArgument("chunk index out of range");
  const auto msg = se_decode_word(se, encoded.slice(geo.chunk_begin(j), geo.k));
  if (!msg) return std::nullopt;
  return msg->secret;
}

FeDecoding fe_decode_all(const GapGeometry& geo, const SeCode& se, const GeCode& ge, const BitVector& encoded) {
  if (encoded.size() != geo.N) throw InvalidArgument("FE word must have length N");
  FeDecoding out;
  out.prefix_ok = !encoded[0];
  for (std::size_t i = 1; i <= geo.b; ++i) out.prefix_ok = out.prefix_ok && encoded[i];
  out.symbols.resize(geo.n);
  out.x = BitVector(geo.n);
  for (std::size_t j = 0; j < geo.n; ++j) {
    const auto msg = se_decode_word(se, encoded.slice(geo.chunk_begin(j), geo.k));
    if (!msg) {
      out.invalid_chunks.push_back(j);
      continue;
    }
    out.symbols[j] = msg->symbol;
    if (msg->secret) out.x.set(j, true);
  }
  if (out.invalid_chunks.empty()) {
    std::vector<Symbol> y(geo.n);
    for (std::size_t j = 0; j < geo.n; ++j) y[j] = *out.symbols[j];
    out.z = ge_decode(geo, ge, y);
  }
  out.valid = out.prefix_ok && out.invalid_chunks.empty() && out.z.has_value();
  return out;
}

bool fe_is_valid(const GapGeometry& geo, const SeCode& se, const GeCode& ge, const BitVector& encoded) {
  return fe_decode_all(geo, se, ge, encoded).valid;
}

GapCodes make_gap_codes(unsigned l, std::uint64_t seed, const GapCodeOptions& options) {
  GapGeometry geo = make_gap_geometry(l, options.k, options.m);
  SeCode se = build_se(l, geo.k, options.target_zeta, seed, options.se);
  geo.zeta_measured = se.zeta_measured;
  GeCode ge = make_ge(geo);
  return GapCodes{geo, std::move(se), std::move(ge)};
}

std::string code_descriptor_json(const GapCodes& codes) {
  nlohmann::ordered_json j;
  const auto& g = codes.geo;
  j["geometry"] = {{"l", g.l}, {"n", g.n}, {"k", g.k}, {"b", g.b}, {"m", g.m}, {"N", g.N},
                   {"t_count", g.t_count}, {"gap_alpha", g.gap_alpha}, {"zeta_measured", g.zeta_measured}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%x", codes.ge.field.polynomial());
  j["field_polynomial"] = buf;
  auto rows = nlohmann::ordered_json::array();
  for (auto r : codes.se.generator) {
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(r));
    rows.push_back(buf);
  }
  j["se"] = {{"l", codes.se.l},
             {"k", codes.se.k},
             {"generator_rows", rows},
             {"min_distance", codes.se.min_distance},
             {"dual_min_distance", codes.se.dual_min_distance},
             {"full_dual_min_distance", codes.se.full_dual_min_distance},
             {"zeta_measured", codes.se.zeta_measured}};
  return j.dump(2);
}

}  // namespace hugetest
