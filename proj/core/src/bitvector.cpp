#include "hugetest/bitvector.hpp"

#include <bit>

#include "hugetest/error.hpp"

namespace hugetest {

namespace {

std::size_t word_count(std::size_t length) { return (length + 63) / 64; }

}  // namespace

BitVector::BitVector(std::size_t length, bool value) : length_(length), words_(word_count(length), 0) {
  if (length == 0) throw InvalidArgument("BitVector length must be positive");
  if (value) {
    for (auto& w : words_) w = ~std::uint64_t{0};
    if (const std::size_t tail = length & 63; tail != 0) words_.back() = (std::uint64_t{1} << tail) - 1;
  }
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    } else if (bits[i] != '0') {
      throw InvalidArgument("bit string may contain only '0' and '1'");
    }
  }
  return v;
}

bool BitVector::at(std::size_t i) const {
  if (i >= length_) throw InvalidArgument("bit index out of range");
  return (*this)[i];
}

void BitVector::set(std::size_t i, bool value) {
  if (i >= length_) throw InvalidArgument("bit index out of range");
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

void BitVector::flip(std::size_t i) {
  if (i >= length_) throw InvalidArgument("bit index out of range");
  words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
}

std::size_t BitVector::count() const noexcept {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::string BitVector::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

BitVector BitVector::project(std::span<const std::size_t> indices) const {
  if (indices.empty()) throw InvalidArgument("projection onto an empty index set");
  BitVector out(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] >= length_) throw InvalidArgument("projection index out of range");
    if ((*this)[indices[t]]) out.words_[t >> 6] |= std::uint64_t{1} << (t & 63);
  }
  return out;
}

std::uint64_t BitVector::slice(std::size_t begin, std::size_t count) const {
  if (count > 64 || begin + count > length_) throw InvalidArgument("slice out of range");
  if (count == 0) return 0;
  const std::size_t w = begin >> 6;
  const std::size_t off = begin & 63;
  std::uint64_t value = words_[w] >> off;
  if (off != 0 && off + count > 64) value |= words_[w + 1] << (64 - off);
  return count == 64 ? value : value & ((std::uint64_t{1} << count) - 1);
}

void BitVector::assign_slice(std::size_t begin, std::size_t count, std::uint64_t value) {
  if (count > 64 || begin + count > length_) throw InvalidArgument("slice out of range");
  for (std::size_t t = 0; t < count; ++t) set(begin + t, (value >> t) & 1u);
}

std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
  const std::size_t common = std::min(a.words_.size(), b.words_.size());
  for (std::size_t w = 0; w < common; ++w) {
    const std::uint64_t diff = a.words_[w] ^ b.words_[w];
    if (diff == 0) continue;
    const std::size_t bit = static_cast<std::size_t>(std::countr_zero(diff));
    const std::size_t pos = w * 64 + bit;
    if (pos < a.length_ && pos < b.length_) {
      return ((a.words_[w] >> bit) & 1u) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    break;
  }
  return a.length_ <=> b.length_;
}

std::size_t hamming_abs(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw InvalidArgument("hamming distance of vectors with different lengths");
  const auto wa = a.words();
  const auto wb = b.words();
  std::size_t total = 0;
  for (std::size_t w = 0; w < wa.size(); ++w) total += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
  return total;
}

std::size_t BitVectorHash::operator()(const BitVector& v) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
  for (auto w : v.words()) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace hugetest
