#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hugetest {

// Fixed-length binary vector packed into 64-bit words. Bits beyond size()
// in the last word are always zero, so word-wise comparison and hashing
// are exact.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length, bool value = false);

  static BitVector from_string(std::string_view bits);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  bool operator[](std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  std::size_t count() const noexcept;
  std::string to_string() const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  BitVector project(std::span<const std::size_t> indices) const;

  // Bits [begin, begin+count) packed LSB-first; count <= 64.
  std::uint64_t slice(std::size_t begin, std::size_t count) const;
  void assign_slice(std::size_t begin, std::size_t count, std::uint64_t value);

  friend bool operator==(const BitVector& a, const BitVector& b) = default;
  // Lexicographic in position order (position 0 most significant), then by length.
  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b);

 private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t hamming_abs(const BitVector& a, const BitVector& b);

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const noexcept;
};

}  // namespace hugetest
